import numpy as np
import pytest

from tracedist import bargmann, fock, gauss
from tracedist.bargmann import (
    invariant_kernel,
    multivariate_trace,
    pure_moment_invariant,
    pure_overlap,
    stacked_chain_invariants,
    vacuum_probability,
)
from tracedist.errors import DomainError, GaugeError, ShapeError
from tracedist.moments import hankel_metrics, moments_gaussian


def test_two_identical_vacua_is_one():
    assert multivariate_trace([gauss.vacuum(), gauss.vacuum()]) == pytest.approx(1.0)


def test_thermal_vacuum_overlap():
    # <0| rho_th |0> = 1/(1 + nbar)
    value = multivariate_trace([gauss.thermal(1.0), gauss.vacuum()])
    assert value.real == pytest.approx(0.5, abs=1e-14)
    assert abs(value.imag) < 1e-14


def test_single_state_normalization_base_case():
    assert multivariate_trace([gauss.thermal(2.0)]) == pytest.approx(1.0)


def test_triples_match_fock_product_trace(rng):
    for _ in range(25):
        states = [gauss.random_state(1, rng, max_nbar=1.0, max_disp=1.2) for _ in range(3)]
        value = multivariate_trace(states)
        oracle = fock.product_trace([fock.gaussian_to_fock(s) for s in states])
        assert abs(value - oracle) < 1e-8


def test_two_state_traces_are_symmetric(rng):
    for _ in range(15):
        a = gauss.random_state(1, rng)
        b = gauss.random_state(1, rng)
        assert abs(multivariate_trace([a, b]) - multivariate_trace([b, a])) < 1e-10


def test_kernel_matches_block_construction():
    states = [gauss.thermal(0.5), gauss.squashed(0.3), gauss.coherent(0.4).base]
    kern = invariant_kernel(states)
    m, M = 3, 1
    hbar = 2.0
    om = gauss.symplectic_form(M)
    jmat = np.triu(np.ones((m - 1, m - 1)), 1)
    diag = np.zeros((4, 4), dtype=complex)
    for k in range(2):
        diag[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = states[k].V + states[-1].V
    coup = np.kron(jmat, states[-1].V + 1j * (hbar / 2) * om)
    assert np.abs(kern.mmat - (diag + coup + coup.T)).max() < 1e-12 * np.abs(kern.mmat).max()
    assert np.array_equal(kern.jmat, jmat)
    assert np.allclose(kern.z, np.concatenate([states[0].r - states[2].r, states[1].r - states[2].r]))


def test_mode_separable_path_equals_dense(rng):
    parts1 = [gauss.random_state(1, rng) for _ in range(2)]
    parts2 = [gauss.random_state(1, rng) for _ in range(2)]
    prod1 = gauss.product_state(parts1)
    prod2 = gauss.product_state(parts2)
    sep = multivariate_trace([prod1, prod2, prod1])
    dense = np.exp(
        bargmann._chain_log_dense([prod1, prod2, prod1], 2.0)
    )
    assert abs(sep - dense) < 1e-12
    per_mode = np.prod(
        [
            multivariate_trace([a, b, a])
            for a, b in zip(parts1, parts2)
        ]
    )
    assert abs(sep - per_mode) < 1e-12


def test_hbar_mismatch_rejected():
    with pytest.raises(DomainError):
        multivariate_trace([gauss.vacuum(hbar=1.0), gauss.vacuum(hbar=2.0)])
    with pytest.raises(ShapeError):
        multivariate_trace([gauss.vacuum(2), gauss.vacuum(1)])


class TestPureMomentInvariant:
    def test_zeroth_is_one(self):
        assert pure_moment_invariant(gauss.vacuum(), gauss.thermal(0.3), 0) == 1.0

    def test_thermal_powers(self):
        # <0| rho_th^ell |0> = (1 + nbar)^{-ell}
        for ell in range(1, 5):
            value = pure_moment_invariant(gauss.vacuum(), gauss.thermal(1.0), ell)
            assert value == pytest.approx(0.5**ell, abs=1e-12)

    def test_squashed_against_fock(self):
        rho = gauss.squashed(0.5)
        value = pure_moment_invariant(gauss.vacuum(), rho, 1)
        vec = fock.pure_ket_fock_vector(gauss.vacuum())
        oracle = fock.moment_from_fock(vec, fock.gaussian_to_fock(rho), 1)
        assert value == pytest.approx(oracle, abs=1e-8)

    def test_non_increasing_in_power(self, rng):
        for _ in range(10):
            psi = gauss.random_pure_ket(1, rng)
            rho = gauss.random_state(1, rng)
            vals = [pure_moment_invariant(psi, rho, ell) for ell in range(6)]
            assert all(vals[i + 1] <= vals[i] + 1e-10 for i in range(5))

    def test_hankel_psd(self, rng):
        for _ in range(10):
            psi = gauss.random_pure_ket(1, rng)
            rho = gauss.random_state(1, rng)
            metrics = hankel_metrics(moments_gaussian(psi, rho, 7), 3)
            assert np.linalg.eigvalsh(metrics.G).min() > -1e-8


class TestPureOverlap:
    def test_self_overlap(self):
        ket = gauss.coherent(0.8 + 0.1j)
        assert pure_overlap(ket, ket) == pytest.approx(1.0, abs=1e-12)

    def test_coherent_pair_matches_fock_series(self):
        a, b = 0.9 - 0.4j, -0.6 + 1.1j
        va = fock.coherent_fock_vector(a, 100)
        vb = fock.coherent_fock_vector(b, 100)
        series = np.vdot(va, vb)
        assert abs(pure_overlap(gauss.coherent(a), gauss.coherent(b)) - series) < 1e-10

    def test_squeezed_vacuum_modulus(self):
        ket = gauss.squeezed_vacuum(0.5)
        ov = pure_overlap(gauss.vacuum(), ket)
        assert abs(ov) ** 2 == pytest.approx(1 / np.cosh(0.5), abs=1e-12)
        # modulus contract against the two-state invariant
        assert abs(ov) ** 2 == pytest.approx(
            multivariate_trace([gauss.vacuum(), ket]).real, abs=1e-8
        )

    def test_modulus_contract_random(self, rng):
        for _ in range(10):
            g = gauss.random_pure_ket(1, rng)
            f = gauss.random_pure_ket(1, rng)
            ov = pure_overlap(g, f)
            assert abs(ov) ** 2 == pytest.approx(
                multivariate_trace([g, f]).real, abs=1e-8
            )

    def test_gauge_positive_vacuum_amplitude(self, rng):
        # <0|g> reconstructed from the overlap with the vacuum is real positive
        for _ in range(5):
            g = gauss.random_pure_ket(1, rng)
            amp = pure_overlap(gauss.vacuum(), g)
            assert amp.real > 0
            assert abs(amp.imag) < 1e-10 * abs(amp)

    def test_gauge_error_without_vacuum_component(self):
        far = gauss.coherent(40.0)  # |<0|g>|^2 = e^{-1600}, below the log floor
        with pytest.raises(GaugeError):
            pure_overlap(far, gauss.coherent(40.0 + 1e-3j))


def test_vacuum_probability_examples():
    assert vacuum_probability(gauss.vacuum().base) == pytest.approx(1.0, abs=1e-12)
    assert vacuum_probability(gauss.thermal(1.0)) == pytest.approx(0.5, abs=1e-12)
    assert vacuum_probability(gauss.coherent(1.0).base) == pytest.approx(np.exp(-1), abs=1e-12)


def test_stacked_chain_invariants_match_single(rng):
    choices = [gauss.thermal(0.4), gauss.squashed(0.9)]
    last = gauss.coherent(0.2 - 0.3j)
    idx = np.array(list(np.ndindex(2, 2, 2)))
    batch = stacked_chain_invariants(choices, idx, last)
    for row, value in zip(idx, batch):
        chain = [choices[i] for i in row] + [last]
        assert abs(multivariate_trace(chain) - value) < 1e-13


def test_degenerate_kernel_carries_condition_estimate():
    from tracedist.errors import DegeneracyError

    huge = gauss.squeezed_vacuum(25.0)  # condition ~ e^100 across quadratures
    with pytest.raises(DegeneracyError) as info:
        multivariate_trace([huge, gauss.vacuum()])
    assert info.value.condition is None or info.value.condition > 1e14


class TestLongChainInvariants:
    def test_long_chains_match_fock_product_trace(self, rng):
        # chains up to six states carry nontrivial complex phases and
        # exercise the determinant branch far from the two-state case
        for m in (4, 5, 6):
            for _ in range(5):
                states = [
                    gauss.random_state(1, rng, max_nbar=0.8, max_disp=1.0) for _ in range(m)
                ]
                value = multivariate_trace(states)
                oracle = fock.product_trace([fock.gaussian_to_fock(s) for s in states])
                assert abs(value - oracle) < 1e-8
                assert abs(value.imag) > 0  # generic chains are genuinely complex

    def test_cyclic_invariance(self, rng):
        states = [gauss.random_state(1, rng, max_nbar=0.8, max_disp=1.0) for _ in range(5)]
        base = multivariate_trace(states)
        for shift in range(1, 5):
            rotated = states[shift:] + states[:shift]
            assert abs(multivariate_trace(rotated) - base) < 1e-12

    def test_order_reversal_conjugates(self, rng):
        states = [gauss.random_state(1, rng, max_nbar=0.8, max_disp=1.0) for _ in range(5)]
        forward = multivariate_trace(states)
        backward = multivariate_trace(states[::-1])
        assert abs(backward - np.conj(forward)) < 1e-12
