import numpy as np
import pytest

from tracedist import fock, gauss
from tracedist.errors import DomainError, MetricInconsistencyError
from tracedist.figures import fig3_top_pair
from tracedist.lanczos import (
    assemble_t,
    build_c,
    orthogonalize,
    run_lanczos,
    trace_distance_lower_bound,
    trace_distance_pure_mixed,
)
from tracedist.moments import hankel_metrics, moments_gaussian
from tracedist.statespec import cat_ket, lossy_cat_operator


def fig1_top_case(nbar=1.0, steps=10):
    psi = gauss.vacuum()
    rho = gauss.squashed(nbar)
    moments = moments_gaussian(psi, rho, 2 * steps + 1)
    return psi, rho, moments


class TestBuildC:
    def test_first_row_pair(self):
        _, _, moments = fig1_top_case()
        C = build_c(moments, 1, "pure_mixed")
        assert C[0, 0] == 1.0
        assert np.allclose(C[1], [1.0, -1.0], atol=0)

    def test_second_row_matches_recurrence(self):
        _, _, moments = fig1_top_case()
        C = build_c(moments, 2, "pure_mixed")
        mu1 = moments.values[1]
        assert C[2, 0] == pytest.approx(1.0 - mu1, abs=1e-14)
        assert C[2, 1] == -1.0
        assert C[2, 2] == 1.0

    def test_difference_mode_is_identity(self):
        _, _, moments = fig1_top_case()
        assert np.array_equal(build_c(moments, 4, "difference"), np.eye(5))

    def test_lower_triangular(self):
        _, _, moments = fig1_top_case()
        C = build_c(moments, 6, "pure_mixed")
        assert np.abs(np.triu(C, 1)).max() == 0.0


class TestOrthogonalize:
    def test_order_zero(self):
        _, _, moments = fig1_top_case()
        pair = hankel_metrics(moments, 0)
        C = build_c(moments, 0, "pure_mixed")
        _, D, norms, breakdown, truncated, _ = orthogonalize(C, pair.G)
        assert np.array_equal(D, [[1.0]])
        assert breakdown is None and truncated is None

    def test_thermal_breaks_down_at_one(self):
        # the vacuum is an eigenvector of |0><0| - rho_th: the Krylov
        # space is one-dimensional
        moments = moments_gaussian(gauss.vacuum(), gauss.thermal(1.0), 5)
        pair = hankel_metrics(moments, 2)
        C = build_c(moments, 2, "pure_mixed")
        _, D, _, breakdown, _, _ = orthogonalize(C, pair.G)
        assert breakdown == 1
        assert D.shape[0] == 1

    def test_orthonormality_on_reference_inputs(self):
        _, _, moments = fig1_top_case(nbar=1.0, steps=10)
        pair = hankel_metrics(moments, 10)
        C = build_c(moments, 10, "pure_mixed")
        _, D, _, _, _, drift = orthogonalize(C, pair.G)
        gram = D @ pair.G @ D.T
        assert np.abs(gram - np.eye(D.shape[0])).max() < 1e-6
        assert drift < 1e-6

    def test_negative_norm_raises(self):
        G = np.array([[1.0, 0.0], [0.0, -1.0]])
        C = np.eye(2)
        with pytest.raises(MetricInconsistencyError):
            orthogonalize(C, G)


class TestAssembleT:
    def test_order_zero_value(self):
        moments = moments_gaussian(gauss.vacuum(), gauss.thermal(1.0), 1)
        pair = hankel_metrics(moments, 0)
        T = assemble_t(np.array([[1.0]]), pair, "pure_mixed")
        assert T[0, 0] == pytest.approx(0.5, abs=1e-12)

    def test_tridiagonal_on_reference_inputs(self):
        ws = run_lanczos(fig1_top_case(nbar=1.0, steps=10)[2], 10, "pure_mixed")
        offband = np.triu(np.abs(ws.T), 2)
        assert offband.max() < 1e-6

    def test_difference_mode_has_no_rank_one_term(self):
        rho1, rho2 = gauss.thermal(0.5), gauss.squashed(0.8)
        c = gauss.coherent(0.3)
        from tracedist.moments import moments_mixed_difference

        moments = moments_mixed_difference(c, rho1, rho2, 3)
        pair = hankel_metrics(moments, 1)
        C = build_c(moments, 1, "difference")
        _, D, _, _, _, _ = orthogonalize(C, pair.G)
        T = assemble_t(D, pair, "difference")
        assert T[0, 0] == pytest.approx(moments.values[1], abs=1e-12)


class TestPureMixedDriver:
    def test_self_distance_vanishes(self):
        psi = gauss.coherent(0.8)
        est = trace_distance_pure_mixed(psi, psi.base, steps=5)
        assert est.value <= 1e-10
        assert est.breakdown_step == 1

    def test_thermal_closed_form(self):
        est = trace_distance_pure_mixed(gauss.vacuum(), gauss.thermal(1.0), steps=5)
        assert est.value == pytest.approx(0.5, abs=1e-12)
        assert est.breakdown_step == 1
        assert est.ritz_history.shape == (1,)

    def test_reference_case_matches_oracle(self):
        psi, rho, _ = fig1_top_case(nbar=1.0)
        est = trace_distance_pure_mixed(psi, rho, steps=10)
        d_or = fock.trace_distance_exact(
            fock.gaussian_to_fock(psi.base), fock.gaussian_to_fock(rho)
        )
        assert est.value == pytest.approx(d_or, abs=1e-6)

    def test_history_monotone(self, rng):
        for _ in range(10):
            psi = gauss.random_pure_ket(1, rng)
            rho = gauss.random_state(1, rng)
            est = trace_distance_pure_mixed(psi, rho, steps=8)
            assert np.all(np.diff(est.ritz_history) >= -1e-10)
            assert 0.0 <= est.value <= 1.0 + 1e-8

    def test_single_positive_ritz_value(self, rng):
        for _ in range(20):
            psi = gauss.random_pure_ket(1, rng)
            rho = gauss.random_state(1, rng)
            ws = trace_distance_pure_mixed(psi, rho, steps=8).workspace
            assert np.sum(ws.ritz > 1e-8) <= 1

    def test_lincomb_operator_route(self):
        psi = cat_ket(2.0, 2, "+")
        rho = lossy_cat_operator(2.0, 2, 0.3, "+")
        est = trace_distance_pure_mixed(psi, rho, steps=10)
        d_or = fock.trace_distance_exact(fock.lincomb_to_fock(psi), fock.lincomb_to_fock(rho))
        assert est.value == pytest.approx(d_or, abs=1e-6)

    def test_lincomb_ket_against_gaussian_state(self):
        psi = cat_ket(1.0, 2, "+")
        rho = gauss.thermal(0.5)
        est = trace_distance_pure_mixed(psi, rho, steps=6)
        A = fock.lincomb_to_fock(psi)
        B = fock.gaussian_to_fock(rho)
        d_or = fock.trace_distance_exact(A, B)
        assert est.value <= d_or + 1e-8
        assert est.value == pytest.approx(d_or, abs=1e-4)

    def test_breakdown_is_exact(self):
        # rank-2 difference: pure rho as mixed input, breakdown at 2
        psi = gauss.squeezed_vacuum(0.5)
        rho = gauss.coherent(0.4).base
        est = trace_distance_pure_mixed(psi, rho, steps=8)
        assert est.breakdown_step == 2
        d_or = fock.trace_distance_exact(
            fock.gaussian_to_fock(psi.base), fock.gaussian_to_fock(rho)
        )
        assert est.value == pytest.approx(d_or, abs=1e-8)

    def test_povm_rayleigh_quotient(self):
        psi, rho, _ = fig1_top_case(nbar=1.0)
        est = trace_distance_pure_mixed(psi, rho, steps=10, want_povm=True)
        T = est.workspace.T
        w, vecs = np.linalg.eigh(T)
        v = vecs[:, -1]
        assert v @ T @ v == pytest.approx(est.value, abs=1e-10)
        assert est.povm_coefficients is not None

    def test_povm_vector_in_fock(self):
        # breakdown closes the Krylov space, so the Ritz vector is an
        # exact eigenvector of |psi><psi| - rho
        psi = gauss.squeezed_vacuum(0.5)
        rho = gauss.coherent(0.4).base
        est = trace_distance_pure_mixed(psi, rho, steps=8, want_povm=True)
        assert est.breakdown_step == 2
        vec = fock.pure_ket_fock_vector(psi)
        rho_f = fock.gaussian_to_fock(rho).matrix
        krylov = np.stack(
            [np.linalg.matrix_power(rho_f, k) @ vec for k in range(len(est.povm_coefficients))]
        )
        lam_vec = est.povm_coefficients @ krylov
        lam_vec = lam_vec / np.linalg.norm(lam_vec)
        A = np.outer(vec, np.conj(vec)) - rho_f
        assert np.abs(A @ lam_vec - est.value * lam_vec).max() < 1e-6

    def test_step_validation(self):
        with pytest.raises(DomainError):
            trace_distance_pure_mixed(gauss.vacuum(), gauss.thermal(1.0), steps=0)

    def test_hbar_invariance(self):
        values = []
        for hbar in (1.0, 2.0):
            psi = gauss.vacuum(hbar=hbar)
            rho = gauss.squashed(1.0, hbar=hbar)
            values.append(trace_distance_pure_mixed(psi, rho, steps=10).value)
        assert values[0] == pytest.approx(values[1], abs=1e-10)


class TestLowerBoundDriver:
    def test_identical_states(self):
        rho = gauss.thermal(0.6)
        trial = gauss.coherent(0.2)
        est = trace_distance_lower_bound(rho, rho, trial, steps=3)
        assert est.value <= 1e-10
        assert est.kind == "lower_bound"

    def test_gaussian_pair_sound_and_monotone(self):
        rho1, rho2 = fig3_top_pair(0.8 + 0j, 1.5, 0.6)
        trial = gauss.PureGaussianKet(gauss.GaussianState(np.array([1.5, 1.5]), np.eye(2), 2.0))
        est = trace_distance_lower_bound(rho1, rho2, trial, steps=5)
        d_or = fock.trace_distance_exact(
            fock.gaussian_to_fock(rho1), fock.gaussian_to_fock(rho2)
        )
        assert est.value <= d_or + 1e-8
        assert np.all(np.diff(est.ritz_history) >= -1e-10)

    def test_lincomb_pair_sound_and_monotone(self):
        plus = lossy_cat_operator(2.0, 2, 0.5, "+")
        minus = lossy_cat_operator(2.0, 2, 0.5, "-")
        est5 = trace_distance_lower_bound(plus, minus, gauss.coherent(2.0), steps=5)
        est10 = trace_distance_lower_bound(plus, minus, gauss.coherent(2.0), steps=10)
        d_or = fock.trace_distance_exact(fock.lincomb_to_fock(plus), fock.lincomb_to_fock(minus))
        assert est10.value <= d_or + 1e-8
        assert est10.value >= est5.value - 1e-10
        assert np.all(np.diff(est10.ritz_history) >= -1e-10)

    def test_mixed_representations_rejected(self):
        plus = lossy_cat_operator(2.0, 2, 0.5, "+")
        with pytest.raises(DomainError):
            trace_distance_lower_bound(plus, gauss.thermal(1.0), gauss.coherent(2.0))

    def test_two_mode_instances_single_positive(self, rng):
        for _ in range(5):
            psi = gauss.random_pure_ket(2, rng)
            rho = gauss.random_state(2, rng)
            ws = trace_distance_pure_mixed(psi, rho, steps=6).workspace
            assert np.sum(ws.ritz > 1e-8) <= 1


class TestTwoModeValidation:
    def test_product_pair_matches_kron_oracle(self, rng):
        # two-mode product states admit an independent tensor-product
        # oracle; the estimator sees only the 4x4 covariance data
        for _ in range(5):
            psi_parts = [gauss.random_pure_ket(1, rng, max_disp=1.0) for _ in range(2)]
            rho_parts = [gauss.random_state(1, rng, max_nbar=0.8, max_disp=1.0) for _ in range(2)]
            psi = gauss.PureGaussianKet(gauss.product_state([k.base for k in psi_parts]))
            rho = gauss.product_state(rho_parts)
            est = trace_distance_pure_mixed(psi, rho, steps=10)
            d_or = fock.trace_distance_exact(
                fock.two_mode_product_to_fock(psi.base, 30),
                fock.two_mode_product_to_fock(rho, 30),
            )
            assert est.value <= d_or + 1e-6
            assert est.value == pytest.approx(d_or, abs=1e-4)

    def test_correlated_pair_respects_sandwich(self, rng):
        from tracedist.bounds import fidelity_sandwich

        for _ in range(5):
            psi = gauss.random_pure_ket(2, rng)
            rho = gauss.random_state(2, rng)
            est = trace_distance_pure_mixed(psi, rho, steps=10)
            lo, hi = fidelity_sandwich(psi, rho)
            assert lo - 1e-8 <= est.value <= hi + 1e-8

    def test_lower_bound_hbar_invariance(self):
        values = []
        for hbar in (1.0, 2.0):
            r1 = gauss.loss_channel(gauss.coherent(0.8, hbar=hbar).base, 0.6)
            r2 = gauss.loss_channel(gauss.coherent(-0.8, hbar=hbar).base, 0.6)
            trial = gauss.PureGaussianKet(
                gauss.GaussianState(np.sqrt(hbar / 2.0) * np.array([1.5, 1.5]), (hbar / 2.0) * np.eye(2), hbar)
            )
            values.append(trace_distance_lower_bound(r1, r2, trial, steps=4).value)
        assert values[0] == pytest.approx(values[1], abs=1e-10)
