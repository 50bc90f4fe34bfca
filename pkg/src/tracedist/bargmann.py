"""Multivariate traces (Bargmann invariants) of Gaussian states.

The trace of an ordered product of Gaussian states is a closed-form
Gaussian integral over the states' first moments and covariances,

    Tr(rho_1 ... rho_m) = exp(-z^T M^{-1} z / 2) / sqrt(det(M / hbar)),

with z the stacked moment differences against the last state and M a
complex symmetric block matrix.  M has positive-definite real part, so
every eigenvalue lies in the open right half-plane and the square root
of the determinant is evaluated on the correct analytic branch by
halving the sum of principal-branch eigenvalue logarithms.

Phase-fixed overlaps of pure kets (gauge <0|g> >= 0) are obtained from
ratios of these invariants, evaluated in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegeneracyError, DomainError, GaugeError, ShapeError
from .gauss import GaussianState, PureGaussianKet, purity_defect, symplectic_form, vacuum

# Invariants whose physics demands a real value may carry at most this
# imaginary residual.
IMAG_TOL = 1e-10

# log(|<0|g>|^2) below this floor means the vacuum amplitude is
# numerically nil and the phase gauge cannot be anchored.
GAUGE_LOG_FLOOR = -650.0

_COND_LIMIT = 1e14


def _as_state(obj) -> GaussianState:
    return obj.base if isinstance(obj, PureGaussianKet) else obj


def _check_family(states: Sequence[GaussianState]):
    if not states:
        raise ShapeError("need at least one state")
    M = states[0].num_modes
    hbar = states[0].hbar
    for s in states[1:]:
        if s.num_modes != M:
            raise ShapeError(f"mode mismatch: {s.num_modes} vs {M}")
        if s.hbar != hbar:
            raise DomainError(f"hbar mismatch: {s.hbar} vs {hbar}")
    return M, hbar


def _is_mode_separable(V: np.ndarray, M: int) -> bool:
    if M == 1:
        return True
    mode = np.concatenate([np.arange(M), np.arange(M)])
    mask = mode[:, None] != mode[None, :]
    return not np.any(V[mask])


def _mode_restriction(r: np.ndarray, V: np.ndarray, M: int, i: int):
    sel = [i, M + i]
    return r[sel], V[np.ix_(sel, sel)]


@dataclass(frozen=True, eq=False)
class InvariantKernel:
    """The (z, M) data of the Gaussian trace formula together with the
    strictly-upper-triangular ones matrix J used to assemble M."""

    z: np.ndarray
    mmat: np.ndarray
    jmat: np.ndarray


def invariant_kernel(states: Sequence[GaussianState | PureGaussianKet]) -> InvariantKernel:
    """Assemble z and M for an ordered chain of m >= 2 states."""
    states = [_as_state(s) for s in states]
    M, hbar = _check_family(states)
    m = len(states)
    if m < 2:
        raise ShapeError("kernel assembly needs at least two states")
    dim = 2 * M
    V_last = states[-1].V
    r_last = states[-1].r
    omega = symplectic_form(M)

    jmat = np.triu(np.ones((m - 1, m - 1)), k=1)
    blockdiag = np.zeros(((m - 1) * dim, (m - 1) * dim), dtype=complex)
    for k in range(m - 1):
        sl = slice(k * dim, (k + 1) * dim)
        blockdiag[sl, sl] = states[k].V + V_last
    coupling = np.kron(jmat, V_last + 1j * (hbar / 2.0) * omega)
    mmat = blockdiag + coupling + coupling.T
    z = np.concatenate([states[k].r - r_last for k in range(m - 1)])
    return InvariantKernel(z=z, mmat=mmat, jmat=jmat)


def _logdet_half(mmat: np.ndarray, hbar: float) -> complex:
    """log sqrt(det(M / hbar)) on the analytically continued branch."""
    lam = np.linalg.eigvals(mmat)
    mods = np.abs(lam)
    if mods.min() == 0.0 or mods.max() / mods.min() > _COND_LIMIT:
        raise DegeneracyError(
            "kernel matrix is numerically singular",
            condition=float(mods.max() / max(mods.min(), np.finfo(float).tiny)),
        )
    if np.any(lam.real <= 0.0):
        raise DegeneracyError("kernel matrix left the right half-plane; inputs are not valid states")
    return 0.5 * (np.sum(np.log(lam)) - lam.size * np.log(hbar))


def _all_equal_pure(states: Sequence[GaussianState]) -> bool:
    V0 = states[0].V
    if any(not np.array_equal(s.V, V0) for s in states[1:]):
        return False
    return abs(purity_defect(states[0])) <= 1e-8


def _chain_log_dense(states: Sequence[GaussianState], hbar: float) -> complex:
    kern = invariant_kernel(states)
    if _all_equal_pure(states):
        half = 0.0
    else:
        half = _logdet_half(kern.mmat, hbar)
    if np.any(kern.z):
        quad = -0.5 * (kern.z @ np.linalg.solve(kern.mmat, kern.z.astype(complex)))
    else:
        quad = 0.0
    return quad - half


def multivariate_trace_log(states: Sequence[GaussianState | PureGaussianKet]) -> complex:
    """log Tr(rho_1 ... rho_m); exact base case log Tr(rho) = 0 for m = 1."""
    states = [_as_state(s) for s in states]
    M, hbar = _check_family(states)
    if len(states) == 1:
        return 0.0 + 0.0j
    if M > 1 and all(_is_mode_separable(s.V, M) for s in states):
        total = 0.0 + 0.0j
        for i in range(M):
            per_mode = [
                GaussianState(*_mode_restriction(s.r, s.V, M, i), hbar=hbar) for s in states
            ]
            total += _chain_log_dense(per_mode, hbar)
        return total
    return _chain_log_dense(states, hbar)


def multivariate_trace(states: Sequence[GaussianState | PureGaussianKet]) -> complex:
    """Tr(rho_1 ... rho_m) from the closed-form Gaussian kernel."""
    return complex(np.exp(multivariate_trace_log(states)))


def _ensure_real(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise DegeneracyError(f"{what} carries imaginary residual {value.imag:.3e}")
    return value.real


def pure_moment_invariant(psi: PureGaussianKet, rho: GaussianState, ell: int) -> float:
    """<psi| rho^ell |psi> as the trace of the chain (rho, ..., rho, |psi><psi|)."""
    if ell < 0:
        raise DomainError(f"moment order must be non-negative, got {ell}")
    if ell == 0:
        return 1.0
    value = multivariate_trace([rho] * ell + [psi])
    if abs(value.imag) > IMAG_TOL:
        raise DegeneracyError(
            f"moment ell={ell} carries imaginary residual {value.imag:.3e}"
        )
    return float(value.real)


def _log_vacuum_weight(ket: PureGaussianKet) -> float:
    """log |<0|g>|^2, guarded against numerically vanishing amplitudes."""
    vac = vacuum(ket.num_modes, ket.hbar)
    lg = multivariate_trace_log([ket, vac])
    lg = _ensure_real(lg, "vacuum weight")
    if lg < GAUGE_LOG_FLOOR:
        raise GaugeError(
            "ket has numerically no vacuum component; supply an explicit phase reference"
        )
    return lg


def pure_overlap(g: PureGaussianKet, f: PureGaussianKet) -> complex:
    """<g|f> in the gauge where every pure Gaussian ket has <0|ket> >= 0.

    Computed as Tr(|g><g| |f><f| |0><0|) / (<f|0> <0|g>), with the two
    vacuum amplitudes positive square roots; all factors are evaluated
    in log space so the ratio never over- or underflows.
    """
    _check_family([_as_state(g), _as_state(f)])
    lgg = _log_vacuum_weight(g)
    lff = _log_vacuum_weight(f)
    vac = vacuum(g.num_modes, g.hbar)
    l3 = multivariate_trace_log([g, f, vac])
    return complex(np.exp(l3 - 0.5 * (lgg + lff)))


def vacuum_probability(rho: GaussianState | PureGaussianKet) -> float:
    """Tr(rho |0><0|), the vacuum matrix element of the state."""
    rho = _as_state(rho)
    value = multivariate_trace([rho, vacuum(rho.num_modes, rho.hbar)])
    out = _ensure_real(value, "vacuum probability")
    return float(min(max(out, 0.0), 1.0))


# ---------------------------------------------------------------------------
# Batched kernels for the exponential-cost metric sums


def _stacked_dense_log(choice_r, choice_V, idx, r_last, V_last, hbar):
    """Log invariants for a stack of chains that differ only in which of
    a few states occupies each slot; the final state is fixed.

    choice_r: (K, 2M); choice_V: (K, 2M, 2M); idx: (T, L) integer rows.
    """
    T, L = idx.shape
    dim = choice_r.shape[1]
    n = L * dim
    M = dim // 2
    omega = symplectic_form(M)
    upper = V_last + 1j * (hbar / 2.0) * omega
    lower = V_last - 1j * (hbar / 2.0) * omega

    base = np.zeros((n, n), dtype=complex)
    for a in range(L):
        for b in range(L):
            sl_a = slice(a * dim, (a + 1) * dim)
            sl_b = slice(b * dim, (b + 1) * dim)
            if a == b:
                base[sl_a, sl_b] = V_last
            else:
                base[sl_a, sl_b] = upper if a < b else lower

    mst = np.broadcast_to(base, (T, n, n)).copy()
    z = np.empty((T, n))
    for a in range(L):
        sl = slice(a * dim, (a + 1) * dim)
        mst[:, sl, sl] += choice_V[idx[:, a]]
        z[:, sl] = choice_r[idx[:, a]] - r_last

    lam = np.linalg.eigvals(mst)
    mods = np.abs(lam)
    if mods.min() == 0.0 or (mods.max(axis=1) / mods.min(axis=1)).max() > _COND_LIMIT:
        raise DegeneracyError("kernel matrix is numerically singular in a batched chain")
    if np.any(lam.real <= 0.0):
        raise DegeneracyError("batched kernel matrix left the right half-plane")
    logdet = np.log(lam).sum(axis=1) - n * np.log(hbar)

    y = np.linalg.solve(mst, z.astype(complex)[..., None])[..., 0]
    quad = -0.5 * np.einsum("ti,ti->t", z, y)
    return quad - 0.5 * logdet


def stacked_chain_invariants(
    choices: Sequence[GaussianState],
    idx: np.ndarray,
    last: GaussianState | PureGaussianKet,
) -> np.ndarray:
    """Tr(rho_{i_1} ... rho_{i_L} sigma) for every index row of idx,
    with rho drawn from `choices` and sigma = `last` fixed.

    Factorizes over modes when every covariance involved is exactly
    mode-separable, which keeps multimode sweeps desk-scale.
    """
    last = _as_state(last)
    M, hbar = _check_family(list(choices) + [last])
    idx = np.asarray(idx, dtype=int)
    if idx.ndim != 2:
        raise ShapeError("idx must be (num_chains, chain_length)")
    if idx.shape[1] == 0:
        return np.ones(idx.shape[0], dtype=complex)

    separable = M > 1 and all(
        _is_mode_separable(s.V, M) for s in list(choices) + [last]
    )
    if separable:
        total = np.zeros(idx.shape[0], dtype=complex)
        for i in range(M):
            cr = np.stack([_mode_restriction(s.r, s.V, M, i)[0] for s in choices])
            cV = np.stack([_mode_restriction(s.r, s.V, M, i)[1] for s in choices])
            lr, lV = _mode_restriction(last.r, last.V, M, i)
            total += _stacked_dense_log(cr, cV, idx, lr, lV, hbar)
        return np.exp(total)

    cr = np.stack([s.r for s in choices])
    cV = np.stack([s.V for s in choices])
    return np.exp(_stacked_dense_log(cr, cV, idx, last.r, last.V, hbar))
