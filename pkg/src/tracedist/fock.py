"""Independent brute-force oracle in a truncated Fock basis.

Everything here is deliberately plain dense linear algebra: states are
built as explicit matrices (thermal core, then the squeeze/rotate
unitaries as matrix exponentials, then displacement) and distances come
from full Hermitian diagonalization.  The oracle exists to cross-check
the moment-based estimators, so it shares no code path with them.

The tensor-product route is limited to two modes of per-mode states;
anything larger is exactly the regime the moment machinery is for.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, ShapeError
from .gauss import GaussianState, PureGaussianKet, williamson
from .moments import LinearCombinationKet, LinearCombinationOperator

DEFAULT_CUTOFF = 100

HERMITICITY_TOL = 1e-10
CUTOFF_WARN_DEFICIT = 1e-6


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense truncated matrix of an operator, with the truncation
    diagnostic |target_trace - Tr|."""

    cutoff: int
    matrix: np.ndarray
    trace_deficit: float

    @property
    def cutoff_warning(self) -> bool:
        return self.trace_deficit > CUTOFF_WARN_DEFICIT


def ladder_matrices(cutoff: int):
    """Annihilation and creation matrices truncated at `cutoff` levels."""
    if cutoff < 2:
        raise DomainError(f"cutoff must be at least 2, got {cutoff}")
    a = np.diag(np.sqrt(np.arange(1, cutoff)), k=1)
    return a, a.T.copy()


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    a, adag = ladder_matrices(cutoff)
    return expm(alpha * adag - np.conj(alpha) * a)


def squeeze_matrix(s: float, cutoff: int) -> np.ndarray:
    a, adag = ladder_matrices(cutoff)
    return expm(0.5 * s * (a @ a - adag @ adag))


def rotation_matrix(theta: float, cutoff: int) -> np.ndarray:
    return np.diag(np.exp(-1j * theta * np.arange(cutoff)))


def thermal_populations(nbar: float, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff)
    return nbar**n / (1.0 + nbar) ** (n + 1)


def euler_angles_symplectic(S: np.ndarray):
    """Write a 2x2 symplectic S as R(t1) diag(e^-s, e^s) R(t2) with
    proper rotations R(t) = [[cos t, sin t], [-sin t, cos t]]."""
    if S.shape != (2, 2):
        raise ShapeError(f"expected a 2x2 symplectic matrix, got {S.shape}")
    U, sig, Vt = np.linalg.svd(S)
    if np.linalg.det(U) < 0:
        U = U.copy()
        Vt = Vt.copy()
        U[:, 1] *= -1.0
        Vt[1, :] *= -1.0
    t1 = float(np.arctan2(U[0, 1], U[0, 0]))
    t2 = float(np.arctan2(Vt[0, 1], Vt[0, 0]))
    s = float(-np.log(sig[0]))
    return t1, s, t2


def _gaussian_unitary(S: np.ndarray, cutoff: int) -> np.ndarray:
    t1, s, t2 = euler_angles_symplectic(S)
    return rotation_matrix(t1, cutoff) @ squeeze_matrix(s, cutoff) @ rotation_matrix(t2, cutoff)


def _alpha_of(r: np.ndarray, hbar: float) -> complex:
    return complex(r[0], r[1]) / np.sqrt(2.0 * hbar)


def gaussian_to_fock(state: GaussianState | PureGaussianKet, cutoff: int = DEFAULT_CUTOFF) -> FockOperator:
    """Single-mode Gaussian state as a dense Fock density matrix, built
    through its Williamson form: thermal core, squeeze/rotate unitary,
    then displacement."""
    if isinstance(state, PureGaussianKet):
        state = state.base
    if state.num_modes != 1:
        raise ShapeError(f"the dense route is single-mode only, got M={state.num_modes}")
    fact = williamson(state)
    rho = np.diag(thermal_populations(float(fact.nbar[0]), cutoff)).astype(complex)
    U = _gaussian_unitary(fact.S, cutoff)
    rho = U @ rho @ U.conj().T
    Dm = displacement_matrix(_alpha_of(state.r, state.hbar), cutoff)
    rho = Dm @ rho @ Dm.conj().T
    herm_res = np.abs(rho - rho.conj().T).max()
    if herm_res > HERMITICITY_TOL:
        raise DomainError(f"assembled matrix is not Hermitian (residual {herm_res:.3e})")
    rho = (rho + rho.conj().T) / 2.0
    return FockOperator(cutoff=cutoff, matrix=rho, trace_deficit=abs(1.0 - float(np.trace(rho).real)))


def coherent_fock_vector(alpha: complex, cutoff: int) -> np.ndarray:
    vec = np.empty(cutoff, dtype=complex)
    vec[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff):
        vec[n] = vec[n - 1] * alpha / np.sqrt(n)
    return vec


def pure_ket_fock_vector(psi: PureGaussianKet, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Fock amplitudes of a single-mode pure Gaussian ket in the
    <0|psi> >= 0 phase gauge."""
    if psi.num_modes != 1:
        raise ShapeError("Fock vectors are single-mode only")
    hbar = psi.hbar
    alpha = _alpha_of(psi.r, hbar)
    if np.allclose(psi.V, (hbar / 2.0) * np.eye(2), rtol=0.0, atol=1e-12):
        vec = coherent_fock_vector(alpha, cutoff)
    else:
        fact = williamson(psi.base)
        U = _gaussian_unitary(fact.S, cutoff)
        vec = displacement_matrix(alpha, cutoff) @ U[:, 0]
    if abs(vec[0]) < 1e-14:
        raise DomainError("vacuum amplitude vanished at this cutoff; cannot fix the phase gauge")
    vec = vec * (np.conj(vec[0]) / abs(vec[0]))
    return vec


def lincomb_fock_vector(psi: LinearCombinationKet, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    vectors = np.stack([pure_ket_fock_vector(k, cutoff) for k in psi.kets])
    return psi.coeffs @ vectors


def lincomb_to_fock(
    state: LinearCombinationKet | LinearCombinationOperator, cutoff: int = DEFAULT_CUTOFF
) -> FockOperator:
    """Dense matrix of a linear combination: a projector for kets, the
    coefficient-weighted sum of outer products for operators."""
    if isinstance(state, LinearCombinationKet):
        vec = lincomb_fock_vector(state, cutoff)
        mat = np.outer(vec, np.conj(vec))
        target = 1.0
    else:
        vectors = np.stack([pure_ket_fock_vector(k, cutoff) for k in state.kets])
        mat = vectors.T @ state.coeffs @ np.conj(vectors)
        target = 0.0 if state.difference else 1.0
    herm_res = np.abs(mat - mat.conj().T).max()
    if herm_res > HERMITICITY_TOL:
        raise DomainError(f"assembled matrix is not Hermitian (residual {herm_res:.3e})")
    mat = (mat + mat.conj().T) / 2.0
    return FockOperator(cutoff=cutoff, matrix=mat, trace_deficit=abs(target - float(np.trace(mat).real)))


def two_mode_product_to_fock(state: GaussianState, cutoff: int = DEFAULT_CUTOFF) -> FockOperator:
    """Tensor product of the two single-mode reductions of an exactly
    mode-separable two-mode Gaussian state."""
    if state.num_modes != 2:
        raise ShapeError("expected a two-mode state")
    V = state.V
    cross = np.abs(V[np.ix_([0, 2], [1, 3])]).max()
    if cross != 0.0:
        raise DomainError("state is correlated across modes; the product oracle does not apply")
    parts = []
    for i in range(2):
        sel = [i, 2 + i]
        parts.append(
            gaussian_to_fock(GaussianState(state.r[sel], V[np.ix_(sel, sel)], state.hbar), cutoff)
        )
    mat = np.kron(parts[0].matrix, parts[1].matrix)
    return FockOperator(cutoff=cutoff, matrix=mat, trace_deficit=abs(1.0 - float(np.trace(mat).real)))


def trace_distance_exact(A: FockOperator, B: FockOperator) -> float:
    """Half the trace norm of A - B by dense Hermitian diagonalization."""
    if A.matrix.shape != B.matrix.shape:
        raise ShapeError(f"shape mismatch: {A.matrix.shape} vs {B.matrix.shape}")
    eigs = np.linalg.eigvalsh(A.matrix - B.matrix)
    return float(0.5 * np.abs(eigs).sum())


def product_trace(ops: list[FockOperator]) -> complex:
    """Plain matrix-product trace, the oracle for the Gaussian trace
    invariants."""
    mats = [op.matrix for op in ops]
    if any(m.shape != mats[0].shape for m in mats):
        raise ShapeError("all operators must share the cutoff")
    return complex(np.trace(reduce(np.matmul, mats)))


def moment_from_fock(psi_vec: np.ndarray, rho: FockOperator, ell: int) -> float:
    """<psi| rho^ell |psi> evaluated on dense truncated matrices."""
    value = np.conj(psi_vec) @ np.linalg.matrix_power(rho.matrix, ell) @ psi_vec
    return float(value.real)


def moments_from_fock(op: FockOperator, hbar: float):
    """First moments and covariance extracted from a single-mode Fock
    matrix via ladder-operator expectations (round-trip diagnostic)."""
    c = op.cutoff
    a, adag = ladder_matrices(c)
    q = np.sqrt(hbar / 2.0) * (a + adag)
    p = -1j * np.sqrt(hbar / 2.0) * (a - adag)
    ops = [q.astype(complex), p]
    r = np.array([np.trace(o @ op.matrix).real for o in ops])
    V = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            anti = ops[i] @ ops[j] + ops[j] @ ops[i]
            V[i, j] = 0.5 * np.trace(anti @ op.matrix).real - r[i] * r[j]
    return r, V
