"""Generalized Lanczos iteration over moment metrics.

The Krylov vectors are never materialized: every iteration works on the
coefficient matrices C (expansion of A^ell applied to the trial vector
in powers of the state), D-tilde and D (Gram-Schmidt against the metric
G), and the compression T of A onto the orthonormal Krylov basis.

Two modes are supported:

* ``pure_mixed``  -- A = |psi><psi| - rho with trial |psi>; the largest
  Ritz value converges to the single positive eigenvalue of A, which is
  the trace distance.
* ``difference``  -- A = rho1 - rho2 with a Gaussian trial ket; half
  the sum of Ritz-value magnitudes is a certified lower bound on the
  trace distance (compressions contract the trace norm).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, MetricInconsistencyError
from .gauss import GaussianState, PureGaussianKet
from .moments import (
    LinearCombinationKet,
    LinearCombinationOperator,
    MetricPair,
    MomentSequence,
    ProductMixture,
    as_lincomb_ket,
    difference_operator,
    hankel_metrics,
    moments_gaussian,
    moments_lincomb,
    moments_lincomb_difference,
    moments_mixed_difference,
    moments_product_mixture,
)

# Squared metric norm at or below which the Krylov space is declared
# closed (exact convergence, not failure).
BREAKDOWN_TOL = 1e-12

# A squared norm below -NEGATIVE_NORM_TOL cannot come from roundoff and
# signals inconsistent moments.
NEGATIVE_NORM_TOL = 1e-8

# Conditioning guard.  A row of squared metric norm eta (relative to the
# metric scale) raises the restricted Hankel condition number to ~1/eta,
# and the orthogonalized direction carries a relative error of order
# (1/eta) * eps.  Rows below TRUST_TOL would contaminate the compression
# beyond the certified 1e-6 soundness of the lower bounds, so the
# iteration truncates there; the orthonormality-drift check is a second
# line of defense.
TRUST_TOL = 1e-9
DRIFT_TOL = 1e-4

DEFAULT_STEPS_PURE_MIXED = 10
DEFAULT_STEPS_DIFFERENCE = 5


@dataclass(frozen=True, eq=False)
class LanczosWorkspace:
    """Recurrence matrices and diagnostics of one Lanczos run."""

    mode: str
    C: np.ndarray
    Dtilde: np.ndarray
    D: np.ndarray
    T: np.ndarray
    ritz: np.ndarray
    norms: np.ndarray
    breakdown_step: Optional[int]
    truncated_step: Optional[int]
    drift: float

    @property
    def steps_used(self) -> int:
        return self.D.shape[0] - 1


@dataclass(frozen=True, eq=False)
class DistanceEstimate:
    """A trace-distance value with its convergence history.

    ``kind`` is ``exact_pure_mixed`` (estimate converges to the exact
    distance, exactly at breakdown) or ``lower_bound`` (certified lower
    bound for mixed pairs).  ``povm_coefficients`` expands the optimal
    discrimination vector in the Krylov basis {rho^k |psi>}.
    """

    value: float
    kind: str
    steps_used: int
    ritz_history: np.ndarray
    breakdown_step: Optional[int]
    workspace: LanczosWorkspace
    povm_coefficients: Optional[np.ndarray] = None


def build_c(moments: MomentSequence, ell: int, mode: str) -> np.ndarray:
    """Expansion coefficients of A^l on the Krylov powers, row by row.

    In difference mode A^l applied to the trial already *is* the l-th
    power chain, so C is the identity.
    """
    n = ell + 1
    if mode == "difference":
        return np.eye(n)
    if mode != "pure_mixed":
        raise DomainError(f"unknown mode {mode!r}")
    mu = moments.values
    if mu.shape[0] < n:
        raise DomainError(f"need moments up to order {ell}, have {mu.shape[0] - 1}")
    C = np.zeros((n, n))
    C[0, 0] = 1.0
    for l in range(1, n):
        C[l, 0] = C[l - 1, :l] @ mu[:l]
        C[l, 1 : l + 1] = -C[l - 1, :l]
    return C


def orthogonalize(
    C: np.ndarray,
    G: np.ndarray,
    breakdown_tol: float = BREAKDOWN_TOL,
    trust_tol: float = TRUST_TOL,
    drift_tol: float = DRIFT_TOL,
):
    """Metric Gram-Schmidt of the rows of C.

    Returns (Dtilde, D, norms, breakdown_step, truncated_step, drift)
    where D holds the G-orthonormal rows actually kept.  Breakdown
    (vanishing metric norm) closes the Krylov space exactly; a norm
    above breakdown but below the trust floor, or orthonormality drift
    beyond `drift_tol`, truncates to the last well-conditioned row.
    """
    n = C.shape[0]
    scale = max(float(np.abs(G).max()), np.finfo(float).tiny)
    Dt = np.zeros((n, n))
    D = np.zeros((n, n))
    norms = []
    breakdown_step = None
    truncated_step = None
    drift = 0.0
    rows = 0
    for l in range(n):
        if l == 0:
            Dt[0] = C[0]
        else:
            proj = ((C[l] @ G) @ D.T) @ D
            Dt[l] = C[l] - proj
            Dt[l, l] = C[l, l]
            Dt[l, l + 1 :] = 0.0
        nrm2 = float(Dt[l] @ G @ Dt[l])
        if nrm2 < -NEGATIVE_NORM_TOL * scale:
            raise MetricInconsistencyError(
                f"negative squared metric norm {nrm2:.3e} at step {l}; "
                "the moment sequence is inconsistent"
            )
        if nrm2 <= breakdown_tol * scale:
            breakdown_step = l
            break
        if l > 0 and nrm2 <= trust_tol * scale:
            truncated_step = l
            break
        D[l] = Dt[l] / np.sqrt(nrm2)
        block = D[: l + 1]
        defect = float(np.abs(block @ G @ block.T - np.eye(l + 1)).max())
        if l > 0 and defect > drift_tol:
            truncated_step = l
            D[l] = 0.0
            break
        drift = max(drift, defect)
        norms.append(np.sqrt(nrm2))
        rows = l + 1
    return Dt, D[:rows], np.array(norms), breakdown_step, truncated_step, drift


def assemble_t(D: np.ndarray, metrics: MetricPair, mode: str) -> np.ndarray:
    """Compression of A onto the orthonormal Krylov rows of D."""
    if mode == "pure_mixed":
        g = D @ metrics.G[:, 0]
        T = np.outer(g, g) - D @ metrics.Gp @ D.T
    elif mode == "difference":
        T = D @ metrics.Gp @ D.T
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return (T + T.T) / 2.0


def _estimate_history(T: np.ndarray, mode: str) -> np.ndarray:
    history = np.empty(T.shape[0])
    for k in range(T.shape[0]):
        w = np.linalg.eigvalsh(T[: k + 1, : k + 1])
        history[k] = w[-1] if mode == "pure_mixed" else 0.5 * np.abs(w).sum()
    return history


def run_lanczos(moments: MomentSequence, steps: int, mode: str) -> LanczosWorkspace:
    """Full chain: Hankel metrics -> C -> G-orthonormal D -> T -> Ritz."""
    if steps < 1:
        raise DomainError(f"need at least one step, got {steps}")
    metrics = hankel_metrics(moments, steps)
    C = build_c(moments, steps, mode)
    Dt, D, norms, breakdown_step, truncated_step, drift = orthogonalize(C, metrics.G)
    T = assemble_t(D, metrics, mode)
    ritz = np.sort(np.linalg.eigvalsh(T))
    return LanczosWorkspace(
        mode=mode,
        C=C,
        Dtilde=Dt,
        D=D,
        T=T,
        ritz=ritz,
        norms=norms,
        breakdown_step=breakdown_step,
        truncated_step=truncated_step,
        drift=drift,
    )


def _finalize(ws: LanczosWorkspace, mode: str, want_povm: bool) -> DistanceEstimate:
    history = _estimate_history(ws.T, mode)
    value = max(float(history[-1]), 0.0)
    povm = None
    if want_povm and mode == "pure_mixed":
        w, vecs = np.linalg.eigh(ws.T)
        povm = ws.D.T @ vecs[:, -1]
    return DistanceEstimate(
        value=value,
        kind="exact_pure_mixed" if mode == "pure_mixed" else "lower_bound",
        steps_used=ws.steps_used,
        ritz_history=history,
        breakdown_step=ws.breakdown_step,
        workspace=ws,
        povm_coefficients=povm,
    )


def trace_distance_pure_mixed(
    psi: PureGaussianKet | LinearCombinationKet,
    rho: GaussianState | LinearCombinationOperator | ProductMixture,
    steps: int = DEFAULT_STEPS_PURE_MIXED,
    *,
    want_povm: bool = False,
    max_exp_order: int | None = None,
) -> DistanceEstimate:
    """Trace distance between the pure state psi and the state rho.

    The estimate is the largest Ritz value of the Krylov compression of
    |psi><psi| - rho; it increases monotonically with the step count
    and is exact once the iteration breaks down.
    """
    if steps < 1:
        raise DomainError(f"need at least one step, got {steps}")
    max_order = 2 * steps + 1
    if isinstance(rho, GaussianState):
        if isinstance(psi, PureGaussianKet):
            moments = moments_gaussian(psi, rho, max_order)
        else:
            mixture = ProductMixture(coeffs=np.array([1.0 + 0j]), factors=((rho,),))
            moments = moments_product_mixture(psi, mixture, max_order, max_exp_order)
    elif isinstance(rho, LinearCombinationOperator):
        moments = moments_lincomb(as_lincomb_ket(psi), rho, max_order)
    elif isinstance(rho, ProductMixture):
        moments = moments_product_mixture(as_lincomb_ket(psi), rho, max_order, max_exp_order)
    else:
        raise DomainError(f"unsupported state representation {type(rho).__name__}")
    ws = run_lanczos(moments, steps, "pure_mixed")
    return _finalize(ws, "pure_mixed", want_povm)


def trace_distance_lower_bound(
    rho1,
    rho2,
    trial: PureGaussianKet | LinearCombinationKet,
    steps: int = DEFAULT_STEPS_DIFFERENCE,
    *,
    max_exp_order: int | None = None,
) -> DistanceEstimate:
    """Certified lower bound on the trace distance of two mixed states.

    Both states must share a representation: a pair of Gaussian states
    (signed 2^ell metric sums) or a pair of linear-combination
    operators (polynomial recursion on their difference).  The bound is
    half the trace norm of the Krylov compression of rho1 - rho2 and is
    non-decreasing in the step count.
    """
    if steps < 1:
        raise DomainError(f"need at least one step, got {steps}")
    max_order = 2 * steps + 1
    if isinstance(rho1, GaussianState) and isinstance(rho2, GaussianState):
        if not isinstance(trial, PureGaussianKet):
            raise DomainError("Gaussian pairs need a pure Gaussian trial ket")
        moments = moments_mixed_difference(trial, rho1, rho2, max_order, max_exp_order)
    elif isinstance(rho1, LinearCombinationOperator) and isinstance(rho2, LinearCombinationOperator):
        delta = difference_operator(rho1, rho2)
        moments = moments_lincomb_difference(as_lincomb_ket(trial), delta, max_order)
    else:
        raise DomainError(
            "lower bounds need two Gaussian states or two linear-combination operators"
        )
    ws = run_lanczos(moments, steps, "difference")
    return _finalize(ws, "difference", want_povm=False)
