"""Closed-form references for the iterative estimators: the pure-pure
distance, the fidelity sandwich, and a variational lower bound obtained
by maximizing a two-dimensional ansatz in the frame where the pure
state is the vacuum."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bargmann import multivariate_trace, pure_moment_invariant, vacuum_probability
from .errors import DegeneracyError
from .gauss import GaussianState, PureGaussianKet, relative_to_vacuum, williamson

# Below this distance from F_coh = 1 the trial family degenerates to
# the vacuum itself and the closed forms are evaluated in their limit.
_COH_EPS_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class VariationalReport:
    """Fidelity pieces and the resulting lower bound.

    F is the vacuum weight of the reduced state, F_th the vacuum weight
    of its thermal core, F_coh the vacuum weight of the pure trial
    state carrying the displacement and squeezing.
    """

    F: float
    F_coh: float
    F_th: float
    bound: float


def pure_pure_distance(psi1: PureGaussianKet, psi2: PureGaussianKet) -> float:
    """sqrt(1 - |<psi1|psi2>|^2), with the overlap modulus from the
    two-state trace invariant."""
    overlap_sq = multivariate_trace([psi1, psi2])
    if abs(overlap_sq.imag) > 1e-10:
        raise DegeneracyError(f"pure overlap has imaginary residual {overlap_sq.imag:.3e}")
    return float(np.sqrt(max(0.0, 1.0 - overlap_sq.real)))


def fidelity_sandwich(psi: PureGaussianKet, rho: GaussianState):
    """(1 - sqrt(F), sqrt(1 - F)) with F = <psi|rho|psi>; the true
    distance always lies between the two."""
    F = min(max(pure_moment_invariant(psi, rho, 1), 0.0), 1.0)
    return 1.0 - np.sqrt(F), np.sqrt(1.0 - F)


def variational_lower_bound(psi: PureGaussianKet, rho: GaussianState) -> VariationalReport:
    """Lower bound on d(|psi><psi|, rho) from a two-dimensional trial
    family spanned by the vacuum and a matched pure Gaussian state.

    Reduces the pair to (tau, vacuum), takes the pure trial state with
    the Williamson symplectic factor of tau and tau's first moments,
    and maximizes the Rayleigh quotient over the family in closed form.
    The evaluation uses the identity
    h = (g - eps)^2 + 4 g eps^2,  g = F_th - F,  eps = 1 - F_coh,
    which removes the catastrophic cancellation of the raw quadratic.
    """
    tau = relative_to_vacuum(psi, rho)
    F = vacuum_probability(tau)
    fact = williamson(tau)
    F_th = float(1.0 / np.prod(1.0 + fact.nbar))
    V_pure = (tau.hbar / 2.0) * fact.S @ fact.S.T
    F_coh = vacuum_probability(GaussianState(tau.r, (V_pure + V_pure.T) / 2.0, tau.hbar))

    eps = 1.0 - F_coh
    g = max(F_th - F, 0.0)
    if eps < _COH_EPS_FLOOR:
        # Trial state indistinguishable from the vacuum: for a pure tau
        # this is the coincident case (bound 0); otherwise the family
        # collapses to the vacuum Rayleigh quotient 1 - F.
        bound = float(np.sqrt(max(eps, 0.0))) if F_th > 1.0 - 1e-9 else max(0.0, 1.0 - F)
    else:
        h = (g - eps) ** 2 + 4.0 * g * eps * eps
        sq = np.sqrt(h)
        a = -g + 2.0 * eps * F_th
        if a > 0.0:
            num = 2.0 * g * (2.0 * F_th - 1.0) - eps * (4.0 * F_th**2 - 4.0 * g - 1.0)
            bound = 0.5 + num / (2.0 * (a + sq))
        else:
            bound = 0.5 - (a - sq) / (2.0 * eps)
    bound = float(min(max(bound, 0.0), 1.0))
    return VariationalReport(F=F, F_coh=F_coh, F_th=F_th, bound=bound)
