"""Gaussian states as (first moments, covariance) pairs, plus the
symplectic machinery the rest of the package is built on: validity
checks, Williamson decomposition, pure-state symplectic factors, the
loss channel and the canonical single-mode constructors.

Quadratures are ordered ``(q_1, ..., q_M, p_1, ..., p_M)``.  The vacuum
variance is ``hbar/2`` with ``hbar`` configurable per state (default 2,
so the vacuum covariance is the identity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .errors import DomainError, ShapeError

HBAR_DEFAULT = 2.0

# Absolute floor for the uncertainty-relation eigenvalue check.  States
# failing by less than this are accepted with a warning flag, since
# round-tripped covariance matrices routinely sit at the boundary.
UNCERTAINTY_TOL = 1e-10

# Relative tolerance on det((2/hbar) V) = 1 for certified pure states.
PURITY_RTOL = 1e-8

SYMMETRY_RTOL = 1e-12


def symplectic_form(num_modes: int) -> np.ndarray:
    """Return the 2M x 2M symplectic form with +I in the upper-right block."""
    eye = np.eye(num_modes)
    zero = np.zeros((num_modes, num_modes))
    return np.block([[zero, eye], [-eye, zero]])


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class GaussianState:
    """A bosonic Gaussian state, parametrized by its vector of first
    moments ``r`` (length 2M) and covariance matrix ``V`` (2M x 2M).

    Construction only enforces shape consistency; physical validity is
    reported by :func:`validate` so that invalid inputs can still be
    inspected and diagnosed.
    """

    r: np.ndarray
    V: np.ndarray
    hbar: float = HBAR_DEFAULT

    def __post_init__(self):
        r = _frozen(np.atleast_1d(self.r))
        V = _frozen(np.atleast_2d(self.V))
        if r.ndim != 1 or V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise ShapeError(f"expected r (2M,) and V (2M, 2M), got {r.shape} and {V.shape}")
        if V.shape[0] != r.shape[0] or r.shape[0] % 2 != 0 or r.shape[0] == 0:
            raise ShapeError(f"r has length {r.shape[0]}, V has shape {V.shape}")
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def num_modes(self) -> int:
        return self.r.shape[0] // 2


@dataclass(frozen=True, eq=False)
class PureGaussianKet:
    """A Gaussian state whose purity, det((2/hbar) V) = 1, has been
    certified at construction time."""

    base: GaussianState

    def __post_init__(self):
        defect = purity_defect(self.base)
        if abs(defect) > PURITY_RTOL:
            raise DomainError(
                f"state is not pure: det((2/hbar) V) - 1 = {defect:.3e} "
                f"exceeds the {PURITY_RTOL:g} tolerance"
            )

    @property
    def r(self) -> np.ndarray:
        return self.base.r

    @property
    def V(self) -> np.ndarray:
        return self.base.V

    @property
    def hbar(self) -> float:
        return self.base.hbar

    @property
    def num_modes(self) -> int:
        return self.base.num_modes


@dataclass(frozen=True)
class ValidityReport:
    """Measured residuals for each Gaussian-state invariant."""

    symmetric: bool
    uncertainty_ok: bool
    positive_definite: bool
    purity_defect: float
    symmetry_residual: float
    min_uncertainty_eig: float
    min_cov_eig: float
    boundary_warning: bool = False

    @property
    def ok(self) -> bool:
        return self.symmetric and self.uncertainty_ok and self.positive_definite


@dataclass(frozen=True, eq=False)
class WilliamsonFactorization:
    """V = (hbar/2) S diag(2 nbar + 1, 2 nbar + 1) S^T with S symplectic
    and nbar the thermal occupations, sorted non-increasing."""

    S: np.ndarray
    nbar: np.ndarray
    hbar: float = HBAR_DEFAULT

    def covariance(self) -> np.ndarray:
        d = np.concatenate([self.nbar, self.nbar])
        return (self.hbar / 2.0) * (self.S * (2.0 * d + 1.0)) @ self.S.T


def purity_defect(state: GaussianState) -> float:
    """det((2/hbar) V) - 1; zero for pure states."""
    scaled = (2.0 / state.hbar) * state.V
    sign, logdet = np.linalg.slogdet(scaled)
    return sign * np.exp(logdet) - 1.0


def validate(state: GaussianState) -> ValidityReport:
    """Check symmetry, the uncertainty relation and positive definiteness
    of the covariance matrix, reporting the measured residuals."""
    V = state.V
    scale = max(np.abs(V).max(), 1.0)
    sym_res = float(np.abs(V - V.T).max())
    symmetric = sym_res <= SYMMETRY_RTOL * scale

    omega = symplectic_form(state.num_modes)
    herm = V + 1j * (state.hbar / 2.0) * omega
    min_unc = float(np.linalg.eigvalsh(herm).min())
    uncertainty_ok = min_unc >= -UNCERTAINTY_TOL
    boundary_warning = uncertainty_ok and min_unc < 0.0

    min_cov = float(np.linalg.eigvalsh((V + V.T) / 2.0).min())

    return ValidityReport(
        symmetric=symmetric,
        uncertainty_ok=uncertainty_ok,
        positive_definite=min_cov > 0.0,
        purity_defect=float(purity_defect(state)),
        symmetry_residual=sym_res,
        min_uncertainty_eig=min_unc,
        min_cov_eig=min_cov,
        boundary_warning=boundary_warning,
    )


def _sym_sqrt_and_inv(V: np.ndarray):
    w, Q = np.linalg.eigh((V + V.T) / 2.0)
    if w.min() <= 0.0:
        raise DomainError(f"covariance matrix is not positive definite (min eig {w.min():.3e})")
    root = np.sqrt(w)
    return (Q * root) @ Q.T, (Q / root) @ Q.T


def williamson(state: GaussianState) -> WilliamsonFactorization:
    """Williamson decomposition of the covariance matrix.

    The antisymmetric matrix V^{-1/2} Omega V^{-1/2} is brought to its
    real Schur form; its 2x2 blocks carry the inverse symplectic
    eigenvalues.  The gauge is fixed by choosing a real S and sorting
    the occupations non-increasing.
    """
    M = state.num_modes
    omega = symplectic_form(M)
    Vh, Vmh = _sym_sqrt_and_inv(state.V)

    A = Vmh @ omega @ Vmh
    T, U = schur(A, output="real")

    kappa = np.empty(M)
    U = U.copy()
    for i in range(M):
        k = float(T[2 * i, 2 * i + 1])
        if k < 0.0:
            U[:, [2 * i, 2 * i + 1]] = U[:, [2 * i + 1, 2 * i]]
            k = -k
        kappa[i] = k

    # Ascending kappa gives non-increasing symplectic eigenvalues d = 1/kappa.
    order = np.argsort(kappa, kind="stable")
    kappa = kappa[order]
    cols = [2 * int(i) for i in order] + [2 * int(i) + 1 for i in order]
    O = U[:, cols]

    root_k = np.sqrt(np.concatenate([kappa, kappa]))
    S = Vh @ (O * root_k)

    d = 1.0 / kappa
    nbar = np.maximum(d / state.hbar - 0.5, 0.0)
    return WilliamsonFactorization(S=_frozen(S), nbar=_frozen(nbar), hbar=state.hbar)


def pure_symplectic_factor(psi: PureGaussianKet) -> np.ndarray:
    """Symplectic S with (hbar/2) S S^T = V; the Williamson factor of a
    pure state, whose occupations all vanish."""
    fact = williamson(psi.base)
    if fact.nbar.max(initial=0.0) > 1e-6:
        raise DomainError(f"purity defect too large for a symplectic factor: nbar={fact.nbar}")
    return fact.S


def relative_to_vacuum(psi: PureGaussianKet, rho: GaussianState) -> GaussianState:
    """Frame change sending psi to the vacuum: the trace distance of the
    returned state to the vacuum equals that of (rho, psi)."""
    if rho.num_modes != psi.num_modes:
        raise ShapeError(f"mode mismatch: psi has {psi.num_modes}, rho has {rho.num_modes}")
    if rho.hbar != psi.hbar:
        raise DomainError(f"hbar mismatch: {psi.hbar} vs {rho.hbar}")
    S = pure_symplectic_factor(psi)
    omega = symplectic_form(psi.num_modes)
    S_inv = -omega @ S.T @ omega
    V = S_inv @ rho.V @ S_inv.T
    r = S_inv @ (rho.r - psi.r)
    return GaussianState(r=r, V=(V + V.T) / 2.0, hbar=rho.hbar)


def loss_channel(state: GaussianState, eta: float) -> GaussianState:
    """Uniform loss with loss parameter eta (transmission 1 - eta):
    V -> (1-eta) V + eta (hbar/2) I and r -> sqrt(1-eta) r."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"loss parameter must lie in [0, 1], got {eta}")
    dim = state.r.shape[0]
    V = (1.0 - eta) * state.V + eta * (state.hbar / 2.0) * np.eye(dim)
    r = np.sqrt(1.0 - eta) * state.r
    return GaussianState(r=r, V=V, hbar=state.hbar)


# ---------------------------------------------------------------------------
# Canonical constructors


def vacuum(num_modes: int = 1, hbar: float = HBAR_DEFAULT) -> PureGaussianKet:
    dim = 2 * num_modes
    return PureGaussianKet(GaussianState(np.zeros(dim), (hbar / 2.0) * np.eye(dim), hbar))


def coherent(alpha: complex, hbar: float = HBAR_DEFAULT) -> PureGaussianKet:
    alpha = complex(alpha)
    r = np.sqrt(2.0 * hbar) * np.array([alpha.real, alpha.imag])
    return PureGaussianKet(GaussianState(r, (hbar / 2.0) * np.eye(2), hbar))


def squeezed_vacuum(s: float, hbar: float = HBAR_DEFAULT) -> PureGaussianKet:
    V = (hbar / 2.0) * np.diag([np.exp(-2.0 * s), np.exp(2.0 * s)])
    return PureGaussianKet(GaussianState(np.zeros(2), V, hbar))


def thermal(nbar: float, hbar: float = HBAR_DEFAULT) -> GaussianState:
    if nbar < 0:
        raise DomainError(f"thermal occupation must be non-negative, got {nbar}")
    return GaussianState(np.zeros(2), (hbar / 2.0) * (2.0 * nbar + 1.0) * np.eye(2), hbar)


def squashed(nbar: float, hbar: float = HBAR_DEFAULT) -> GaussianState:
    """Vacuum variance in q, excess noise 1 + 4 nbar in p; mean photon
    number nbar."""
    if nbar < 0:
        raise DomainError(f"squashed occupation must be non-negative, got {nbar}")
    V = (hbar / 2.0) * np.diag([1.0, 1.0 + 4.0 * nbar])
    return GaussianState(np.zeros(2), V, hbar)


def product_state(states: list[GaussianState]) -> GaussianState:
    """Tensor product of single-mode (or multimode) Gaussian states, in
    the block (q..., p...) quadrature ordering."""
    if not states:
        raise ShapeError("product of zero states")
    hbar = states[0].hbar
    if any(s.hbar != hbar for s in states):
        raise DomainError("all factors must share hbar")
    M = sum(s.num_modes for s in states)
    r = np.zeros(2 * M)
    V = np.zeros((2 * M, 2 * M))
    off = 0
    for s in states:
        m = s.num_modes
        q = slice(off, off + m)
        p = slice(M + off, M + off + m)
        r[q] = s.r[:m]
        r[p] = s.r[m:]
        V[q, q] = s.V[:m, :m]
        V[q, p] = s.V[:m, m:]
        V[p, q] = s.V[m:, :m]
        V[p, p] = s.V[m:, m:]
        off += m
    return GaussianState(r=r, V=V, hbar=hbar)


def make_state(kind: str, hbar: float = HBAR_DEFAULT, **params):
    """Constructor dispatch used by the CLI: vacuum, coherent(alpha),
    squeezed(s), thermal(nbar), squashed(nbar)."""
    if kind == "vacuum":
        return vacuum(num_modes=int(params.get("modes", 1)), hbar=hbar)
    if kind == "coherent":
        return coherent(params["alpha"], hbar=hbar)
    if kind == "squeezed":
        return squeezed_vacuum(params["s"], hbar=hbar)
    if kind == "thermal":
        return thermal(params["nbar"], hbar=hbar)
    if kind == "squashed":
        return squashed(params["nbar"], hbar=hbar)
    raise DomainError(f"unknown state kind {kind!r}")


# ---------------------------------------------------------------------------
# Random instances for property tests


def random_symplectic(num_modes: int, rng: np.random.Generator, strength: float = 0.35) -> np.ndarray:
    """exp(Omega H) for a random symmetric quadratic generator H."""
    from scipy.linalg import expm

    dim = 2 * num_modes
    H = rng.normal(scale=strength, size=(dim, dim))
    H = (H + H.T) / 2.0
    return expm(symplectic_form(num_modes) @ H)


def random_state(
    num_modes: int,
    rng: np.random.Generator,
    hbar: float = HBAR_DEFAULT,
    max_nbar: float = 2.0,
    max_disp: float = 2.0,
    pure: bool = False,
) -> GaussianState:
    """Random valid Gaussian state with moderate squeezing, occupation
    and displacement (kept small enough for desk-scale Fock oracles)."""
    S = random_symplectic(num_modes, rng)
    nbar = np.zeros(num_modes) if pure else rng.uniform(0.0, max_nbar, size=num_modes)
    d = np.concatenate([nbar, nbar])
    V = (hbar / 2.0) * (S * (2.0 * d + 1.0)) @ S.T
    r = rng.uniform(-max_disp, max_disp, size=2 * num_modes)
    return GaussianState(r=r, V=(V + V.T) / 2.0, hbar=hbar)


def random_pure_ket(
    num_modes: int,
    rng: np.random.Generator,
    hbar: float = HBAR_DEFAULT,
    max_disp: float = 2.0,
) -> PureGaussianKet:
    return PureGaussianKet(random_state(num_modes, rng, hbar=hbar, max_disp=max_disp, pure=True))
