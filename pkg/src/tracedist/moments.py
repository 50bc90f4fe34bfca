"""Moment sequences and the Hankel metrics driving the Lanczos
recurrences, for all supported state representations:

* a pure Gaussian ket against a mixed Gaussian state,
* linear combinations of pure Gaussian kets (kets and operators),
* the difference of two mixed Gaussian states probed by a trial ket
  (exponential-cost sum, guarded),
* mixtures of products of Gaussian states (exponential-cost, guarded).

Moments are stored as reals; every computed value is an expectation of
a Hermitian operator power, so a large imaginary residual signals a
numerical problem and raises instead of being silently discarded.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .bargmann import (
    IMAG_TOL,
    multivariate_trace,
    pure_moment_invariant,
    pure_overlap,
    stacked_chain_invariants,
)
from .errors import CostGuardError, DegeneracyError, DomainError, ShapeError
from .gauss import GaussianState, PureGaussianKet

# Hard default ceiling for the moment order of exponential-cost sums
# (2^ell or q^ell terms); override explicitly or via the environment.
EXP_ORDER_CEILING = 14
EXP_ORDER_ENV = "TRACEDIST_MAX_EXP_STEPS"

NORMALIZATION_TOL = 1e-8
HERMITICITY_TOL = 1e-10
OVERLAP_FLOOR = 1e-12


def _fsum_complex(values) -> complex:
    values = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(values.real), math.fsum(values.imag))


def _exp_ceiling(explicit: int | None) -> int:
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(EXP_ORDER_ENV)
    return int(env) if env else EXP_ORDER_CEILING


def _check_shared_family(kets: Sequence[PureGaussianKet]):
    M = kets[0].num_modes
    hbar = kets[0].hbar
    for k in kets[1:]:
        if k.num_modes != M or k.hbar != hbar:
            raise ShapeError("all kets must share the mode count and hbar")
    return M, hbar


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Scalars mu_0 ... mu_L (or nu_0 ... nu_L for difference metrics)."""

    values: np.ndarray
    regime: str

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def max_order(self) -> int:
        return self.values.shape[0] - 1


@dataclass(frozen=True, eq=False)
class MetricPair:
    """Hankel metrics G[j,k] = mu_{j+k} and Gp[j,k] = mu_{j+k+1}."""

    G: np.ndarray
    Gp: np.ndarray


@dataclass(frozen=True, eq=False)
class LinearCombinationKet:
    """|psi> = sum_j a_j |g_j> with pure Gaussian kets in the
    <0|g> >= 0 phase gauge; coefficients must normalize the ket."""

    coeffs: np.ndarray
    kets: tuple[PureGaussianKet, ...]

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        kets = tuple(self.kets)
        if coeffs.ndim != 1 or coeffs.shape[0] != len(kets) or not kets:
            raise ShapeError("coefficient vector must match the number of kets")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "kets", kets)
        _check_shared_family(kets)
        norm = np.conj(coeffs) @ self.ket_gram @ coeffs
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"ket is not normalized: <psi|psi> = {norm:.12g}")

    @cached_property
    def ket_gram(self) -> np.ndarray:
        p = len(self.kets)
        gram = np.eye(p, dtype=complex)
        for j in range(p):
            for k in range(j + 1, p):
                gram[j, k] = pure_overlap(self.kets[j], self.kets[k])
                gram[k, j] = np.conj(gram[j, k])
        return gram

    @property
    def num_modes(self) -> int:
        return self.kets[0].num_modes

    @property
    def hbar(self) -> float:
        return self.kets[0].hbar


@dataclass(frozen=True, eq=False)
class LinearCombinationOperator:
    """rho = sum_{j,k} b_{j,k} |f_j><f_k| with Hermitian coefficients.

    With ``difference=True`` the operator represents the difference of
    two states: the trace must vanish instead of being one.
    """

    coeffs: np.ndarray
    kets: tuple[PureGaussianKet, ...]
    difference: bool = False

    def __post_init__(self):
        b = np.array(self.coeffs, dtype=complex)
        kets = tuple(self.kets)
        q = len(kets)
        if b.shape != (q, q) or q == 0:
            raise ShapeError(f"coefficient matrix must be ({q}, {q}), got {b.shape}")
        if np.abs(b - b.conj().T).max() > HERMITICITY_TOL:
            raise DomainError("coefficient matrix is not Hermitian")
        b.flags.writeable = False
        object.__setattr__(self, "coeffs", b)
        object.__setattr__(self, "kets", kets)
        _check_shared_family(kets)
        trace = np.einsum("jk,kj->", b, self.ket_gram)
        target = 0.0 if self.difference else 1.0
        if abs(trace - target) > NORMALIZATION_TOL:
            raise DomainError(f"operator trace is {trace:.12g}, expected {target}")

    @cached_property
    def ket_gram(self) -> np.ndarray:
        q = len(self.kets)
        gram = np.eye(q, dtype=complex)
        for j in range(q):
            for k in range(j + 1, q):
                gram[j, k] = pure_overlap(self.kets[j], self.kets[k])
                gram[k, j] = np.conj(gram[j, k])
        return gram

    @property
    def num_modes(self) -> int:
        return self.kets[0].num_modes

    @property
    def hbar(self) -> float:
        return self.kets[0].hbar


@dataclass(frozen=True, eq=False)
class ProductMixture:
    """rho = sum_k b_k nu_k with each nu_k an ordered product of
    Gaussian states (not necessarily a state itself)."""

    coeffs: np.ndarray
    factors: tuple[tuple[GaussianState, ...], ...]

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        factors = tuple(tuple(f) for f in self.factors)
        if coeffs.ndim != 1 or coeffs.shape[0] != len(factors) or not factors:
            raise ShapeError("coefficient vector must match the number of products")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "factors", factors)


def as_lincomb_ket(psi: PureGaussianKet | LinearCombinationKet) -> LinearCombinationKet:
    if isinstance(psi, LinearCombinationKet):
        return psi
    return LinearCombinationKet(coeffs=np.array([1.0 + 0j]), kets=(psi,))


def difference_operator(
    a: LinearCombinationOperator, b: LinearCombinationOperator
) -> LinearCombinationOperator:
    """The traceless operator a - b on the concatenated ket family."""
    qa, qb = len(a.kets), len(b.kets)
    coeffs = np.zeros((qa + qb, qa + qb), dtype=complex)
    coeffs[:qa, :qa] = a.coeffs
    coeffs[qa:, qa:] = -b.coeffs
    return LinearCombinationOperator(coeffs=coeffs, kets=a.kets + b.kets, difference=True)


# ---------------------------------------------------------------------------
# Moment computations


def moments_gaussian(psi: PureGaussianKet, rho: GaussianState, max_order: int) -> MomentSequence:
    """mu_ell = <psi| rho^ell |psi> for ell = 0 ... max_order."""
    if max_order < 1:
        raise DomainError("need at least one moment beyond mu_0")
    values = np.empty(max_order + 1)
    values[0] = 1.0
    for ell in range(1, max_order + 1):
        try:
            values[ell] = pure_moment_invariant(psi, rho, ell)
        except DegeneracyError as exc:
            raise DegeneracyError(f"moment ell={ell} failed: {exc}", exc.condition) from exc
    return MomentSequence(values=values, regime="pure_mixed")


def _lincomb_moment_factors(psi: LinearCombinationKet, rho: LinearCombinationOperator):
    p, q = len(psi.kets), len(rho.kets)
    cross = np.empty((p, q), dtype=complex)
    for j in range(p):
        for m in range(q):
            cross[j, m] = pure_overlap(psi.kets[j], rho.kets[m])
    u = np.conj(psi.coeffs) @ cross
    v = cross.conj().T @ psi.coeffs
    return u, v, rho.ket_gram


def _moments_lincomb_core(
    psi: LinearCombinationKet, rho: LinearCombinationOperator, max_order: int, regime: str
) -> MomentSequence:
    if max_order < 1:
        raise DomainError("need at least one moment beyond mu_0")
    u, v, gram_ff = _lincomb_moment_factors(psi, rho)
    values = np.empty(max_order + 1)
    values[0] = 1.0
    power_coeffs = rho.coeffs  # b^{(1)} = b
    step = rho.coeffs @ gram_ff
    for ell in range(1, max_order + 1):
        val = u @ power_coeffs @ v
        if abs(val.imag) > IMAG_TOL:
            raise DegeneracyError(f"moment ell={ell} carries imaginary residual {val.imag:.3e}")
        values[ell] = val.real
        power_coeffs = step @ power_coeffs
    return MomentSequence(values=values, regime=regime)


def moments_lincomb(
    psi: PureGaussianKet | LinearCombinationKet,
    rho: LinearCombinationOperator,
    max_order: int,
) -> MomentSequence:
    """Moments of a linear-combination operator in a linear-combination
    ket, via the recursion b^{(ell)} = b Gram b^{(ell-1)}."""
    psi = as_lincomb_ket(psi)
    if rho.difference:
        raise DomainError("rho must represent a state; use moments_lincomb_difference")
    return _moments_lincomb_core(psi, rho, max_order, "lincomb")


def moments_lincomb_difference(
    c: PureGaussianKet | LinearCombinationKet,
    delta: LinearCombinationOperator,
    max_order: int,
) -> MomentSequence:
    """nu_ell = <c| delta^ell |c> for a traceless difference operator."""
    c = as_lincomb_ket(c)
    if not delta.difference:
        raise DomainError("delta must be a difference operator (trace zero)")
    return _moments_lincomb_core(c, delta, max_order, "mixed_diff")


def moments_mixed_difference(
    c: PureGaussianKet,
    rho1: GaussianState,
    rho2: GaussianState,
    max_order: int,
    max_exp_order: int | None = None,
) -> MomentSequence:
    """nu_ell = <c| (rho1 - rho2)^ell |c> by the signed sum over all
    2^ell orderings, each term a single Gaussian trace invariant.

    The cost doubles with every order; orders beyond the ceiling
    (default 14, env TRACEDIST_MAX_EXP_STEPS) require an explicit
    ``max_exp_order`` opt-in.
    """
    ceiling = _exp_ceiling(max_exp_order)
    if max_order > ceiling:
        raise CostGuardError(
            f"moment order {max_order} needs 2^{max_order} trace terms; "
            f"ceiling is {ceiling} (raise max_exp_order or {EXP_ORDER_ENV} to proceed)"
        )
    if max_order < 1:
        raise DomainError("need at least one moment beyond nu_0")
    states = [rho1, rho2]
    values = np.empty(max_order + 1)
    values[0] = 1.0
    for ell in range(1, max_order + 1):
        idx = np.array(list(itertools.product((0, 1), repeat=ell)), dtype=int)
        signs = np.where(idx.sum(axis=1) % 2 == 0, 1.0, -1.0)
        terms = signs * stacked_chain_invariants(states, idx, c)
        val = _fsum_complex(terms)
        if abs(val.imag) > IMAG_TOL:
            raise DegeneracyError(f"moment ell={ell} carries imaginary residual {val.imag:.3e}")
        values[ell] = val.real
    return MomentSequence(values=values, regime="mixed_diff")


def moments_product_mixture(
    psi: PureGaussianKet | LinearCombinationKet,
    rho: ProductMixture,
    max_order: int,
    max_exp_order: int | None = None,
) -> MomentSequence:
    """Moments of a mixture of Gaussian-state products, summing the
    q^ell chains of factor products against every ket pair of psi.

    The guard is keyed on the actual term count q^ell: a single-product
    mixture costs one chain per order and is never refused, while q = 2
    hits the same order-14 ceiling as the signed difference sums.
    """
    psi = as_lincomb_ket(psi)
    ceiling = _exp_ceiling(max_exp_order)
    q_terms = len(rho.coeffs)
    if q_terms > 1 and q_terms**max_order > 2**ceiling:
        raise CostGuardError(
            f"moment order {max_order} needs {q_terms}^{max_order} trace terms, beyond the "
            f"2^{ceiling} ceiling (raise max_exp_order or {EXP_ORDER_ENV} to proceed)"
        )
    if max_order < 1:
        raise DomainError("need at least one moment beyond mu_0")

    p = len(psi.kets)
    q = len(rho.coeffs)
    gram_gg = psi.ket_gram
    weights = np.empty((p, p), dtype=complex)
    for j in range(p):
        for k in range(p):
            denom = gram_gg[k, j]  # <g_k|g_j>
            if abs(denom) < OVERLAP_FLOOR:
                raise DegeneracyError(
                    f"vanishing overlap <g_{k}|g_{j}> blocks the product-mixture expansion"
                )
            weights[j, k] = np.conj(psi.coeffs[j]) * psi.coeffs[k] / denom

    values = np.empty(max_order + 1)
    values[0] = 1.0
    for ell in range(1, max_order + 1):
        parts = []
        for u in itertools.product(range(q), repeat=ell):
            coeff = np.prod(rho.coeffs[list(u)])
            chain = [st for ui in u for st in rho.factors[ui]]
            for j in range(p):
                for k in range(p):
                    tr = multivariate_trace(chain + [psi.kets[k], psi.kets[j]])
                    parts.append(coeff * weights[j, k] * tr)
        val = _fsum_complex(parts)
        if abs(val.imag) > IMAG_TOL:
            raise DegeneracyError(f"moment ell={ell} carries imaginary residual {val.imag:.3e}")
        values[ell] = val.real
    return MomentSequence(values=values, regime="product_mixture")


def outer_to_product(ketA: PureGaussianKet, ketB: PureGaussianKet):
    """Rewrite |A><B| as scale * |A><A| . |B><B| with scale = 1/<A|B>."""
    ov = pure_overlap(ketA, ketB)
    if abs(ov) < OVERLAP_FLOOR:
        raise DegeneracyError("kets are numerically orthogonal; outer product has no product form")
    return 1.0 / ov, [ketA.base, ketB.base]


def hankel_metrics(moments: MomentSequence, ell: int) -> MetricPair:
    """The (ell+1)-square Hankel pair built from a moment sequence."""
    needed = 2 * ell + 2
    if moments.values.shape[0] < needed:
        raise ShapeError(
            f"metric order {ell} needs {needed} moments, have {moments.values.shape[0]}"
        )
    idx = np.add.outer(np.arange(ell + 1), np.arange(ell + 1))
    return MetricPair(G=moments.values[idx], Gp=moments.values[idx + 1])
