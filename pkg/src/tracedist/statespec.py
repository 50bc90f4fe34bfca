"""JSON state specifications for the command line, plus the cat-state
family used by the reproduction sweeps.

A spec file is a JSON object ``{"hbar": 2.0, "states": [ ... ]}`` where
each entry carries a ``kind`` and its parameters.  Parsing keeps the
raw fields so that serialize(parse(file)) is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gauss import (
    HBAR_DEFAULT,
    GaussianState,
    PureGaussianKet,
    coherent,
    loss_channel,
    make_state,
)
from .moments import LinearCombinationKet, LinearCombinationOperator

KINDS = ("vacuum", "coherent", "squeezed", "thermal", "squashed", "gaussian_raw", "cat", "lincomb", "lossy")


# ---------------------------------------------------------------------------
# Cat states: p coherent components equally spaced on a circle


def _cat_signs(p: int, parity: str) -> np.ndarray:
    if parity not in ("+", "-"):
        raise DomainError(f"cat parity must be '+' or '-', got {parity!r}")
    sign = 1.0 if parity == "+" else -1.0
    return sign ** np.arange(p)


def _cat_alphas(alpha: complex, p: int) -> np.ndarray:
    return alpha * np.exp(2j * np.pi * np.arange(p) / p)


def cat_normalization(alpha: complex, p: int, parity: str) -> float:
    """N with |cat> = N^{-1/2} sum_j (+-1)^j |alpha e^{2 pi i j / p}>."""
    if p < 1:
        raise DomainError(f"need at least one component, got p={p}")
    signs = _cat_signs(p, parity)
    alphas = _cat_alphas(alpha, p)
    # <a_j|a_k> = exp(-|alpha|^2 + conj(a_j) a_k)
    gram = np.exp(-abs(alpha) ** 2 + np.conj(alphas)[:, None] * alphas[None, :])
    norm = np.real(signs @ gram @ signs)
    if norm <= 1e-12:
        raise DomainError(f"cat normalization vanished (p={p}, parity={parity}, alpha={alpha})")
    return float(norm)


def cat_ket(alpha: complex, p: int, parity: str = "+", hbar: float = HBAR_DEFAULT) -> LinearCombinationKet:
    """Pure p-component cat state as a linear combination of coherent kets."""
    norm = cat_normalization(alpha, p, parity)
    signs = _cat_signs(p, parity)
    kets = tuple(coherent(a, hbar=hbar) for a in _cat_alphas(alpha, p))
    return LinearCombinationKet(coeffs=signs.astype(complex) / np.sqrt(norm), kets=kets)


def lossy_cat_operator(
    alpha: complex, p: int, eta: float, parity: str = "+", hbar: float = HBAR_DEFAULT
) -> LinearCombinationOperator:
    """Cat state after a loss channel with loss parameter eta: coherent
    components shrink to sqrt(1-eta) alpha and the coefficients pick up
    b_{jk} = (+-1)^{j+k} e^{-eta |alpha|^2} exp(eta |alpha|^2 e^{2 pi i (j-k)/p}) / N."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"loss parameter must lie in [0, 1], got {eta}")
    norm = cat_normalization(alpha, p, parity)
    signs = _cat_signs(p, parity)
    j = np.arange(p)
    phase = np.exp(2j * np.pi * (j[:, None] - j[None, :]) / p)
    b = (
        np.outer(signs, signs)
        * np.exp(-eta * abs(alpha) ** 2)
        * np.exp(eta * abs(alpha) ** 2 * phase)
        / norm
    )
    kets = tuple(coherent(np.sqrt(1.0 - eta) * a, hbar=hbar) for a in _cat_alphas(alpha, p))
    return LinearCombinationOperator(coeffs=b, kets=kets)


# ---------------------------------------------------------------------------
# Spec parsing


@dataclass(frozen=True, eq=False)
class StateSpec:
    """One parsed state entry; `params` keeps the raw JSON fields."""

    kind: str
    params: dict
    hbar: float = HBAR_DEFAULT

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown state kind {self.kind!r}; expected one of {KINDS}")


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise DomainError(f"complex parameters are [re, im] pairs, got {value!r}")
        return complex(value[0], value[1])
    return complex(value)


def parse_state(obj: dict, hbar: float) -> StateSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DomainError(f"state entries need a 'kind' field, got {obj!r}")
    params = {k: v for k, v in obj.items() if k != "kind"}
    return StateSpec(kind=obj["kind"], params=params, hbar=hbar)


def parse_spec(data: dict) -> list[StateSpec]:
    if not isinstance(data, dict) or "states" not in data:
        raise DomainError("spec files are objects with a 'states' list")
    hbar = float(data.get("hbar", HBAR_DEFAULT))
    return [parse_state(entry, hbar) for entry in data["states"]]


def load_spec(path) -> list[StateSpec]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(json.load(fh))


def serialize_state(spec: StateSpec) -> dict:
    return {"kind": spec.kind, **spec.params}


def serialize_spec(specs: list[StateSpec]) -> dict:
    hbar = specs[0].hbar if specs else HBAR_DEFAULT
    return {"hbar": hbar, "states": [serialize_state(s) for s in specs]}


def realize(spec: StateSpec):
    """Turn a parsed spec into a state object: a pure ket, a Gaussian
    state, or a linear-combination ket/operator."""
    kind, params, hbar = spec.kind, spec.params, spec.hbar
    if kind in ("vacuum", "coherent", "squeezed", "thermal", "squashed"):
        kwargs = dict(params)
        if "alpha" in kwargs:
            kwargs["alpha"] = _as_complex(kwargs["alpha"])
        return make_state(kind, hbar=hbar, **kwargs)
    if kind == "gaussian_raw":
        try:
            r = np.array(params["r"], dtype=float)
            V = np.array(params["V"], dtype=float)
        except KeyError as exc:
            raise DomainError(f"gaussian_raw needs field {exc}") from exc
        return GaussianState(r=r, V=V, hbar=hbar)
    if kind == "cat":
        return cat_ket(
            _as_complex(params["alpha"]), int(params["p"]), params.get("parity", "+"), hbar=hbar
        )
    if kind == "lincomb":
        kets = tuple(realize(parse_state(entry, hbar)) for entry in params["kets"])
        if not all(isinstance(k, PureGaussianKet) for k in kets):
            raise DomainError("lincomb entries must realize to pure Gaussian kets")
        coeffs = np.array([_as_complex(c) for c in params["coeffs"]])
        return LinearCombinationKet(coeffs=coeffs, kets=kets)
    if kind == "lossy":
        eta = float(params["eta"])
        inner_spec = parse_state(params["inner"], hbar)
        if inner_spec.kind == "cat":
            ip = inner_spec.params
            return lossy_cat_operator(
                _as_complex(ip["alpha"]), int(ip["p"]), eta, ip.get("parity", "+"), hbar=hbar
            )
        inner = realize(inner_spec)
        if isinstance(inner, PureGaussianKet):
            inner = inner.base
        if not isinstance(inner, GaussianState):
            raise DomainError("lossy wraps a Gaussian state or a cat")
        return loss_channel(inner, eta)
    raise DomainError(f"unknown state kind {kind!r}")
