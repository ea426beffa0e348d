"""Named complex activations.

Generalized LReLU family (``alpha`` is the negative-side slope)::

    clrelu      (1+a)/2 z + (1-a)/2 e^{i phi} z
    clrelu_cos  ((1+a) + (1-a) cos phi) z / 2
    clrelu_abs  (a |1 - e^{i phi}| + |1 + e^{i phi}|) z / 2
    hlrelu      ((1+a) + (1-a) erf(z / (sqrt(2) sigma))) z / 2

Generalized SELU family (``lam * alpha (e^z - 1)`` on the negative side)::

    cselu       lam/2 ((1 - e^{i phi}) alpha (e^z - 1) + (1 + e^{i phi}) z)
    cselu_cos   same with cos phi
    cselu_abs   same with |1 -+ e^{i phi}|
    hselu       lam (S(-z) alpha (e^z - 1) + S(z) z)

where ``phi = (2n+1) arg z`` and ``S`` is the erf sigmoid.  Baselines:
``modrelu``, ``screlu``, ``zrelu`` and ``cardioid``.

The SELU variants overflow (inf/nan) once ``Re z`` exceeds ~709, because the
exponential term is only suppressed on the positive real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .calculus import WirtingerPair
from .core import arg_principal, as_complex, complex_erf, erf_sigmoid, erf_sigmoid_derivative, unit_phase
from .generalize import (
    DEFAULT_SIGMA,
    Absolute,
    Claims,
    ComplexActivation,
    Cosine,
    ErfSigmoid,
    Exponential,
    generalize,
)
from .partition import SELU_ALPHA, SELU_LAMBDA, PartitionedActivation, lrelu, selu

__all__ = [
    "clrelu",
    "clrelu_cos",
    "clrelu_abs",
    "hlrelu",
    "cselu",
    "cselu_cos",
    "cselu_abs",
    "hselu",
    "modrelu",
    "screlu",
    "zrelu",
    "cardioid",
    "identity",
    "BUILTINS",
    "GENERALIZED",
    "PROPERTY_TABLE",
    "make_activation",
    "DEFAULT_ALPHA_LRELU",
]

DEFAULT_ALPHA_LRELU = 0.2


def _out(res, z):
    return res[()] if np.ndim(z) == 0 else res


def _phase(z, n):
    return unit_phase(arg_principal(z), n)


def clrelu(z, alpha=DEFAULT_ALPHA_LRELU, n=0):
    z = as_complex(z)
    return _out(0.5 * ((1 + alpha) + (1 - alpha) * _phase(z, n)) * z, z)


def clrelu_cos(z, alpha=DEFAULT_ALPHA_LRELU, n=0):
    z = as_complex(z)
    return _out(0.5 * ((1 + alpha) + (1 - alpha) * _phase(z, n).real) * z, z)


def clrelu_abs(z, alpha=DEFAULT_ALPHA_LRELU, n=0):
    z = as_complex(z)
    e = _phase(z, n)
    return _out(0.5 * (alpha * np.abs(1 - e) + np.abs(1 + e)) * z, z)


def hlrelu(z, alpha=DEFAULT_ALPHA_LRELU, sigma=DEFAULT_SIGMA):
    z = as_complex(z)
    erf = complex_erf(z / (math.sqrt(2.0) * sigma))
    return _out(0.5 * ((1 + alpha) + (1 - alpha) * erf) * z, z)


def _selu_mix(z, lam, alpha, neg_coef, pos_coef):
    with np.errstate(over="ignore", invalid="ignore"):
        return 0.5 * lam * (neg_coef * alpha * np.expm1(z) + pos_coef * z)


def cselu(z, lam=SELU_LAMBDA, alpha=SELU_ALPHA, n=0):
    z = as_complex(z)
    e = _phase(z, n)
    return _out(_selu_mix(z, lam, alpha, 1 - e, 1 + e), z)


def cselu_cos(z, lam=SELU_LAMBDA, alpha=SELU_ALPHA, n=0):
    z = as_complex(z)
    c = _phase(z, n).real
    return _out(_selu_mix(z, lam, alpha, 1 - c, 1 + c), z)


def cselu_abs(z, lam=SELU_LAMBDA, alpha=SELU_ALPHA, n=0):
    z = as_complex(z)
    e = _phase(z, n)
    return _out(_selu_mix(z, lam, alpha, np.abs(1 - e), np.abs(1 + e)), z)


def hselu(z, lam=SELU_LAMBDA, alpha=SELU_ALPHA, sigma=DEFAULT_SIGMA):
    z = as_complex(z)
    s_pos = erf_sigmoid(z, sigma)
    s_neg = erf_sigmoid(-z, sigma)
    with np.errstate(over="ignore", invalid="ignore"):
        res = lam * (s_neg * alpha * np.expm1(z) + s_pos * z)
    return _out(res, z)


def modrelu(z, b):
    """``ReLU(|z| + b) e^{i arg z}``; at ``z = 0`` this is ``ReLU(b)``."""
    z = as_complex(z)
    mag = np.abs(z)
    unit = np.where(mag > 0, z / np.where(mag > 0, mag, 1.0), 1.0)
    return _out(np.maximum(mag + b, 0.0) * unit, z)


def screlu(z):
    z = as_complex(z)
    return _out(np.maximum(z.real, 0.0) + 1j * np.maximum(z.imag, 0.0), z)


def zrelu(z):
    z = as_complex(z)
    return _out(np.where((z.real > 0) & (z.imag > 0), z, 0.0 + 0.0j), z)


def cardioid(z):
    z = as_complex(z)
    return _out(0.5 * (1 + np.cos(arg_principal(z))) * z, z)


def identity(z):
    return as_complex(z)


# -- closed-form derivatives -------------------------------------------------


def _hlrelu_derivative(alpha, sigma):
    def d(z):
        erf = complex_erf(z / (math.sqrt(2.0) * sigma))
        return 0.5 * (1 + alpha) + 0.5 * (1 - alpha) * erf + (1 - alpha) * z * erf_sigmoid_derivative(z, sigma)

    return d


def _hselu_derivative(lam, alpha, sigma):
    def d(z):
        ds = erf_sigmoid_derivative(z, sigma)
        with np.errstate(over="ignore", invalid="ignore"):
            return lam * (
                -ds * alpha * np.expm1(z)
                + erf_sigmoid(-z, sigma) * alpha * np.exp(z)
                + ds * z
                + erf_sigmoid(z, sigma)
            )

    return d


def _screlu_wirtinger(z):
    hx = (z.real > 0).astype(float)
    hy = (z.imag > 0).astype(float)
    return WirtingerPair(0.5 * (hx + hy) + 0j, 0.5 * (hx - hy) + 0j)


def _zrelu_wirtinger(z):
    on = ((z.real > 0) & (z.imag > 0)).astype(complex)
    return WirtingerPair(on, np.zeros(z.shape, dtype=complex))


def _identity_wirtinger(z):
    return WirtingerPair(np.ones(z.shape, dtype=complex), np.zeros(z.shape, dtype=complex))


# -- registry ----------------------------------------------------------------

# expected (holomorphic, real-complex interaction, phase preserving) per generalized activation
PROPERTY_TABLE = {
    "clrelu": (False, True, False),
    "clrelu_cos": (False, False, True),
    "clrelu_abs": (False, False, True),
    "hlrelu": (True, True, False),
    "cselu": (False, True, False),
    "cselu_cos": (False, True, False),
    "cselu_abs": (False, True, False),
    "hselu": (True, True, False),
}
GENERALIZED = tuple(PROPERTY_TABLE)


@dataclass(frozen=True)
class Builtin:
    func: Callable
    family: str  # "lrelu", "selu", "baseline", "identity"
    strategy: str | None  # "exponential", "cosine", "absolute", "erf"
    params: tuple[str, ...]
    doc: str


BUILTINS: dict[str, Builtin] = {
    "clrelu": Builtin(clrelu, "lrelu", "exponential", ("alpha", "n"), "complex LReLU"),
    "clrelu_cos": Builtin(clrelu_cos, "lrelu", "cosine", ("alpha", "n"), "cos LReLU"),
    "clrelu_abs": Builtin(clrelu_abs, "lrelu", "absolute", ("alpha", "n"), "abs LReLU"),
    "hlrelu": Builtin(hlrelu, "lrelu", "erf", ("alpha", "sigma"), "holomorphic LReLU"),
    "cselu": Builtin(cselu, "selu", "exponential", ("lam", "alpha", "n"), "complex SELU"),
    "cselu_cos": Builtin(cselu_cos, "selu", "cosine", ("lam", "alpha", "n"), "cos SELU"),
    "cselu_abs": Builtin(cselu_abs, "selu", "absolute", ("lam", "alpha", "n"), "abs SELU"),
    "hselu": Builtin(hselu, "selu", "erf", ("lam", "alpha", "sigma"), "holomorphic SELU"),
    "modrelu": Builtin(modrelu, "baseline", None, ("b",), "modReLU"),
    "screlu": Builtin(screlu, "baseline", None, (), "separate complex ReLU"),
    "zrelu": Builtin(zrelu, "baseline", None, (), "zReLU"),
    "cardioid": Builtin(cardioid, "baseline", None, (), "complex cardioid"),
    "identity": Builtin(identity, "identity", None, (), "identity"),
}


def default_params(name: str) -> dict:
    entry = BUILTINS[name]
    defaults = {
        "alpha": SELU_ALPHA if entry.family == "selu" else DEFAULT_ALPHA_LRELU,
        "lam": SELU_LAMBDA,
        "sigma": DEFAULT_SIGMA,
        "n": 0,
    }
    return {k: defaults[k] for k in entry.params if k in defaults}


def _strategy(kind, params):
    if kind == "exponential":
        return Exponential(params["n"])
    if kind == "cosine":
        return Cosine(params["n"])
    if kind == "absolute":
        return Absolute(params["n"])
    return ErfSigmoid(params["sigma"])


def _counterpart(entry: Builtin, params: dict) -> PartitionedActivation:
    if entry.family == "lrelu":
        return lrelu(params["alpha"])
    return selu(params["lam"], params["alpha"])


def make_activation(name: str, **params) -> ComplexActivation:
    """Build a :class:`ComplexActivation` for a builtin id.

    Unknown keyword arguments that the activation does not take are ignored,
    so one flag set can drive every builtin.  ``None`` means default.
    """
    if name not in BUILTINS:
        raise KeyError(f"unknown activation {name!r}; choose from {', '.join(BUILTINS)}")
    entry = BUILTINS[name]
    merged = default_params(name)
    merged.update({k: v for k, v in params.items() if k in entry.params and v is not None})
    if "n" in merged:
        merged["n"] = int(merged["n"])
    if "lam" in merged and not merged["lam"] > 0:
        raise ValueError("lambda must be positive")
    if "sigma" in merged and not merged["sigma"] > 0:
        raise ValueError("sigma must be positive")
    if name == "modrelu" and "b" not in merged:
        raise ValueError("modrelu needs an explicit bias b")

    def func(z, _f=entry.func, _p=dict(merged)):
        return _f(z, **_p)

    if entry.family in ("lrelu", "selu"):
        pa = _counterpart(entry, merged)
        strategy = _strategy(entry.strategy, merged)
        claims = generalize(pa, strategy).claims
        derivative = None
        if name == "hlrelu":
            derivative = _hlrelu_derivative(merged["alpha"], merged["sigma"])
        elif name == "hselu":
            derivative = _hselu_derivative(merged["lam"], merged["alpha"], merged["sigma"])
        return ComplexActivation(func, claims, name=name, provenance=(pa, strategy), params=merged, derivative=derivative)

    exact = {"screlu": _screlu_wirtinger, "zrelu": _zrelu_wirtinger, "identity": _identity_wirtinger}.get(name)
    claims = Claims(
        holomorphic=name == "identity",
        phase_preserving=name in ("modrelu", "cardioid", "identity"),
        exact_on_real_axis=False,
    )
    return ComplexActivation(func, claims, name=name, params=merged, wirtinger_exact=exact)
