"""Generalize a partitioned real activation to a complex-argument activation.

Each cell indicator of the partition is a signed combination of steps
``H(x - x_p)`` (see :meth:`PartitionedActivation.heaviside_coefficients`).
Replacing every step by a complex surrogate that agrees with it on the real
axis gives coefficients ``c_q(z)`` and the activation
``f(z) = sum_q c_q(z) f_q(z)``.

Surrogates, with ``phi = (2n+1) * arg(z - x_p)``:

=============  ============================  =============================
strategy       step ``H(x - x_p)``           reflected step ``H(x_p - x)``
=============  ============================  =============================
Exponential    ``(1 + e^{i phi}) / 2``       ``(1 - e^{i phi}) / 2``
Cosine         ``(1 + cos phi) / 2``         ``(1 - cos phi) / 2``
Absolute       ``|1 + e^{i phi}| / 2``       ``|1 - e^{i phi}| / 2``
ErfSigmoid     ``S(z - x_p)``                ``S(x_p - z)``
=============  ============================  =============================

Only the Absolute pair does not sum to one off the real axis, which is why
the reflected step is kept as its own term rather than written ``1 - H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Union

import numpy as np

from .calculus import WirtingerPair, wirtinger_fd
from .core import arg_principal, as_complex, erf_sigmoid, erf_sigmoid_derivative, unit_phase
from .partition import Linear, PartitionedActivation

__all__ = [
    "Exponential",
    "Cosine",
    "Absolute",
    "ErfSigmoid",
    "Strategy",
    "surrogate_H",
    "Claims",
    "ComplexActivation",
    "generalize",
    "parse_strategy",
    "strategy_to_json",
    "strategy_from_json",
    "DEFAULT_SIGMA",
]

DEFAULT_SIGMA = 0.1
BACKPROP_H = 1e-6


@dataclass(frozen=True)
class Exponential:
    n: int = 0

    def step(self, theta):
        return 0.5 * (1.0 + unit_phase(theta, self.n))

    def reflected(self, theta):
        return 0.5 * (1.0 - unit_phase(theta, self.n))


@dataclass(frozen=True)
class Cosine:
    n: int = 0

    def step(self, theta):
        return 0.5 * (1.0 + unit_phase(theta, self.n).real)

    def reflected(self, theta):
        return 0.5 * (1.0 - unit_phase(theta, self.n).real)


@dataclass(frozen=True)
class Absolute:
    n: int = 0

    def step(self, theta):
        return 0.5 * np.abs(1.0 + unit_phase(theta, self.n))

    def reflected(self, theta):
        return 0.5 * np.abs(1.0 - unit_phase(theta, self.n))


@dataclass(frozen=True)
class ErfSigmoid:
    sigma: float = DEFAULT_SIGMA

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")


Strategy = Union[Exponential, Cosine, Absolute, ErfSigmoid]
_ANGULAR = (Exponential, Cosine, Absolute)


def surrogate_H(strategy: Strategy, theta):
    """Replacement for ``H(x - x_p)`` as a function of ``theta = arg(z - x_p)``."""
    if not isinstance(strategy, _ANGULAR):
        raise TypeError("the erf-sigmoid strategy substitutes S(z - x_p), not a function of the angle")
    return strategy.step(theta)


def parse_strategy(name: str, n: int = 0, sigma: float = DEFAULT_SIGMA) -> Strategy:
    key = name.lower()
    if key in ("exponential", "exp"):
        return Exponential(n)
    if key in ("cosine", "cos"):
        return Cosine(n)
    if key in ("absolute", "abs"):
        return Absolute(n)
    if key in ("erf", "erf_sigmoid", "erfsigmoid"):
        return ErfSigmoid(sigma)
    raise ValueError(f"unknown strategy {name!r}")


@dataclass(frozen=True)
class Claims:
    holomorphic: bool
    phase_preserving: bool
    exact_on_real_axis: bool


@dataclass(frozen=True)
class ComplexActivation:
    """A complex activation with its claimed properties.

    ``derivative`` (optional) is the complex derivative of a holomorphic
    activation; ``wirtinger_exact`` (optional) returns a closed-form
    :class:`WirtingerPair` for a non-holomorphic one.
    ``provenance`` is ``(partition, strategy)`` when the activation came from
    (or is a closed form of) :func:`generalize`.
    """

    func: Callable
    claims: Claims
    name: str = "activation"
    provenance: tuple[PartitionedActivation, Strategy] | None = None
    params: dict = field(default_factory=dict)
    derivative: Callable | None = field(default=None, compare=False)
    wirtinger_exact: Callable | None = field(default=None, compare=False)
    coefficients: Callable | None = field(default=None, compare=False, repr=False)

    def __call__(self, z):
        return self.func(z)

    def wirtinger(self, z, h: float = BACKPROP_H, mode: str = "auto") -> WirtingerPair:
        """Wirtinger derivatives at ``z``.

        ``mode="auto"`` uses a closed form when one exists and central
        differences otherwise; ``mode="fd"`` forces finite differences.
        """
        z = as_complex(z)
        if mode == "auto":
            if self.wirtinger_exact is not None:
                return self.wirtinger_exact(z)
            if self.derivative is not None:
                return WirtingerPair(as_complex(self.derivative(z)), np.zeros(z.shape, dtype=complex))
        elif mode != "fd":
            raise ValueError(f"unknown derivative mode {mode!r}")
        return wirtinger_fd(self.func, z, h=h)

    @property
    def real_counterpart(self) -> PartitionedActivation | None:
        return None if self.provenance is None else self.provenance[0]


def _phase_claim(pa: PartitionedActivation, strategy: Strategy) -> bool:
    if not isinstance(strategy, (Cosine, Absolute)):
        return False
    # needs real nonnegative coefficients times nonnegative slopes; with
    # n != 0 middle-cell coefficients can go negative
    if len(pa.boundaries) > 1 and strategy.n != 0:
        return False
    return all(isinstance(p, Linear) and p.intercept == 0 and p.slope >= 0 for p in pa.pieces)


def _step_values(pa: PartitionedActivation, strategy: Strategy, z):
    """Per-boundary (step, reflected step) surrogate values at ``z``."""
    steps, refl = [], []
    for x_p in pa.boundaries:
        zp = z - x_p
        if isinstance(strategy, ErfSigmoid):
            s = erf_sigmoid(zp, strategy.sigma)
            steps.append(s)
            refl.append(erf_sigmoid(-zp, strategy.sigma))
        else:
            theta = arg_principal(zp)
            steps.append(strategy.step(theta))
            refl.append(strategy.reflected(theta))
    return steps, refl


def _coefficients(indicators, steps, refl, shape):
    out = []
    for ind in indicators:
        c = np.full(shape, complex(ind.constant))
        for t in ind.terms:
            c = c + t.sign * (refl[t.boundary] if t.reflected else steps[t.boundary])
        out.append(c)
    return out


def generalize(pa: PartitionedActivation, strategy: Strategy, name: str | None = None) -> ComplexActivation:
    """Complex generalization of ``pa`` under ``strategy``."""
    if not isinstance(strategy, (*_ANGULAR, ErfSigmoid)):
        raise TypeError(f"not a generalization strategy: {strategy!r}")
    indicators = pa.heaviside_coefficients()
    pieces = pa.pieces

    def coefficients(z):
        z = as_complex(z)
        steps, refl = _step_values(pa, strategy, z)
        return _coefficients(indicators, steps, refl, z.shape)

    def func(z):
        z = as_complex(z)
        cs = coefficients(z)
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.zeros(z.shape, dtype=complex)
            for c, piece in zip(cs, pieces):
                out = out + c * piece(z)
        return out[()] if z.ndim == 0 else out

    holomorphic = isinstance(strategy, ErfSigmoid) and pa.all_holomorphic
    derivative = None
    if holomorphic and all(hasattr(p, "derivative") for p in pieces):
        sigma = strategy.sigma

        def derivative(z):
            z = as_complex(z)
            cs = coefficients(z)
            dsteps = [erf_sigmoid_derivative(z - x_p, sigma) for x_p in pa.boundaries]
            dcs = _coefficients(indicators, dsteps, [-d for d in dsteps], z.shape)
            # constants differentiate to zero
            dcs = [dc - ind.constant for dc, ind in zip(dcs, indicators)]
            out = np.zeros(z.shape, dtype=complex)
            with np.errstate(over="ignore", invalid="ignore"):
                for c, dc, piece in zip(cs, dcs, pieces):
                    out = out + dc * piece(z) + c * piece.derivative(z)
            return out

    claims = Claims(
        holomorphic=holomorphic,
        phase_preserving=_phase_claim(pa, strategy),
        exact_on_real_axis=isinstance(strategy, _ANGULAR),
    )
    return ComplexActivation(
        func=func,
        claims=claims,
        name=name or f"{pa.name}[{_strategy_label(strategy)}]",
        provenance=(pa, strategy),
        derivative=derivative,
        coefficients=coefficients,
    )


def _strategy_label(strategy: Strategy) -> str:
    if isinstance(strategy, ErfSigmoid):
        return f"erf,sigma={strategy.sigma:g}"
    return f"{type(strategy).__name__.lower()},n={strategy.n}"


def strategy_to_json(strategy: Strategy) -> dict[str, Any]:
    if isinstance(strategy, ErfSigmoid):
        return {"kind": "erf", "sigma": strategy.sigma}
    return {"kind": type(strategy).__name__.lower(), "n": strategy.n}


def strategy_from_json(data: dict) -> Strategy:
    return parse_strategy(data["kind"], n=int(data.get("n", 0)), sigma=float(data.get("sigma", DEFAULT_SIGMA)))

