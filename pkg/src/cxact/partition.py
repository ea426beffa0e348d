"""Partitioned real activations and their Heaviside step rewrite.

A partitioned activation is a list of strictly increasing boundaries
``x_0 < ... < x_{n-1}`` and ``n + 1`` local pieces.  Cells are right-inclusive:
``(-inf, x_0), [x_0, x_1), ..., [x_{n-1}, inf)``, so a boundary point is owned
by the piece to its right (the ``x >= 0`` branch of LReLU).

JSON description format::

    {
      "boundaries": [-1.0, 1.0],
      "pieces": [
        {"kind": "linear", "slope": 0.0, "intercept": 0.0},
        {"kind": "linear", "slope": 1.0},
        {"kind": "scaled_exp", "lambda": 1.0507, "alpha": 1.67326}
      ]
    }

``intercept`` defaults to 0.  A ``scaled_exp`` piece is ``lambda*alpha*(e^z - 1)``.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import as_complex

__all__ = [
    "PartitionError",
    "Linear",
    "ScaledShiftedExp",
    "GeneralExpr",
    "PartitionedActivation",
    "HeavisideTerm",
    "Indicator",
    "heaviside",
    "lrelu",
    "selu",
    "elu",
    "SELU_LAMBDA",
    "SELU_ALPHA",
]

SELU_LAMBDA = 1.0507
SELU_ALPHA = 1.67326


class PartitionError(ValueError):
    """Invalid partition: bad boundaries, piece count or JSON description."""


@dataclass(frozen=True)
class Linear:
    """``slope * z + intercept``."""

    slope: float
    intercept: float = 0.0

    holomorphic = True

    def __call__(self, z):
        return self.slope * as_complex(z) + self.intercept

    def derivative(self, z):
        return np.full(np.shape(z), complex(self.slope))

    def to_json(self):
        return {"kind": "linear", "slope": self.slope, "intercept": self.intercept}


@dataclass(frozen=True)
class ScaledShiftedExp:
    """``scale * (exp(z) - 1)``; SELU's negative branch has ``scale = lambda*alpha``."""

    scale: float

    holomorphic = True

    def __call__(self, z):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.scale * np.expm1(as_complex(z))

    def derivative(self, z):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.scale * np.exp(as_complex(z))

    def to_json(self):
        return {"kind": "scaled_exp", "lambda": 1.0, "alpha": self.scale}


@dataclass(frozen=True)
class GeneralExpr:
    """Arbitrary complex piece; holomorphy is the caller's declaration."""

    func: Callable
    holomorphic: bool = False
    name: str = "expr"
    deriv: Callable | None = field(default=None, compare=False)

    def __call__(self, z):
        return as_complex(self.func(as_complex(z)))

    def derivative(self, z):
        if self.deriv is None or not self.holomorphic:
            raise NotImplementedError(f"no complex derivative for piece {self.name!r}")
        return as_complex(self.deriv(as_complex(z)))

    def to_json(self):
        raise PartitionError(f"piece {self.name!r} has no JSON representation")


def heaviside(t):
    """Unit step with ``H(0) = 1``."""
    return np.where(np.asarray(t, dtype=float) >= 0, 1.0, 0.0)


@dataclass(frozen=True)
class HeavisideTerm:
    """``sign * H(x - x_p)``, or ``sign * H(-(x - x_p))`` when ``reflected``.

    On the real axis the reflected step is evaluated as ``1 - H(x - x_p)`` so
    boundary ownership stays right-inclusive.
    """

    sign: int
    boundary: int
    reflected: bool = False


@dataclass(frozen=True)
class Indicator:
    """Indicator of one cell as ``constant + sum(terms)``."""

    piece: int
    constant: int
    terms: tuple[HeavisideTerm, ...]

    def expanded(self):
        """Rewrite with plain ``H(x - x_p)`` only: ``(constant, [(sign, p), ...])``."""
        const = self.constant
        out = []
        for t in self.terms:
            if t.reflected:
                const += t.sign
                out.append((-t.sign, t.boundary))
            else:
                out.append((t.sign, t.boundary))
        return const, out

    def __call__(self, x, boundaries):
        x = np.asarray(x, dtype=float)
        val = np.full(x.shape, float(self.constant))
        for t in self.terms:
            h = heaviside(x - boundaries[t.boundary])
            val = val + t.sign * ((1.0 - h) if t.reflected else h)
        return val


class PartitionedActivation:
    """Piecewise real activation with complex-evaluable pieces.

    Immutable after construction.
    """

    __slots__ = ("_boundaries", "_pieces", "name")

    def __init__(self, boundaries: Sequence[float], pieces: Sequence, name: str = "partitioned"):
        boundaries = tuple(float(b) for b in boundaries)
        pieces = tuple(pieces)
        if any(not math.isfinite(b) for b in boundaries):
            raise PartitionError("boundaries must be finite")
        if any(b1 <= b0 for b0, b1 in zip(boundaries, boundaries[1:])):
            raise PartitionError(f"boundaries must be strictly increasing: {list(boundaries)}")
        if len(pieces) != len(boundaries) + 1:
            raise PartitionError(
                f"need {len(boundaries) + 1} pieces for {len(boundaries)} boundaries, got {len(pieces)}"
            )
        if not all(callable(p) for p in pieces):
            raise PartitionError("pieces must be callable")
        object.__setattr__(self, "_boundaries", boundaries)
        object.__setattr__(self, "_pieces", pieces)
        object.__setattr__(self, "name", name)

    def __setattr__(self, key, value):
        raise AttributeError("PartitionedActivation is immutable")

    @property
    def boundaries(self) -> tuple[float, ...]:
        return self._boundaries

    @property
    def pieces(self) -> tuple:
        return self._pieces

    @property
    def all_holomorphic(self) -> bool:
        return all(getattr(p, "holomorphic", False) for p in self._pieces)

    def __repr__(self):
        return f"PartitionedActivation(name={self.name!r}, boundaries={list(self._boundaries)}, pieces={list(self._pieces)})"

    def __eq__(self, other):
        if not isinstance(other, PartitionedActivation):
            return NotImplemented
        return self._boundaries == other._boundaries and self._pieces == other._pieces

    def __hash__(self):
        return hash((self._boundaries, self._pieces))

    def cell(self, x: float) -> int:
        """Index of the right-inclusive cell containing ``x``."""
        return bisect.bisect_right(self._boundaries, x)

    def eval_real(self, x):
        """Evaluate the real activation at real ``x`` (scalar or array)."""
        xa = np.asarray(x, dtype=float)
        idx = np.searchsorted(np.asarray(self._boundaries), xa, side="right")
        out = np.empty(xa.shape, dtype=float)
        for q, piece in enumerate(self._pieces):
            mask = idx == q
            if mask.any():
                out[mask] = np.real(piece(xa[mask]))
        return out[()] if xa.ndim == 0 else out

    __call__ = eval_real

    def heaviside_coefficients(self) -> list[Indicator]:
        """Cell indicators as signed step combinations, one per piece.

        Piece 0 is ``H(-(x - x_0))``, a middle piece ``q`` is
        ``H(x - x_{q-1}) - H(x - x_q)`` and the last piece is ``H(x - x_{n-1})``.
        The reflected step of piece 0 expands to ``1 - H(x - x_0)``.
        """
        n = len(self._boundaries)
        if n == 0:
            return [Indicator(0, 1, ())]
        out = [Indicator(0, 0, (HeavisideTerm(1, 0, reflected=True),))]
        for q in range(1, n):
            out.append(Indicator(q, 0, (HeavisideTerm(1, q - 1), HeavisideTerm(-1, q))))
        out.append(Indicator(n, 0, (HeavisideTerm(1, n - 1),)))
        return out

    def reconstruct(self, x):
        """``sum_q indicator_q(x) * f_q(x)``; equals :meth:`eval_real` off boundaries."""
        xa = np.asarray(x, dtype=float)
        total = np.zeros(xa.shape)
        for ind in self.heaviside_coefficients():
            total = total + ind(xa, self._boundaries) * np.real(self._pieces[ind.piece](xa))
        return total

    # -- serialisation -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "boundaries": list(self._boundaries),
            "pieces": [p.to_json() for p in self._pieces],
        }

    @classmethod
    def from_json(cls, data) -> "PartitionedActivation":
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise PartitionError(f"malformed partition JSON: {exc}") from None
        if not isinstance(data, dict):
            raise PartitionError("partition description must be a JSON object")
        try:
            boundaries = [float(b) for b in data.get("boundaries", [])]
            pieces = [_piece_from_json(p) for p in data["pieces"]]
        except KeyError as exc:
            raise PartitionError(f"missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, PartitionError):
                raise
            raise PartitionError(f"invalid partition description: {exc}") from None
        return cls(boundaries, pieces, name=str(data.get("name", "custom")))

    @classmethod
    def load(cls, path) -> "PartitionedActivation":
        with open(path) as fh:
            return cls.from_json(fh.read())


def _piece_from_json(spec) -> Linear | ScaledShiftedExp:
    if not isinstance(spec, dict):
        raise PartitionError(f"piece must be an object, got {spec!r}")
    kind = spec.get("kind")
    if kind == "linear":
        return Linear(float(spec["slope"]), float(spec.get("intercept", 0.0)))
    if kind == "scaled_exp":
        return ScaledShiftedExp(float(spec["lambda"]) * float(spec["alpha"]))
    raise PartitionError(f"unknown piece kind {kind!r}")


def lrelu(alpha: float = 0.2) -> PartitionedActivation:
    return PartitionedActivation([0.0], [Linear(alpha), Linear(1.0)], name="lrelu")


def selu(lam: float = SELU_LAMBDA, alpha: float = SELU_ALPHA) -> PartitionedActivation:
    return PartitionedActivation([0.0], [ScaledShiftedExp(lam * alpha), Linear(lam)], name="selu")


def elu(alpha: float = 1.0) -> PartitionedActivation:
    return selu(1.0, alpha)
