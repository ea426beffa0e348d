"""Wirtinger derivatives by finite differences and numerical property checks.

For ``z = x + iy``::

    df/dz    = (f_x - i f_y) / 2
    df/dzbar = (f_x + i f_y) / 2

``f`` is holomorphic exactly when ``df/dzbar`` vanishes (Cauchy-Riemann).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .core import as_complex

__all__ = [
    "WirtingerPair",
    "wirtinger_fd",
    "GridSpec",
    "branch_cut_mask",
    "CRReport",
    "cr_residual",
    "PhaseReport",
    "check_phase",
    "CoincidenceReport",
    "check_coincidence",
    "interaction_probe",
    "DEFAULT_H",
]

DEFAULT_H = 1e-4


class WirtingerPair(NamedTuple):
    d_dz: np.ndarray
    d_dzbar: np.ndarray


def wirtinger_fd(f: Callable, z, h: float = DEFAULT_H, directions: int = 2) -> WirtingerPair:
    """Central-difference Wirtinger derivatives of ``f`` at ``z``.

    With the default ``directions=2`` the probes are ``z +- h`` and
    ``z +- ih``; truncation error is ``O(h^2)``.  ``directions=N`` averages
    central differences along ``N`` evenly spaced directions in ``[0, pi)``,
    which cancels the holomorphic part of the truncation error up to order
    ``h^(2N-2)`` and is what :func:`cr_residual` uses.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    if directions < 2:
        raise ValueError("need at least two directions")
    z = as_complex(z)
    d_dz = np.zeros(z.shape, dtype=complex)
    d_dzbar = np.zeros(z.shape, dtype=complex)
    for j in range(directions):
        u = np.exp(1j * math.pi * j / directions)
        if j * 2 == directions:
            u = 1j
        elif j == 0:
            u = 1.0 + 0j
        with np.errstate(over="ignore", invalid="ignore"):
            fp = as_complex(f(z + h * u))
            fm = as_complex(f(z - h * u))
            if not (np.isfinite(fp).all() and np.isfinite(fm).all()):
                raise OverflowError("non-finite function value at a finite-difference probe")
            slope = (fp - fm) / (2.0 * h)
        d_dz += np.conj(u) * slope
        d_dzbar += u * slope
    pair = WirtingerPair(d_dz / directions, d_dzbar / directions)
    if z.ndim == 0:
        return WirtingerPair(pair.d_dz[()], pair.d_dzbar[()])
    return pair


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sample grid ``[x_min, x_max] x [y_min, y_max]``."""

    x_min: float
    x_max: float
    nx: int
    y_min: float
    y_max: float
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid requires min < max on both axes")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid requires at least 2 points per axis")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``"x0:x1:nx,y0:y1:ny"``."""
        try:
            xs, ys = text.split(",")
            x0, x1, nx = xs.split(":")
            y0, y1, ny = ys.split(":")
            return cls(float(x0), float(x1), int(nx), float(y0), float(y1), int(ny))
        except ValueError as exc:
            raise ValueError(f"bad grid {text!r} (expected x0:x1:nx,y0:y1:ny): {exc}") from None

    @classmethod
    def square(cls, half_width: float = 2.0, n: int = 41) -> "GridSpec":
        return cls(-half_width, half_width, n, -half_width, half_width, n)

    def points(self) -> np.ndarray:
        """Row-major points: one row per y value, x varying fastest."""
        x = np.linspace(self.x_min, self.x_max, self.nx)
        y = np.linspace(self.y_min, self.y_max, self.ny)
        xx, yy = np.meshgrid(x, y)
        return (xx + 1j * yy).ravel()

    def __str__(self):
        return f"{self.x_min:g}:{self.x_max:g}:{self.nx},{self.y_min:g}:{self.y_max:g}:{self.ny}"


def branch_cut_mask(points, h: float = DEFAULT_H, cut_end: float = 0.0) -> np.ndarray:
    """True where a point lies in the excluded strip ``|Im z| < 2h, Re z < cut_end + 2h``.

    ``cut_end`` is the largest partition boundary; every angle ``arg(z - x_p)``
    is discontinuous somewhere left of it on the real axis.
    """
    points = as_complex(points)
    return (np.abs(points.imag) < 2 * h) & (points.real < cut_end + 2 * h)


@dataclass
class CRReport:
    activation: str
    grid: str
    h: float
    tol: float
    max_residual: float
    mean_residual: float
    max_abs_dzbar: float
    worst_point: complex
    n_points: int
    n_excluded: int
    verdict: str
    residuals: np.ndarray = field(repr=False, default=None)

    @property
    def holomorphic(self) -> bool:
        return self.verdict == "holomorphic-on-grid"

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("residuals")
        out["worst_point"] = [self.worst_point.real, self.worst_point.imag]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def cr_residual(
    f: Callable,
    grid: GridSpec | np.ndarray,
    h: float = DEFAULT_H,
    tol: float = 1e-6,
    exclude: np.ndarray | None = None,
    directions: int = 4,
    name: str = "f",
) -> CRReport:
    """Cauchy-Riemann residual of ``f`` over a grid.

    The per-point residual is ``|df/dzbar| / max(1, |df/dz|)``: the raw value
    for ordinary magnitudes, relative where ``f`` is large (erf-based
    activations reach 1e80 near the imaginary axis, where no absolute bound
    can hold in double precision).  The verdict is ``holomorphic-on-grid``
    iff the max residual is ``<= tol``.
    """
    if isinstance(grid, GridSpec):
        pts, grid_text = grid.points(), str(grid)
    else:
        pts = as_complex(grid).ravel()
        grid_text = f"{pts.size} points"
    n_total = pts.size
    if exclude is not None:
        keep = ~np.asarray(exclude, dtype=bool).ravel()
        pts = pts[keep]
    if pts.size == 0:
        raise ValueError("empty grid")
    pair = wirtinger_fd(f, pts, h=h, directions=directions)
    dzbar = np.abs(pair.d_dzbar)
    res = dzbar / np.maximum(1.0, np.abs(pair.d_dz))
    worst = int(np.argmax(res))
    mx = float(res[worst])
    return CRReport(
        activation=name,
        grid=grid_text,
        h=h,
        tol=tol,
        max_residual=mx,
        mean_residual=float(np.mean(res)),
        max_abs_dzbar=float(np.max(dzbar)),
        worst_point=complex(pts[worst]),
        n_points=int(pts.size),
        n_excluded=int(n_total - pts.size),
        verdict="holomorphic-on-grid" if mx <= tol else "not-holomorphic",
        residuals=res,
    )


@dataclass
class PhaseReport:
    preserving: bool
    worst_deviation: float
    witness: complex | None
    n_considered: int
    tol: float

    def has_witness(self, threshold: float = 0.05) -> bool:
        return self.worst_deviation > threshold

    def to_json(self) -> dict:
        w = None if self.witness is None else [self.witness.real, self.witness.imag]
        return {
            "preserving": self.preserving,
            "worst_deviation": self.worst_deviation,
            "witness": w,
            "n_considered": self.n_considered,
            "tol": self.tol,
        }


def check_phase(f: Callable, samples, tol: float = 1e-10, zero_tol: float = 1e-12) -> PhaseReport:
    """Largest ``|arg f(z) - arg z|`` (wrapped) over samples with ``|f(z)| > zero_tol``."""
    z = as_complex(samples).ravel()
    z = z[z != 0]
    with np.errstate(over="ignore", invalid="ignore"):
        fz = as_complex(f(z))
    ok = np.isfinite(fz) & (np.abs(fz) > zero_tol)
    z, fz = z[ok], fz[ok]
    if z.size == 0:
        return PhaseReport(True, 0.0, None, 0, tol)
    dev = np.abs(np.angle(fz * np.conj(z)))
    i = int(np.argmax(dev))
    worst = float(dev[i])
    return PhaseReport(worst <= tol, worst, complex(z[i]), int(z.size), tol)


@dataclass
class CoincidenceReport:
    passed: bool
    max_deviation: float
    max_scaled_deviation: float
    worst_x: float
    tol: float
    n_samples: int

    def to_json(self) -> dict:
        return asdict(self)


def check_coincidence(f: Callable, pa, samples, tol: float = 1e-12, relative_to: str = "value") -> CoincidenceReport:
    """Compare ``f(x + 0i)`` with the real activation ``pa.eval_real(x)``.

    The bound at each sample is ``tol * (1 + |f_real(x)|)`` for
    ``relative_to="value"`` or ``tol * (1 + |x|)`` for ``relative_to="x"``.
    """
    x = np.asarray(samples, dtype=float).ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        got = as_complex(f(x + 0j))
    want = np.asarray(pa.eval_real(x), dtype=float)
    dev = np.abs(got - want)
    if relative_to == "value":
        scale = 1.0 + np.abs(want)
    elif relative_to == "x":
        scale = 1.0 + np.abs(x)
    else:
        raise ValueError(f"relative_to must be 'value' or 'x', got {relative_to!r}")
    scaled = np.where(np.isfinite(dev), dev / scale, np.inf)
    i = int(np.argmax(scaled))
    return CoincidenceReport(
        passed=bool(np.all(scaled <= tol)),
        max_deviation=float(np.max(dev)),
        max_scaled_deviation=float(scaled[i]),
        worst_x=float(x[i]),
        tol=tol,
        n_samples=int(x.size),
    )


def interaction_probe(f: Callable, xs=(-1.5, -0.5, 0.5, 1.5), ys=(-1.0, -0.3, 0.3, 1.0), tol: float = 1e-12) -> dict:
    """Does Re f depend on Im z, or Im f on Re z?  Descriptive only."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    fz = as_complex(f(xx + 1j * yy))
    re_spread = float(np.max(np.ptp(fz.real, axis=1)))
    im_spread = float(np.max(np.ptp(fz.imag, axis=0)))
    return {
        "re_depends_on_y": re_spread > tol,
        "im_depends_on_x": im_spread > tol,
        "interaction": re_spread > tol or im_spread > tol,
    }
