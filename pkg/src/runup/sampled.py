"""Sampled functions with shape-preserving (monotone) cubic Hermite evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import DataError, DomainError

# relative slack for abscissas that land a rounding error past the grid ends
_EDGE_RTOL = 1e-12


def _lagrange_slopes(x: np.ndarray, y: np.ndarray, centre: np.ndarray, width: int) -> np.ndarray:
    """Derivative at ``x[centre]`` of the polynomial through ``width`` centred neighbours."""
    half = width // 2
    offs = np.arange(-half, half + 1)
    X = x[centre[:, None] + offs[None, :]]
    Y = y[centre[:, None] + offs[None, :]]
    xc = X[:, half]
    out = np.zeros(centre.size)
    for j in range(width):
        if j == half:
            w = sum(1.0 / (xc - X[:, i]) for i in range(width) if i != half)
        else:
            w = 1.0 / (X[:, j] - xc)
            for i in range(width):
                if i not in (j, half):
                    w = w * (xc - X[:, i]) / (X[:, j] - X[:, i])
        out += w * Y[:, j]
    return out


def _parabola_slopes(h: np.ndarray, delta: np.ndarray):
    """Slopes at each interior node of the centred, left and right parabolas.

    Entry ``i`` refers to node ``i + 1``; left/right values are NaN where the
    stencil would leave the grid.
    """
    h0, h1 = h[:-1], h[1:]
    m0, m1 = delta[:-1], delta[1:]
    centre = (m0 * h1 + m1 * h0) / (h0 + h1)
    left = np.full_like(centre, np.nan)
    right = np.full_like(centre, np.nan)
    # parabola through nodes i-2, i-1, i evaluated at node i
    left[1:] = (m0[1:] * (2.0 * h0[1:] + h0[:-1]) - delta[:-2] * h0[1:]) / (h0[:-1] + h0[1:])
    # parabola through nodes i, i+1, i+2 evaluated at node i
    right[:-1] = (m1[:-1] * (2.0 * h1[:-1] + h1[1:]) - delta[2:] * h1[:-1]) / (h1[:-1] + h1[1:])
    return centre, left, right


def _limit_interior(d: np.ndarray, h: np.ndarray, delta: np.ndarray) -> None:
    """Filter interior slopes in place so monotone data stays monotone.

    Where the adjacent secants share a sign the slope keeps that sign and is
    capped at ``3 min|secant|``. Next to a smooth extremum that cap is
    relaxed to ``1.5`` times the local one-sided parabola slopes, which
    removes the first-order clipping error there. Slopes next to a flat
    secant are zeroed; slopes at strict data extrema are left as estimated.
    """
    m0, m1 = delta[:-1], delta[1:]
    sgn = np.sign(m0)
    monotone = (sgn * np.sign(m1)) > 0
    cap = 3.0 * np.minimum(np.abs(m0), np.abs(m1))

    centre, left, right = _parabola_slopes(h, delta)
    dd = np.diff(delta)  # dd[i] = delta[i+1] - delta[i]; node i+1 sits between
    n_int = centre.size
    # second differences on the left (nodes i-1, i) and right (nodes i, i+1) sides
    dd_left_outer = np.full(n_int, np.nan)
    dd_left_outer[1:] = dd[:-1]
    dd_right_outer = np.full(n_int, np.nan)
    dd_right_outer[:-1] = dd[1:]
    with np.errstate(invalid="ignore"):
        ok_left = (
            (sgn * left > 0) & (sgn * centre > 0)
            & (sgn * dd_left_outer > 0) & (sgn * dd > 0)
        )
        ok_right = (
            (sgn * right > 0) & (sgn * centre > 0)
            & (sgn * dd_right_outer < 0) & (sgn * dd < 0)
        )
    absc = np.abs(centre)
    cap = np.where(ok_left, np.maximum(cap, 1.5 * np.minimum(np.abs(left), absc)), cap)
    cap = np.where(ok_right, np.maximum(cap, 1.5 * np.minimum(np.abs(right), absc)), cap)

    inner = d[1:-1]
    flat = (m0 == 0) | (m1 == 0)
    d[1:-1] = np.where(monotone, sgn * np.clip(sgn * inner, 0.0, cap), np.where(flat, 0.0, inner))


def monotone_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Node derivatives for a monotone cubic Hermite interpolant.

    Interior nodes start from a centred Lagrange estimate (five points where
    available, three next to the ends) and are then passed through
    :func:`_limit_interior`. End nodes use one-sided three-point stencils,
    sign-matched to the end secant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    h = np.diff(x)
    delta = np.diff(y) / h
    if n == 2:
        return np.full(2, delta[0])

    d = np.empty(n)
    d[1:-1] = _lagrange_slopes(x, y, np.arange(1, n - 1), 3)
    if n >= 5:
        d[2:-2] = _lagrange_slopes(x, y, np.arange(2, n - 2), 5)

    _limit_interior(d, h, delta)

    # one-sided 3-point stencils
    d[0] = ((2.0 * h[0] + h[1]) * delta[0] - h[0] * delta[1]) / (h[0] + h[1])
    d[-1] = ((2.0 * h[-1] + h[-2]) * delta[-1] - h[-1] * delta[-2]) / (h[-1] + h[-2])
    if np.sign(d[0]) != np.sign(delta[0]):
        d[0] = 0.0
    if np.sign(d[-1]) != np.sign(delta[-1]):
        d[-1] = 0.0
    return d


@dataclass(frozen=True)
class SampledFunction:
    """A function known on a strictly increasing grid.

    Off-grid values come from a monotone cubic Hermite interpolant; asking
    for a value outside ``[grid[0], grid[-1]]`` raises :class:`DomainError`.
    """

    grid: np.ndarray
    values: np.ndarray
    name: str = field(default="f", compare=False)

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float).ravel()
        values = np.array(self.values, dtype=float).ravel()
        if grid.size != values.size:
            raise DataError(
                f"{self.name}: grid has {grid.size} points but values has {values.size}"
            )
        if grid.size < 2:
            raise DataError(f"{self.name}: need at least two samples")
        if not np.all(np.isfinite(grid)):
            raise DataError(f"{self.name}: non-finite abscissa")
        if not np.all(np.isfinite(values)):
            raise DataError(f"{self.name}: non-finite value (NaN or inf)")
        if np.any(np.diff(grid) <= 0):
            raise DataError(f"{self.name}: grid must be strictly increasing")
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, func, grid, name="f") -> "SampledFunction":
        grid = np.asarray(grid, dtype=float)
        return cls(grid, func(grid), name=name)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def __len__(self):
        return self.grid.size

    @cached_property
    def _spline(self) -> CubicHermiteSpline:
        slopes = monotone_slopes(self.grid, self.values)
        return CubicHermiteSpline(self.grid, self.values, slopes, extrapolate=True)

    @cached_property
    def _dspline(self):
        return self._spline.derivative()

    def _checked(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.size == 0:
            return x
        if not np.all(np.isfinite(x)):
            raise DataError(f"{self.name}: evaluation at non-finite abscissa")
        lo, hi = self.domain
        slack = _EDGE_RTOL * max(1.0, abs(lo), abs(hi))
        if x.min() < lo - slack or x.max() > hi + slack:
            raise DomainError(
                f"{self.name}: requested [{x.min():.6g}, {x.max():.6g}] lies outside "
                f"the sampled domain [{lo:.6g}, {hi:.6g}]"
            )
        return np.clip(x, lo, hi)

    def __call__(self, x):
        return self._spline(self._checked(x))

    def derivative(self, x):
        """First derivative of the interpolant at ``x``."""
        return self._dspline(self._checked(x))

    def covers(self, lo: float, hi: float) -> bool:
        a, b = self.domain
        slack = _EDGE_RTOL * max(1.0, abs(a), abs(b))
        return a <= lo + slack and hi <= b + slack

    def resample(self, grid, name=None) -> "SampledFunction":
        grid = np.asarray(grid, dtype=float)
        return SampledFunction(grid, self(grid), name=name or self.name)

    def scaled(self, factor: float) -> "SampledFunction":
        return SampledFunction(self.grid, factor * self.values, name=self.name)
