"""Carrier-Greenspan coordinate maps between the physical and hodograph planes.

Physical variables ``(x, t, eta, u)`` and hodograph variables
``(sigma, tau, psi, phi)`` are related by

    phi = u,   psi = eta + u^2/2,   sigma^2 = x + eta,   tau = (t - u)/2.

The shoreline ``x + eta = 0`` sits at ``sigma = 0``. With zero initial
velocity the initial line ``t = 0`` maps to ``tau = 0`` and
``psi(sigma, 0) = eta0(gamma(sigma))`` where ``gamma`` solves
``x + eta0(x) = sigma^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BreakingError, DataError, DomainError
from .sampled import SampledFunction

NEAR_BREAKING = 0.05


def _as_strict_grid(a, name):
    a = np.asarray(a, dtype=float).ravel()
    if a.size < 2:
        raise DataError(f"{name}: need at least two samples")
    if not np.all(np.isfinite(a)):
        raise DataError(f"{name}: non-finite entries")
    return a


@dataclass(frozen=True)
class PhysicalInitialData:
    """Initial displacement ``eta0(x)``; the initial velocity is zero."""

    eta0: SampledFunction

    @property
    def x(self) -> np.ndarray:
        return self.eta0.grid

    @property
    def depth(self) -> np.ndarray:
        """Total depth ``x + eta0(x)`` at the grid nodes."""
        return self.eta0.grid + self.eta0.values


@dataclass(frozen=True)
class HodographInitialData:
    """``psi(sigma, 0)`` and ``phi(sigma, 0)`` on a grid starting at 0."""

    psi0: SampledFunction
    phi0: SampledFunction | None = None

    def __post_init__(self):
        if abs(self.psi0.grid[0]) > 0:
            raise DataError("hodograph initial data must start at sigma = 0")
        if self.phi0 is not None and self.phi0.grid[0] != 0:
            raise DataError("phi0 must start at sigma = 0")

    @property
    def sigma(self) -> np.ndarray:
        return self.psi0.grid

    @property
    def sigma_max(self) -> float:
        hi = self.psi0.domain[1]
        if self.phi0 is not None:
            hi = min(hi, self.phi0.domain[1])
        return hi

    @property
    def has_velocity(self) -> bool:
        return self.phi0 is not None and bool(np.any(self.phi0.values != 0))


@dataclass(frozen=True)
class ShorelineRecord:
    """Shoreline position ``x0(t)`` and, optionally, velocity ``v0(t)``."""

    t: np.ndarray
    x0: np.ndarray
    v0: np.ndarray | None = None

    def __post_init__(self):
        t = _as_strict_grid(self.t, "t")
        x0 = np.asarray(self.x0, dtype=float).ravel()
        if x0.size != t.size:
            raise DataError("t and x0 must have the same length")
        if not np.all(np.isfinite(x0)):
            raise DataError("x0: non-finite entries")
        if np.any(np.diff(t) <= 0):
            raise DataError("record times must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x0", x0)
        if self.v0 is not None:
            v0 = np.asarray(self.v0, dtype=float).ravel()
            if v0.size != t.size:
                raise DataError("t and v0 must have the same length")
            if not np.all(np.isfinite(v0)):
                raise DataError("v0: non-finite entries")
            object.__setattr__(self, "v0", v0)

    def __len__(self):
        return self.t.size


@dataclass(frozen=True)
class ShorelineTrace:
    """Hodograph boundary data ``Psi(tau) = psi(0, tau)``, ``V(tau) = phi(0, tau)``."""

    tau: np.ndarray
    Psi: np.ndarray
    V: np.ndarray | None = None

    def __post_init__(self):
        tau = _as_strict_grid(self.tau, "tau")
        Psi = np.asarray(self.Psi, dtype=float).ravel()
        if Psi.size != tau.size:
            raise DataError("tau and Psi must have the same length")
        if np.any(np.diff(tau) <= 0):
            raise BreakingError("hodograph time tau is not strictly increasing")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "Psi", Psi)
        if self.V is not None:
            V = np.asarray(self.V, dtype=float).ravel()
            if V.size != tau.size:
                raise DataError("tau and V must have the same length")
            object.__setattr__(self, "V", V)

    def psi_function(self) -> SampledFunction:
        return SampledFunction(self.tau, self.Psi, name="Psi")


@dataclass(frozen=True)
class BreakingReport:
    """Outcome of :func:`breaking_check`.

    ``margin`` is ``min(1 + d eta0/dx)`` for initial data and
    ``min(1 - d v0/dt)`` for records; the hodograph map stays invertible while
    it is positive.
    """

    kind: str
    margin: float
    location: float
    breaking: bool
    near_breaking: bool
    note: str = field(default="")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "margin": self.margin,
            "location": self.location,
            "breaking": self.breaking,
            "near_breaking": self.near_breaking,
            "note": self.note,
        }


# -- initial data ---------------------------------------------------------


def _check_depth_monotone(eta0: SampledFunction, upto: float):
    """Raise :class:`BreakingError` unless ``x + eta0(x)`` increases up to depth ``upto``."""
    x = eta0.grid
    H = x + eta0.values
    reach = np.flatnonzero(np.maximum.accumulate(H) >= upto)
    stop = (reach[0] if reach.size else x.size - 1) + 1
    xs = x[: stop + 1]
    slope = 1.0 + eta0.derivative(xs)
    bad = np.flatnonzero((np.diff(H[: stop + 1]) <= 0) | (slope[1:] <= 0))
    if bad.size:
        raise BreakingError(
            f"total depth x + eta0(x) is not increasing near x = {xs[bad[0] + 1]:.6g}; "
            "the initial wave is breaking"
        )


def gamma_solve(eta0: SampledFunction, sigma, tol: float = 1e-12) -> np.ndarray:
    """Solve ``x + eta0(x) = sigma^2`` for ``x``.

    The root is bracketed on the tabulated depth, narrowed by bisection and
    polished with Newton steps.
    """
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0) or not np.all(np.isfinite(sigma)):
        raise DomainError("sigma must be finite and non-negative")
    target = np.square(sigma).ravel()
    x = eta0.grid
    H = x + eta0.values
    if target.size == 0:
        return np.empty(sigma.shape)
    if target.min() < H[0] or target.max() > H[-1]:
        raise DomainError(
            f"sigma^2 in [{target.min():.6g}, {target.max():.6g}] is outside the "
            f"depth range [{H[0]:.6g}, {H[-1]:.6g}] covered by the profile"
        )
    _check_depth_monotone(eta0, target.max())

    cell = np.clip(np.searchsorted(H, target, side="right") - 1, 0, x.size - 2)
    lo = x[cell].copy()
    hi = x[cell + 1].copy()

    def resid(z):
        return z + eta0(z) - target

    for _ in range(60):
        mid = 0.5 * (lo + hi)
        r = resid(mid)
        left = r > 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        if np.all(hi - lo <= 1e-15 * np.maximum(1.0, np.abs(mid))):
            break
    root = 0.5 * (lo + hi)
    for _ in range(3):
        step = resid(root) / (1.0 + eta0.derivative(root))
        root = np.clip(root - step, x[cell], x[cell + 1])
    if np.max(np.abs(resid(root))) > tol * max(1.0, target.max()):
        raise BreakingError("gamma_solve failed to converge; depth not monotone")
    return root.reshape(sigma.shape)


def initial_to_hodograph(d: PhysicalInitialData, sigma_grid) -> HodographInitialData:
    """Map zero-velocity initial data to ``psi0(sigma) = eta0(gamma(sigma))``."""
    sigma = np.asarray(sigma_grid, dtype=float)
    if sigma[0] != 0:
        raise DataError("sigma grid must start at 0")
    xg = gamma_solve(d.eta0, sigma)
    psi0 = SampledFunction(sigma, d.eta0(xg), name="psi0")
    phi0 = SampledFunction(sigma, np.zeros_like(sigma), name="phi0")
    return HodographInitialData(psi0, phi0)


def hodograph_ic_to_physical(h: HodographInitialData, x_grid=None) -> PhysicalInitialData:
    """Parametric inverse of :func:`initial_to_hodograph`.

    ``x(sigma) = sigma^2 - psi0(sigma)`` and ``eta0(x(sigma)) = psi0(sigma)``,
    optionally resampled onto ``x_grid`` (which must lie inside the
    reconstructed range).
    """
    if h.has_velocity:
        raise DataError("nonzero initial velocity is not supported")
    sigma = h.psi0.grid
    psi = h.psi0.values
    x = sigma**2 - psi
    if np.any(np.diff(x) <= 0):
        i = int(np.flatnonzero(np.diff(x) <= 0)[0])
        raise BreakingError(
            f"x(sigma) = sigma^2 - psi0(sigma) is not increasing near sigma = "
            f"{sigma[i]:.6g}; the reconstructed profile would be multivalued"
        )
    eta0 = SampledFunction(x, psi, name="eta0")
    if x_grid is not None:
        x_grid = np.asarray(x_grid, dtype=float)
        lo, hi = eta0.domain
        if not eta0.covers(x_grid.min(), x_grid.max()):
            raise DomainError(
                f"requested x in [{x_grid.min():.6g}, {x_grid.max():.6g}] but the "
                f"data determine eta0 only on [{lo:.6g}, {hi:.6g}]"
            )
        eta0 = eta0.resample(x_grid)
    return PhysicalInitialData(eta0)


# -- shoreline boundary ---------------------------------------------------


def record_to_trace(r: ShorelineRecord) -> ShorelineTrace:
    """Pointwise ``tau = (t - v0)/2``, ``Psi = -x0 + v0^2/2``, ``V = v0``."""
    if r.v0 is None:
        raise DataError("record has no velocity column; differentiate it first")
    tau = 0.5 * (r.t - r.v0)
    if np.any(np.diff(tau) <= 0):
        i = int(np.flatnonzero(np.diff(tau) <= 0)[0])
        raise BreakingError(
            f"hodograph time tau stops increasing at t = {r.t[i]:.6g}; "
            "the wave breaks at the shoreline"
        )
    return ShorelineTrace(tau, -r.x0 + 0.5 * r.v0**2, r.v0.copy())


def trace_to_record(tr: ShorelineTrace) -> ShorelineRecord:
    """Inverse of :func:`record_to_trace`: ``t = 2 tau + V``, ``x0 = -Psi + V^2/2``."""
    if tr.V is None:
        raise DataError("trace has no boundary velocity V")
    t = 2.0 * tr.tau + tr.V
    if np.any(np.diff(t) <= 0):
        i = int(np.flatnonzero(np.diff(t) <= 0)[0])
        raise BreakingError(
            f"physical time t(tau) stops increasing at tau = {tr.tau[i]:.6g}"
        )
    return ShorelineRecord(t, -tr.Psi + 0.5 * tr.V**2, tr.V.copy())


# -- diagnostics ----------------------------------------------------------


def _dense(grid: np.ndarray) -> np.ndarray:
    mid = 0.5 * (grid[1:] + grid[:-1])
    return np.sort(np.concatenate([grid, mid]))


def breaking_check(obj) -> BreakingReport:
    """Invertibility margin of the hodograph map for initial data or a record."""
    if isinstance(obj, PhysicalInitialData):
        xs = _dense(obj.eta0.grid)
        margin = 1.0 + obj.eta0.derivative(xs)
        kind = "initial"
    elif isinstance(obj, ShorelineRecord):
        if obj.v0 is None:
            return BreakingReport(
                "record", float("nan"), float("nan"), False, False,
                note="no velocity column; margin not evaluated",
            )
        v0 = SampledFunction(obj.t, obj.v0, name="v0")
        xs = _dense(obj.t)
        margin = 1.0 - v0.derivative(xs)
        kind = "record"
    else:
        raise TypeError(f"cannot check {type(obj).__name__} for breaking")
    i = int(np.argmin(margin))
    m = float(margin[i])
    return BreakingReport(kind, m, float(xs[i]), m <= 0.0, m <= NEAR_BREAKING)
