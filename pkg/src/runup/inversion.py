"""Recover a zero-velocity initial displacement from a shoreline record.

1. Map the record to hodograph boundary data,
   ``tau = (t - v0)/2`` and ``Psi = -x0 + v0^2/2``.
2. ``psi0(sigma) = (2/pi) (A Psi)(sigma)`` for ``sigma`` up to the last ``tau``.
3. Read off ``eta0`` parametrically: ``x = sigma^2 - psi0``, ``eta0 = psi0``.

Shoreline velocities are taken from the record when present and otherwise
estimated by local least-squares polynomial fits.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, asdict, field

import numpy as np

from .abel import AbelQuadrature, abel_forward
from .direct import poisson_boundary, shoreline_equation_residual
from .errors import BreakingError, DataError
from .hodograph import (
    HodographInitialData,
    PhysicalInitialData,
    ShorelineRecord,
    ShorelineTrace,
    breaking_check,
    hodograph_ic_to_physical,
    record_to_trace,
)
from .sampled import SampledFunction

log = logging.getLogger(__name__)

VELOCITY_MISMATCH_WARN = 0.05


@dataclass
class InversionConfig:
    """Settings for :func:`recover_initial`.

    ``smooth_window=None`` disables smoothing of ``x0``; velocities missing
    from the record are then estimated with the smallest admissible window.
    ``quad`` overrides the Abel rule outright.
    """

    smooth_window: int | None = 11
    smooth_degree: int = 2
    n_tau: int = 1024
    x_grid: np.ndarray | None = None
    n_x: int = 512
    quad_panels: int = 8
    quad_order: int = 8
    quad: AbelQuadrature | None = None

    def quadrature(self) -> AbelQuadrature:
        return self.quad or AbelQuadrature(self.quad_panels, self.quad_order)

    def __post_init__(self):
        if not 0 <= self.smooth_degree <= 3:
            raise DataError("smoothing degree must be between 0 and 3")
        if self.smooth_window is not None:
            if self.smooth_window % 2 == 0:
                raise DataError("smoothing window must be an odd sample count")
            if self.smooth_window < self.smooth_degree + 1:
                raise DataError("smoothing window must exceed the polynomial degree")
        if self.n_tau < 64:
            raise DataError("n_tau must be at least 64")

    @property
    def min_window(self) -> int:
        w = self.smooth_degree + 1
        return w if w % 2 else w + 1

    def as_dict(self) -> dict:
        d = asdict(self)
        if self.x_grid is not None:
            d["x_grid"] = [float(self.x_grid[0]), float(self.x_grid[-1]), len(self.x_grid)]
        return d


@dataclass(frozen=True)
class InversionResult:
    initial: PhysicalInitialData
    hodograph: HodographInitialData
    trace: ShorelineTrace
    covered_x: tuple[float, float]
    sigma_max: float
    diagnostics: dict = field(default_factory=dict)


def local_polyfit(t, y, window: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Moving least-squares polynomial fit; returns (value, first derivative).

    Each sample is fitted with a degree-``degree`` polynomial over ``window``
    neighbouring samples (centred where possible, shifted inward at the
    ends) and the fit is evaluated at that sample. Polynomials up to the
    chosen degree are reproduced exactly, on any spacing.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    n = t.size
    if window % 2 == 0 or window < degree + 1:
        raise DataError(f"window {window} must be odd and at least degree + 1 = {degree + 1}")
    if n < window:
        raise DataError(f"need at least {window} samples for the smoothing window, got {n}")
    half = window // 2
    start = np.clip(np.arange(n) - half, 0, n - window)
    idx = start[:, None] + np.arange(window)[None, :]
    dt = t[idx] - t[:, None]
    scale = np.maximum(np.abs(dt).max(axis=1, keepdims=True), np.finfo(float).tiny)
    u = dt / scale
    V = u[:, :, None] ** np.arange(degree + 1)[None, None, :]
    coef = np.linalg.pinv(V) @ y[idx][:, :, None]
    coef = coef[:, :, 0]
    value = coef[:, 0]
    deriv = coef[:, 1] / scale[:, 0] if degree >= 1 else np.zeros(n)
    return value, deriv


def differentiate_record(t, x0, cfg: InversionConfig | None = None) -> np.ndarray:
    """Shoreline velocity ``v0 = dx0/dt`` from position samples."""
    cfg = cfg or InversionConfig()
    window = cfg.smooth_window if cfg.smooth_window is not None else cfg.min_window
    degree = max(cfg.smooth_degree, 1)
    if window < degree + 1:
        window = degree + 1 + (degree % 2 == 0)
    return local_polyfit(t, x0, window, degree)[1]


def condition_record(r: ShorelineRecord, cfg: InversionConfig) -> tuple[ShorelineRecord, dict]:
    """Smooth positions, supply or check velocities, pin the first sample to tau = 0."""
    diag: dict = {}
    span = r.t[-1] - r.t[0]
    if abs(r.t[0]) > 1e-6 * span:
        raise DataError(
            f"record starts at t = {r.t[0]:.6g}; it must start at the quiescent instant t = 0"
        )
    x0 = r.x0.copy()
    if cfg.smooth_window is not None:
        x0, _ = local_polyfit(r.t, r.x0, cfg.smooth_window, cfg.smooth_degree)
    v_est = differentiate_record(r.t, r.x0, cfg)
    if r.v0 is not None:
        v0 = r.v0.copy()
        ref = np.sqrt(np.mean(v0**2))
        mismatch = float(np.sqrt(np.mean((v0 - v_est) ** 2)) / ref) if ref > 0 else 0.0
        diag["velocity_source"] = "record"
        diag["velocity_mismatch_rms"] = mismatch
        if mismatch > VELOCITY_MISMATCH_WARN:
            log.warning(
                "record velocity disagrees with the differentiated positions "
                "(relative RMS %.3g)", mismatch,
            )
    else:
        v0 = v_est
        diag["velocity_source"] = "differentiated"
    diag["v0_at_start"] = float(v0[0])
    # zero initial velocity: the first sample sits at tau = 0
    v0[0] = r.t[0]
    return ShorelineRecord(r.t, x0, v0), diag


def invert_record(r: ShorelineRecord, cfg: InversionConfig | None = None) -> InversionResult:
    """Run the three recovery steps and keep the intermediate quantities."""
    cfg = cfg or InversionConfig()
    quad = cfg.quadrature()
    rec, diag = condition_record(r, cfg)
    report = breaking_check(rec)
    diag["breaking"] = report.as_dict()
    if report.breaking:
        raise BreakingError(
            f"record implies breaking: min(1 - dv0/dt) = {report.margin:.4g} at "
            f"t = {report.location:.4g}",
            report=report,
        )

    raw = record_to_trace(rec)
    tau_max = float(raw.tau[-1])
    tau = np.linspace(0.0, tau_max, cfg.n_tau)
    Psi = raw.psi_function().resample(tau, name="Psi")
    Psi_vals = Psi.values.copy()
    Psi_vals[0] = raw.Psi[0]
    Psi = SampledFunction(tau, Psi_vals, name="Psi")
    V = SampledFunction(raw.tau, raw.V, name="V")(tau)
    trace = ShorelineTrace(tau, Psi_vals, V)

    psi0 = abel_forward(Psi, tau, quad).scaled(2.0 / np.pi)
    psi0 = SampledFunction(psi0.grid, psi0.values, name="psi0")
    phi0 = SampledFunction(tau, np.zeros_like(tau), name="phi0")
    hodo = HodographInitialData(psi0, phi0)

    full = hodograph_ic_to_physical(hodo)
    lo, hi = full.eta0.domain
    if cfg.x_grid is not None:
        initial = hodograph_ic_to_physical(hodo, cfg.x_grid)
    else:
        initial = hodograph_ic_to_physical(hodo, np.linspace(lo, hi, cfg.n_x))

    peak = np.abs(Psi_vals).max()
    tail = abs(Psi_vals[-1]) / peak if peak > 0 else 0.0
    diag["tail_ratio"] = float(tail)
    diag["covered_x"] = [lo, hi]
    diag["sigma_max"] = tau_max
    check = poisson_boundary(hodo, tau, quad)
    diag["trace_reproduction_max"] = float(np.abs(check.Psi - Psi_vals).max())
    diag["shoreline_residual_max"] = float(
        np.abs(shoreline_equation_residual(hodo, trace, tau, quad).values).max()
    )
    return InversionResult(initial, hodo, trace, (lo, hi), tau_max, diag)


def recover_initial(r: ShorelineRecord, cfg: InversionConfig | None = None) -> PhysicalInitialData:
    """Initial displacement ``eta0(x)`` that produces the shoreline record ``r``."""
    return invert_record(r, cfg).initial
