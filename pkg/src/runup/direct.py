"""Direct problem: initial displacement to shoreline motion.

The boundary value ``Psi(tau) = psi(0, tau)`` follows from the initial data
by the Poisson-type formula (``tau >= 0``)

    Psi = (pi/2) [A^-1 psi0 - tau A^-1 phi0] - A(s phi0),

the boundary velocity from ``V = -Psi'/2`` (differentiate ``Psi`` along the
shoreline and use ``tau = (t - v0)/2``), and the physical record from
:func:`runup.hodograph.trace_to_record`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, asdict

import numpy as np

from .abel import AbelQuadrature, DEFAULT_QUADRATURE, abel_forward, abel_integral, abel_inverse
from .errors import BreakingError, DomainError
from .hodograph import (
    HodographInitialData,
    PhysicalInitialData,
    ShorelineRecord,
    ShorelineTrace,
    breaking_check,
    initial_to_hodograph,
    trace_to_record,
)
from .kernels import combined_kernel
from .sampled import SampledFunction

log = logging.getLogger(__name__)

SUPPORT_RTOL = 1e-8


@dataclass
class DirectConfig:
    """Grid and quadrature settings for the direct problem.

    ``sigma_max=None`` picks four times the support radius of ``psi0``,
    limited by the depth range the profile covers. ``tau_max`` defaults to
    ``sigma_max`` (the boundary value at ``tau`` only needs ``psi0`` on
    ``[0, tau]``). ``quad`` overrides the Abel rule outright.
    """

    sigma_max: float | None = None
    n_sigma: int = 2048
    n_tau: int = 1024
    tau_max: float | None = None
    quad_panels: int = 8
    quad_order: int = 8
    kernel_nodes: int = 128
    quad: AbelQuadrature | None = None

    def quadrature(self) -> AbelQuadrature:
        """``quad`` if given, else the rule built from ``quad_panels`` and ``quad_order``."""
        return self.quad or AbelQuadrature(self.quad_panels, self.quad_order)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DirectResult:
    hodograph: HodographInitialData
    trace: ShorelineTrace
    record: ShorelineRecord
    sigma_max: float
    support_radius: float
    breaking: object


def support_radius(psi0: SampledFunction, rtol: float = SUPPORT_RTOL) -> float:
    """Largest sigma where ``|psi0|`` still exceeds ``rtol * max|psi0|``."""
    amp = np.abs(psi0.values)
    peak = amp.max()
    if peak == 0:
        return 0.0
    idx = np.flatnonzero(amp >= rtol * peak)
    return float(psi0.grid[min(idx[-1] + 1, psi0.grid.size - 1)])


def poisson_boundary(
    h: HodographInitialData, tau_grid, quad: AbelQuadrature | None = None
) -> ShorelineTrace:
    """Boundary value ``Psi`` on ``tau_grid`` (``V`` left unset)."""
    tau = np.asarray(tau_grid, dtype=float)
    if tau[0] < 0:
        raise DomainError("only tau >= 0 is supported")
    if tau[-1] > h.sigma_max * (1 + 1e-12):
        raise DomainError(
            f"tau up to {tau[-1]:.6g} needs initial data on [0, {tau[-1]:.6g}] "
            f"but it is given only up to sigma = {h.sigma_max:.6g}"
        )
    Psi = 0.5 * np.pi * abel_inverse(h.psi0, tau, quad).values
    if h.has_velocity:
        phi0 = h.phi0
        Psi -= 0.5 * np.pi * tau * abel_inverse(phi0, tau, quad).values
        spacing = phi0.domain[1] / (len(phi0) - 1)
        Psi -= abel_integral(lambda s: s * phi0(s), tau, quad, spacing)
    return ShorelineTrace(tau, Psi)


def trace_velocity(tr: ShorelineTrace) -> ShorelineTrace:
    """Attach ``V(tau) = -Psi'(tau)/2`` by spline differentiation."""
    V = -0.5 * tr.psi_function().derivative(tr.tau)
    return ShorelineTrace(tr.tau, tr.Psi, V)


def _resolve_sigma_max(d: PhysicalInitialData, cfg: DirectConfig) -> tuple[float, float]:
    H = d.depth
    cover = float(np.sqrt(max(H[-1], 0.0)))
    if cover <= 0:
        raise DomainError("profile does not extend offshore of the shoreline")
    probe = initial_to_hodograph(d, np.linspace(0.0, cover, cfg.n_sigma))
    radius = support_radius(probe.psi0)
    if cfg.sigma_max is not None:
        if cfg.sigma_max > cover * (1 + 1e-12):
            raise DomainError(
                f"sigma_max = {cfg.sigma_max:.6g} needs the profile out to depth "
                f"{cfg.sigma_max**2:.6g}; it reaches only {H[-1]:.6g}"
            )
        return float(cfg.sigma_max), radius
    if radius == 0.0:
        return cover, radius
    return min(4.0 * radius, cover), radius


def direct_solution(d: PhysicalInitialData, cfg: DirectConfig | None = None) -> DirectResult:
    """Full direct pipeline, keeping the intermediate hodograph quantities."""
    cfg = cfg or DirectConfig()
    report = breaking_check(d)
    if report.breaking:
        raise BreakingError(
            f"initial profile breaks: min(1 + eta0') = {report.margin:.4g} at "
            f"x = {report.location:.4g}",
            report=report,
        )
    sigma_max, radius = _resolve_sigma_max(d, cfg)
    sigma = np.linspace(0.0, sigma_max, cfg.n_sigma)
    h = initial_to_hodograph(d, sigma)
    peak = np.abs(h.psi0.values).max()
    if peak > 0 and abs(h.psi0.values[-1]) >= SUPPORT_RTOL * peak:
        log.warning(
            "psi0 has not decayed at sigma_max = %.4g (|psi0| = %.3g); "
            "the record covers only part of the event",
            sigma_max,
            abs(h.psi0.values[-1]),
        )
    tau_max = sigma_max if cfg.tau_max is None else cfg.tau_max
    tau = np.linspace(0.0, tau_max, cfg.n_tau)
    trace = trace_velocity(poisson_boundary(h, tau, cfg.quadrature()))
    record = trace_to_record(trace)
    return DirectResult(h, trace, record, sigma_max, radius, report)


def direct_shoreline(d: PhysicalInitialData, cfg: DirectConfig | None = None) -> ShorelineRecord:
    """Shoreline record produced by the zero-velocity initial displacement ``d``."""
    return direct_solution(d, cfg).record


def _kernel_term(phi0: SampledFunction, sigma: np.ndarray, nodes: int) -> np.ndarray:
    # s = sigma u^2 flattens the s log s behaviour of the kernel at s = 0
    u, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    out = np.zeros_like(sigma)
    pos = sigma > 0
    sg = sigma[pos][:, None]
    s = sg * u[None, :] ** 2
    jac = 2.0 * sg * u[None, :]
    out[pos] = (combined_kernel(sg, s) * phi0(s) * jac) @ w
    return out


def shoreline_equation_residual(
    h: HodographInitialData,
    tr: ShorelineTrace,
    sigma_grid=None,
    quad: AbelQuadrature | None = None,
    kernel_nodes: int = 128,
) -> SampledFunction:
    """Residual of the shoreline equation linking ``(psi0, phi0)`` and ``Psi``.

    The equation, checked pointwise in ``sigma``, is

        psi0(sigma) - sigma phi0(sigma)
            + int_0^sigma (2/pi)[dK_2/ds - s K_0](sigma, s) phi0(s) ds
            = (2/pi) (A Psi)(sigma),

    and the returned function is left side minus right side. It vanishes
    for a consistent pair and reduces to ``psi0 = (2/pi) A Psi`` when
    ``phi0 = 0``.
    """
    quad = quad or DEFAULT_QUADRATURE
    if sigma_grid is None:
        hi = min(h.sigma_max, tr.tau[-1])
        sigma = h.psi0.grid[h.psi0.grid <= hi * (1 + 1e-12)]
    else:
        sigma = np.asarray(sigma_grid, dtype=float)
    lhs = h.psi0(sigma)
    if h.has_velocity:
        lhs = lhs - sigma * h.phi0(sigma) + _kernel_term(h.phi0, sigma, kernel_nodes)
    rhs = (2.0 / np.pi) * abel_forward(tr.psi_function(), sigma, quad).values
    return SampledFunction(sigma, lhs - rhs, name="residual")
