"""Finite-difference reference solver for the hodograph wave equation.

Evolves

    psi_tt = psi_ss + psi_s / s            (s = sigma, t = tau)

with leapfrog in time and centred differences in space. On the axis the
regular limit ``psi_tt = 2 psi_ss`` is used with the mirror condition
``psi(-ds) = psi(ds)``. The companion ``phi`` follows the first-order system

    psi_s = -s phi_t,      psi_t = -s phi_s - 2 phi,

integrated in time as ``phi_t = -psi_s / s`` with the trapezoidal rule (the
axis limit of ``psi_s / s`` is ``psi_ss(0)``). The outer boundary holds its
initial value, so the grid must extend beyond ``support + tau_max`` for the
axis to stay unaffected.

This module is a test oracle, not a production path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, StabilityError
from .hodograph import HodographInitialData, ShorelineTrace
from .io import write_table


@dataclass
class WaveConfig:
    sigma_max: float
    tau_max: float
    n_sigma: int = 2001
    cfl: float = 0.5
    store_every: int = 1


@dataclass(frozen=True)
class HodographField:
    sigma: np.ndarray
    tau: np.ndarray
    psi: np.ndarray  # shape (n_tau, n_sigma)
    phi: np.ndarray

    def to_csv(self, path, every: int = 1):
        """Write long-format rows ``sigma, tau, psi, phi`` (every ``every``-th node)."""
        T, S = np.meshgrid(self.tau[::every], self.sigma[::every], indexing="ij")
        write_table(path, "field", {
            "sigma": S.ravel(), "tau": T.ravel(),
            "psi": self.psi[::every, ::every].ravel(), "phi": self.phi[::every, ::every].ravel(),
        })


def _laplacian(psi: np.ndarray, ds: float, inv_s: np.ndarray) -> np.ndarray:
    """Radial operator psi_ss + psi_s/s; the last entry is left at zero."""
    out = np.zeros_like(psi)
    out[0] = 4.0 * (psi[1] - psi[0]) / ds**2
    out[1:-1] = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / ds**2 + inv_s[1:-1] * (
        psi[2:] - psi[:-2]
    ) / (2.0 * ds)
    return out


def _grad_over_s(psi: np.ndarray, ds: float, inv_s: np.ndarray) -> np.ndarray:
    """psi_s / s with the axis limit psi_ss(0); one-sided at the outer edge."""
    out = np.empty_like(psi)
    out[0] = 2.0 * (psi[1] - psi[0]) / ds**2
    out[1:-1] = inv_s[1:-1] * (psi[2:] - psi[:-2]) / (2.0 * ds)
    # difference form keeps constants exact
    out[-1] = inv_s[-1] * (3.0 * (psi[-1] - psi[-2]) - (psi[-2] - psi[-3])) / (2.0 * ds)
    return out


def evolve(h: HodographInitialData, cfg: WaveConfig) -> HodographField:
    """March the wave equation from ``psi(sigma, 0) = psi0``, ``phi(sigma, 0) = 0``."""
    if h.has_velocity:
        raise DataError("the reference solver supports phi0 = 0 only")
    if cfg.n_sigma < 3:
        raise ConfigError("need at least three sigma nodes")
    if not 0 < cfg.cfl <= 0.5:
        raise ConfigError(f"CFL ratio {cfg.cfl} must lie in (0, 0.5]")
    if cfg.sigma_max > h.sigma_max * (1 + 1e-12):
        raise ConfigError(
            f"initial data stop at sigma = {h.sigma_max:.6g} < sigma_max = {cfg.sigma_max:.6g}"
        )
    sigma = np.linspace(0.0, cfg.sigma_max, cfg.n_sigma)
    ds = sigma[1]
    n_steps = max(1, int(np.ceil(cfg.tau_max / (cfg.cfl * ds))))
    dt = cfg.tau_max / n_steps
    if dt / ds > 0.5 + 1e-12:
        raise ConfigError(f"CFL ratio {dt / ds:.4g} exceeds 0.5")
    inv_s = np.zeros_like(sigma)
    inv_s[1:] = 1.0 / sigma[1:]

    psi_prev = np.asarray(h.psi0(sigma), dtype=float)
    edge = psi_prev[-1]
    # psi_t(sigma, 0) = -sigma phi0' - 2 phi0 = 0
    psi_cur = psi_prev + 0.5 * dt**2 * _laplacian(psi_prev, ds, inv_s)
    psi_cur[-1] = edge
    phi_prev = np.zeros_like(sigma)
    g_prev = _grad_over_s(psi_prev, ds, inv_s)
    g_cur = _grad_over_s(psi_cur, ds, inv_s)
    phi_cur = phi_prev - 0.5 * dt * (g_prev + g_cur)

    keep = range(0, n_steps + 1, cfg.store_every)
    psi_out = [psi_prev.copy()]
    phi_out = [phi_prev.copy()]
    taus = [0.0]
    if 1 in keep:
        psi_out.append(psi_cur.copy())
        phi_out.append(phi_cur.copy())
        taus.append(dt)
    r2 = dt**2
    for n in range(1, n_steps):
        psi_next = 2.0 * psi_cur - psi_prev + r2 * _laplacian(psi_cur, ds, inv_s)
        psi_next[-1] = edge
        g_next = _grad_over_s(psi_next, ds, inv_s)
        phi_next = phi_cur - 0.5 * dt * (g_cur + g_next)
        psi_prev, psi_cur = psi_cur, psi_next
        phi_cur, g_cur = phi_next, g_next
        if (n + 1) % cfg.store_every == 0 or n + 1 == n_steps:
            if not (np.all(np.isfinite(psi_cur)) and np.all(np.isfinite(phi_cur))):
                raise StabilityError(f"non-finite field at step {n + 1}")
            psi_out.append(psi_cur.copy())
            phi_out.append(phi_cur.copy())
            taus.append((n + 1) * dt)
    return HodographField(sigma, np.array(taus), np.array(psi_out), np.array(phi_out))


def extract_boundary(f: HodographField) -> ShorelineTrace:
    """Axis values ``Psi(tau) = psi(0, tau)``, ``V(tau) = phi(0, tau)``."""
    return ShorelineTrace(f.tau, f.psi[:, 0], f.phi[:, 0])
