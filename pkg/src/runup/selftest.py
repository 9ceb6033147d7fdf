"""Built-in analytic anchors and oracle comparisons.

:func:`run_selftest` returns one :class:`Check` per invariant. Passing a
perturbed :class:`~runup.abel.AbelQuadrature` (see
:meth:`~runup.abel.AbelQuadrature.perturbed`) serves as a negative control:
the Abel anchors and the round trip must then fail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, asdict

import numpy as np
from scipy import integrate, special

from .abel import AbelQuadrature, DEFAULT_QUADRATURE, abel_forward, abel_inverse
from .direct import DirectConfig, direct_solution, poisson_boundary, trace_velocity
from .errors import BreakingError
from .hodograph import HodographInitialData, PhysicalInitialData, breaking_check
from .inversion import InversionConfig, invert_record
from .kernels import kernel_k0, kernel_k2, kernel_k2_ds
from .sampled import SampledFunction
from .wave_reference import WaveConfig, evolve, extract_boundary


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def _check(name, value, tol, start) -> Check:
    value = float(value)
    return Check(name, value, tol, bool(np.isfinite(value) and value <= tol),
                 time.perf_counter() - start)


def gaussian_profile(a=0.01, k=4.0, x_c=1.0, x_lo=-0.05, x_hi=6.0, n=4001):
    """``eta0 = a exp(-k (x - x_c)^2)`` sampled on ``[x_lo, x_hi]``."""
    x = np.linspace(x_lo, x_hi, n)
    return PhysicalInitialData(SampledFunction(x, a * np.exp(-k * (x - x_c) ** 2), name="eta0"))


def kernel_oracle(x, s, which):
    """Adaptive quadrature of the kernels after ``t^2 = s^2 cos^2 + x^2 sin^2``.

    The substitution removes both endpoint singularities:
    ``K_n = int_0^{pi/2} t^(n-1) d(theta)`` and
    ``dK_2/ds = int_0^{pi/2} s cos^2(theta) / t d(theta)``.
    """
    def t(th):
        return np.sqrt((s * np.cos(th)) ** 2 + (x * np.sin(th)) ** 2)

    f = {
        "k0": lambda th: 1.0 / t(th),
        "k2": lambda th: t(th),
        "k2_ds": lambda th: s * np.cos(th) ** 2 / t(th),
    }[which]
    return integrate.quad(f, 0.0, 0.5 * np.pi, epsabs=0.0, epsrel=1e-13, limit=200)[0]


def _abel_checks(quad):
    out = []
    t0 = time.perf_counter()
    s = np.linspace(0.0, 1.0, 2048)
    err = 0.0
    for vals, exact in ((np.ones_like(s), 0.5 * np.pi * np.ones_like(s)),
                        (s, s), (s**2, 0.25 * np.pi * s**2)):
        f = SampledFunction(s, vals)
        err = max(err, np.abs(abel_forward(f, s, quad).values - exact).max())
    c = SampledFunction(s, 0.7 * np.ones_like(s))
    err = max(err, np.abs(abel_inverse(c, s, quad).values - 2 * 0.7 / np.pi).max())
    out.append(_check("abel.analytic_anchors", err, 1e-6, t0))

    t0 = time.perf_counter()
    x = np.linspace(0.0, 3.0, 1024)
    f = SampledFunction(x, np.exp(-x**2))
    g = abel_forward(f, x, quad)
    back = abel_inverse(g, x, quad)
    out.append(_check("abel.roundtrip_gauss", np.abs(back.values - f.values).max(), 1e-3, t0))

    t0 = time.perf_counter()
    sigma = np.linspace(0.0, 3.0, 2048)
    h = HodographInitialData(SampledFunction(sigma, special.j0(2 * sigma), name="psi0"))
    tr = poisson_boundary(h, sigma, quad)
    out.append(_check("abel.bessel_anchor", np.abs(tr.Psi - np.cos(2 * sigma)).max(), 1e-3, t0))
    return out


def _kernel_checks():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(25):
        x = rng.uniform(0.2, 3.0)
        s = x * rng.uniform(0.01, 0.99)
        for which, fn in (("k0", kernel_k0), ("k2", kernel_k2), ("k2_ds", kernel_k2_ds)):
            ref = kernel_oracle(x, s, which)
            worst = max(worst, abs(float(fn(x, s)) - ref) / abs(ref))
    return [_check("kernels.oracle", worst, 1e-8, t0)]


def _physics_checks(quad):
    out = []
    t0 = time.perf_counter()
    x = np.linspace(-0.05, 6.0, 401)
    zero = PhysicalInitialData(SampledFunction(x, np.zeros_like(x), name="eta0"))
    res = direct_solution(zero, DirectConfig(n_sigma=256, n_tau=128, quad=quad))
    out.append(_check("direct.zero_profile", np.abs(res.record.x0).max(), 1e-12, t0))

    t0 = time.perf_counter()
    steep = gaussian_profile(a=1.0, k=10.0)
    rep = breaking_check(steep)
    try:
        direct_solution(steep, DirectConfig(quad=quad))
        rejected = False
    except BreakingError:
        rejected = True
    out.append(_check("hodograph.breaking_rejected", 0.0 if rejected and rep.breaking else 1.0,
                      0.0, t0))
    t0 = time.perf_counter()
    margin = breaking_check(gaussian_profile()).margin
    out.append(_check("hodograph.small_margin", 0.9 - margin, 0.0, t0))

    t0 = time.perf_counter()
    eta = gaussian_profile()
    fwd = direct_solution(eta, DirectConfig(quad=quad))
    inv = invert_record(fwd.record, InversionConfig(quad=quad))
    err = _relative_linf(inv.initial, eta)
    out.append(_check("inversion.roundtrip_gaussian", err, 1e-2, t0))
    return out


def _relative_linf(recovered: PhysicalInitialData, truth: PhysicalInitialData) -> float:
    xs = recovered.eta0.grid
    lo, hi = truth.eta0.domain
    xs = xs[(xs >= lo) & (xs <= hi)]
    ref = truth.eta0(xs)
    return float(np.abs(recovered.eta0(xs) - ref).max() / np.abs(truth.eta0.values).max())


def waveeq_check(
    h: HodographInitialData,
    tau_max: float,
    n_sigma: int = 2001,
    n_tau: int = 1024,
    quad: AbelQuadrature | None = None,
) -> dict:
    """Compare the Poisson boundary (``Psi``, ``V = -Psi'/2``) with the FD solver.

    The FD grid reaches ``h.sigma_max``; it must exceed the support of
    ``psi0`` plus ``tau_max`` for the comparison to be meaningful.
    """
    tau = np.linspace(0.0, tau_max, n_tau)
    direct = trace_velocity(poisson_boundary(h, tau, quad or DEFAULT_QUADRATURE))
    fd = extract_boundary(evolve(h, WaveConfig(h.sigma_max, tau_max, n_sigma)))
    Psi = np.interp(fd.tau, direct.tau, direct.Psi)
    V = np.interp(fd.tau, direct.tau, direct.V)
    return {
        "psi_max_diff": float(np.abs(Psi - fd.Psi).max()),
        "v_max_diff": float(np.abs(V - fd.V).max()),
        "tau_max": float(tau_max),
        "n_sigma": int(n_sigma),
        "n_tau": int(n_tau),
    }


def _wave_checks(quad):
    out = []
    t0 = time.perf_counter()
    sigma = np.linspace(0.0, 5.0, 2001)
    psi0 = 0.01 * np.exp(-4 * (sigma**2 - 1) ** 2)
    h = HodographInitialData(SampledFunction(sigma, psi0, name="psi0"))
    rep = waveeq_check(h, 2.5, n_sigma=1001, quad=quad)
    out.append(_check("waveeq.boundary_velocity", rep["v_max_diff"], 1e-2, t0))

    t0 = time.perf_counter()
    const = HodographInitialData(SampledFunction(sigma, np.full_like(sigma, 0.3)))
    f = evolve(const, WaveConfig(5.0, 1000 * 0.5 * 5.0 / 2000, 2001))
    dev = max(np.abs(f.psi - 0.3).max(), np.abs(f.phi).max())
    out.append(_check("waveeq.constant_state", dev, 1e-13, t0))
    return out


def run_selftest(quad: AbelQuadrature | None = None) -> list[Check]:
    """Run every built-in check; ``quad`` replaces the default Abel rule."""
    quad = quad or DEFAULT_QUADRATURE
    return (
        _abel_checks(quad)
        + _kernel_checks()
        + _physics_checks(quad)
        + _wave_checks(quad)
    )
