"""Elliptic-integral kernels of the general shoreline equation.

For ``0 <= s < x`` the kernels

    K_n(x, s) = int_s^x t^n dt / sqrt((t^2 - s^2)(x^2 - t^2)),   n = 0, 2

reduce, with ``t = x sqrt(1 - m sin^2 phi)`` and ``m = 1 - s^2/x^2``, to

    K_0(x, s) = K(m) / x,        K_2(x, s) = x E(m),

where K and E are the complete elliptic integrals of the first and second
kind (parameter ``m = k^2``). Differentiating ``x E(m)`` in ``s`` gives

    dK_2/ds (x, s) = s (K(m) - E(m)) / (x m).

K and ``K - E`` both come out of one arithmetic-geometric-mean sweep, so the
small-``m`` cancellation in ``K - E`` never happens.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

_AGM_MAXITER = 64
_AGM_RTOL = 2.0 * np.finfo(float).eps


def elliptic_ke(kprime):
    """Return ``(K, K - E)`` for complementary modulus ``kprime`` in (0, 1].

    Uses the AGM of ``1`` and ``kprime``::

        K = pi / (2 AGM),    K - E = K * sum_{n>=0} 2^(n-1) c_n^2

    with ``c_0^2 = 1 - kprime^2`` and ``c_{n+1} = c_n^2 / (4 a_{n+1})``.
    ``kprime = 0`` gives ``K = inf``.
    """
    kp = np.asarray(kprime, dtype=float)
    a = np.ones_like(kp)
    b = kp.copy()
    c2 = (1.0 - kp) * (1.0 + kp)
    acc = 0.5 * c2
    weight = 0.5
    for _ in range(_AGM_MAXITER):
        a_next = 0.5 * (a + b)
        b = np.sqrt(a * b)
        c2 = c2 * c2 / (16.0 * a_next * a_next)
        a = a_next
        weight *= 2.0
        acc = acc + weight * c2
        if np.all(np.abs(a - b) <= _AGM_RTOL * a):
            break
    with np.errstate(divide="ignore"):
        K = np.where(kp > 0, np.pi / (2.0 * a), np.inf)
    return K, K * acc


def _check_domain(x, s, *, allow_zero: bool):
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    x, s = np.broadcast_arrays(x, s)
    if np.any(~np.isfinite(x)) or np.any(~np.isfinite(s)):
        raise DomainError("kernel arguments must be finite")
    if np.any(x <= 0):
        raise DomainError("kernel outer argument x must be positive")
    bad = (s >= x) | ((s <= 0) if not allow_zero else (s < 0))
    if np.any(bad):
        lo = "0 <=" if allow_zero else "0 <"
        raise DomainError(f"kernel requires {lo} s < x")
    return x, s


def _parameter(x, s):
    """Elliptic parameter m = (x - s)(x + s) / x^2, free of cancellation."""
    return (x - s) * (x + s) / (x * x)


def kernel_k0(x, s):
    """K_0(x, s); returns ``+inf`` at the integrable singularity ``s = 0``."""
    x, s = _check_domain(x, s, allow_zero=True)
    K, _ = elliptic_ke(s / x)
    return K / x


def kernel_k2(x, s):
    """K_2(x, s) = x E(m); finite (equal to x) at ``s = 0``."""
    x, s = _check_domain(x, s, allow_zero=True)
    K, KmE = elliptic_ke(s / x)
    with np.errstate(invalid="ignore"):
        E = np.where(s > 0, K - KmE, 1.0)
    return x * E


def kernel_k2_ds(x, s):
    """Partial derivative of K_2(x, s) with respect to ``s``."""
    x, s = _check_domain(x, s, allow_zero=False)
    K, KmE = elliptic_ke(s / x)
    return s * KmE / (x * _parameter(x, s))


def combined_kernel(x, s):
    """Kernel multiplying the initial velocity in the shoreline equation.

    Equals ``(2/pi) [dK_2/ds (x, s) - s K_0(x, s)]``; see
    :func:`runup.direct.shoreline_equation_residual` for the equation it
    belongs to.
    """
    return (2.0 / np.pi) * (kernel_k2_ds(x, s) - s * kernel_k0(x, s))
