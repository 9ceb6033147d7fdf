"""Conversion between SI units and the dimensionless runup variables.

With reference height ``H0``, beach slope ``alpha`` and gravity ``g``,
dimensional quantities (tilde) relate to dimensionless ones by

    x = (alpha/H0) x~,   t = alpha sqrt(g/H0) t~,
    eta = eta~/H0,       u = u~/sqrt(g H0).

Every profile carries a ``kind`` tag that fixes the rule used for its
abscissa and for its values:

==================  =========  ======================
kind                abscissa   values
==================  =========  ======================
``elevation``       x          eta (elevation)
``velocity``        t          u (velocity)
``position-series`` t          x (shoreline position)
==================  =========  ======================
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, InvalidParametersError
from .sampled import SampledFunction

KINDS = ("elevation", "velocity", "position-series")

UNITS = {
    "elevation": ("m", "m"),
    "velocity": ("s", "m/s"),
    "position-series": ("s", "m"),
}


@dataclass(frozen=True)
class ScalingParameters:
    """Reference height ``H0`` (m), slope ``alpha`` and gravity ``g`` (m/s^2)."""

    H0: float
    alpha: float
    g: float = 9.81

    def __post_init__(self):
        for name in ("H0", "alpha", "g"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating)) and math.isfinite(v) and v > 0):
                raise InvalidParametersError(f"{name} must be positive and finite, got {v!r}")

    @property
    def length(self) -> float:
        """Metres per unit of dimensionless ``x``."""
        return self.H0 / self.alpha

    @property
    def time(self) -> float:
        """Seconds per unit of dimensionless ``t``."""
        return 1.0 / (self.alpha * math.sqrt(self.g / self.H0))

    @property
    def height(self) -> float:
        return self.H0

    @property
    def speed(self) -> float:
        return math.sqrt(self.g * self.H0)

    def factors(self, kind: str) -> tuple[float, float]:
        """(abscissa, value) multipliers taking dimensionless to SI for ``kind``."""
        _check_kind(kind)
        axis = self.length if kind == "elevation" else self.time
        value = {"elevation": self.height, "velocity": self.speed,
                 "position-series": self.length}[kind]
        return axis, value


def _check_kind(kind):
    if kind not in KINDS:
        raise InvalidParametersError(f"unknown profile kind {kind!r}; expected one of {KINDS}")


@dataclass(frozen=True)
class DimensionalProfile:
    """Samples in SI units tagged with the physical meaning of the values."""

    abscissa: np.ndarray
    values: np.ndarray
    kind: str = "elevation"

    def __post_init__(self):
        _check_kind(self.kind)
        a = np.asarray(self.abscissa, dtype=float).ravel()
        v = np.asarray(self.values, dtype=float).ravel()
        if a.size != v.size or a.size < 2:
            raise DataError("abscissa and values need equal length of at least two")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(v))):
            raise DataError("profile contains non-finite entries")
        if np.any(np.diff(a) <= 0):
            raise DataError("abscissa must be strictly increasing")
        object.__setattr__(self, "abscissa", a)
        object.__setattr__(self, "values", v)

    @property
    def units(self) -> tuple[str, str]:
        return UNITS[self.kind]

    def __mul__(self, c: float) -> "DimensionalProfile":
        return DimensionalProfile(self.abscissa, c * self.values, self.kind)

    __rmul__ = __mul__


def to_dimensionless(p: DimensionalProfile, s: ScalingParameters) -> SampledFunction:
    """Dimensionless samples of ``p``; the rule is chosen by ``p.kind``."""
    ax, val = s.factors(p.kind)
    return SampledFunction(p.abscissa / ax, p.values / val, name=p.kind)


def to_dimensional(f: SampledFunction, s: ScalingParameters, kind: str) -> DimensionalProfile:
    """Inverse of :func:`to_dimensionless`."""
    ax, val = s.factors(kind)
    return DimensionalProfile(f.grid * ax, f.values * val, kind)
