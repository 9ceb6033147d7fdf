"""Long-wave runup on a plane beach via the hodograph transformation.

The direct problem maps an initial displacement ``eta0(x)`` (at rest) to the
shoreline motion ``x0(t)``; the inverse problem recovers ``eta0`` from a
shoreline record. Both use Abel transforms in the hodograph plane.
"""

__version__ = "0.1.0"

from .abel import AbelQuadrature, abel_forward, abel_inverse
from .direct import DirectConfig, direct_shoreline, direct_solution, shoreline_equation_residual
from .errors import (
    BreakingError,
    ConfigError,
    DataError,
    DomainError,
    InvalidParametersError,
    RunupError,
    SchemaError,
    StabilityError,
)
from .hodograph import (
    BreakingReport,
    HodographInitialData,
    PhysicalInitialData,
    ShorelineRecord,
    ShorelineTrace,
    breaking_check,
    hodograph_ic_to_physical,
    initial_to_hodograph,
    record_to_trace,
    trace_to_record,
)
from .inversion import InversionConfig, differentiate_record, invert_record, recover_initial
from .kernels import combined_kernel, kernel_k0, kernel_k2, kernel_k2_ds
from .sampled import SampledFunction
from .scaling import DimensionalProfile, ScalingParameters, to_dimensional, to_dimensionless

__all__ = [
    "AbelQuadrature", "abel_forward", "abel_inverse",
    "DirectConfig", "direct_shoreline", "direct_solution", "shoreline_equation_residual",
    "BreakingError", "ConfigError", "DataError", "DomainError", "InvalidParametersError",
    "RunupError", "SchemaError", "StabilityError",
    "BreakingReport", "HodographInitialData", "PhysicalInitialData", "ShorelineRecord",
    "ShorelineTrace", "breaking_check", "hodograph_ic_to_physical", "initial_to_hodograph",
    "record_to_trace", "trace_to_record",
    "InversionConfig", "differentiate_record", "invert_record", "recover_initial",
    "combined_kernel", "kernel_k0", "kernel_k2", "kernel_k2_ds",
    "SampledFunction",
    "DimensionalProfile", "ScalingParameters", "to_dimensional", "to_dimensionless",
]
