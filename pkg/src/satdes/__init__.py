"""satdes: exact saturated-design construction for two-level factorials.

A full factorial on k two-level factors supports 2^k orthogonal effects.
When all but n of them are declared negligible, deleting 2^k - n runs can
leave a saturated design that still estimates the remaining effects; this
package enumerates, checks and optimizes such deletions with exact integer
arithmetic, and computes the resulting estimators and predictors.
"""
from satdes.estimation import (
    EfficiencyResult,
    EstimationResult,
    ObservationError,
    ObservationVector,
    SimulationSummary,
    blue,
    blup_unobserved,
    dispersion,
    read_observations,
    relative_efficiency,
    simulate,
)
from satdes.exactmat import (
    DimensionError,
    IntMatrix,
    RatMatrix,
    SingularMatrixError,
    det_exact,
    inverse_exact,
    matmul,
)
from satdes.kernels import available_backends, backend_name, set_backend
from satdes.model import (
    Effect,
    LabelError,
    ModelSpec,
    Run,
    all_effects,
    all_runs,
    build_model_matrix,
    parse_effect,
    parse_run,
    sign_of,
)
from satdes.partition import (
    ComplementInverse,
    DetIdentity,
    InadmissibleDesignError,
    Partition,
    contrast_check,
    inverse_via_complement,
    make_partition,
    verify_det_identity,
)
from satdes.search import (
    CapExceededError,
    DesignReport,
    DeterminantClass,
    EnumerationResult,
    NoAdmissibleSetError,
    OptimalResult,
    SearchConfig,
    SpectrumResult,
    d_optimal,
    enumerate_admissible,
    is_admissible,
    spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "ComplementInverse",
    "DesignReport",
    "DetIdentity",
    "DeterminantClass",
    "DimensionError",
    "Effect",
    "EfficiencyResult",
    "EnumerationResult",
    "EstimationResult",
    "InadmissibleDesignError",
    "IntMatrix",
    "LabelError",
    "ModelSpec",
    "NoAdmissibleSetError",
    "ObservationError",
    "ObservationVector",
    "OptimalResult",
    "Partition",
    "RatMatrix",
    "Run",
    "SearchConfig",
    "SimulationSummary",
    "SingularMatrixError",
    "SpectrumResult",
    "all_effects",
    "all_runs",
    "available_backends",
    "backend_name",
    "blue",
    "blup_unobserved",
    "build_model_matrix",
    "contrast_check",
    "d_optimal",
    "det_exact",
    "dispersion",
    "enumerate_admissible",
    "inverse_exact",
    "inverse_via_complement",
    "is_admissible",
    "make_partition",
    "matmul",
    "parse_effect",
    "parse_run",
    "read_observations",
    "relative_efficiency",
    "set_backend",
    "sign_of",
    "simulate",
    "spectrum",
    "verify_det_identity",
    "__version__",
]
