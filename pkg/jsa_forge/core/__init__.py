"""Core Infrastructure Package.

This package contains the fundamental infrastructure modules for jsa-forge:

- config: Configuration constants and settings
- exceptions: Error hierarchy and exit codes
- models: Immutable value types
- utils: Logging, error translation and serialization helpers
"""

# Export commonly used items for easier importing
from .config import (
    DEFAULT_TRUNCATION,
    FOCK_BUFFER,
    LOG_LEVEL,
    OUTPUT_DIR,
    PROJECT_ROOT,
    TOLERANCES,
    VERSION,
    ErrorMessages,
    get_config,
    get_max_threads,
)
from .exceptions import (
    ConfigurationError,
    DegenerateGroupVelocities,
    DegenerateOptimum,
    DisplacementError,
    DomainError,
    InputValidationError,
    InvalidSpectralFn,
    JsaForgeError,
    MappingDomainError,
    ModelRangeError,
    NumericalError,
    NumericalFailure,
    OptimizationFailure,
    TruncationError,
    TruncationWarning,
    UndefinedAngle,
)
from .models import (
    BeamSplitterMap,
    CorrelationMatrix,
    DispersionModel,
    FockKet,
    Grid1D,
    IndexModel,
    JointAmplitude,
    MismatchParameters,
    Moments,
    OptimalPump,
    OptimizationResult,
    OptimizerConfig,
    ProcessGeometry,
    RestartRecord,
    RunConfig,
    SchmidtModes,
    SchmidtResult,
    SpectralFn,
    SpectralKind,
    SqueezedFit,
    SweepRow,
    TwoModeFockState,
)
from .utils import (
    ensure_directory_exists,
    exit_code_for,
    get_logger,
    handle_numerical_errors,
    load_joint_amplitude,
    load_json_file,
    parse_theta,
    save_csv_rows,
    save_joint_amplitude_binary,
    save_joint_amplitude_csv,
    save_json_file,
    setup_logging,
)

__all__ = [
    # Config exports
    "VERSION",
    "LOG_LEVEL",
    "OUTPUT_DIR",
    "PROJECT_ROOT",
    "DEFAULT_TRUNCATION",
    "FOCK_BUFFER",
    "TOLERANCES",
    "ErrorMessages",
    "get_config",
    "get_max_threads",
    # Exception exports
    "JsaForgeError",
    "InputValidationError",
    "NumericalError",
    "DegenerateGroupVelocities",
    "InvalidSpectralFn",
    "UndefinedAngle",
    "DomainError",
    "MappingDomainError",
    "DisplacementError",
    "ModelRangeError",
    "ConfigurationError",
    "NumericalFailure",
    "TruncationError",
    "DegenerateOptimum",
    "OptimizationFailure",
    "TruncationWarning",
    # Model exports
    "Grid1D",
    "SpectralKind",
    "SpectralFn",
    "JointAmplitude",
    "SchmidtResult",
    "SchmidtModes",
    "CorrelationMatrix",
    "FockKet",
    "BeamSplitterMap",
    "TwoModeFockState",
    "Moments",
    "OptimalPump",
    "SqueezedFit",
    "OptimizerConfig",
    "RestartRecord",
    "OptimizationResult",
    "IndexModel",
    "DispersionModel",
    "ProcessGeometry",
    "MismatchParameters",
    "SweepRow",
    "RunConfig",
    # Utils exports
    "get_logger",
    "setup_logging",
    "handle_numerical_errors",
    "exit_code_for",
    "parse_theta",
    "ensure_directory_exists",
    "save_json_file",
    "load_json_file",
    "save_csv_rows",
    "save_joint_amplitude_csv",
    "save_joint_amplitude_binary",
    "load_joint_amplitude",
]
