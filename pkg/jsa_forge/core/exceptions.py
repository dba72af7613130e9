"""Exception hierarchy for jsa-forge.

Every error carries the CLI exit code it maps to: 2 for rejected input,
3 for numerical failures.
"""

from typing import Any, List, Optional


class JsaForgeError(Exception):
    """Base class for all jsa-forge errors."""

    exit_code = 1


class InputValidationError(JsaForgeError, ValueError):
    """Raised when inputs are outside the domain of an operation."""

    exit_code = 2


class NumericalError(JsaForgeError, ArithmeticError):
    """Raised when a computation fails or loses accuracy."""

    exit_code = 3


class DegenerateGroupVelocities(InputValidationError):
    """r and s coincide, so the JSA prefactor sqrt|r - s| vanishes."""


class InvalidSpectralFn(InputValidationError):
    """Spectral function parameters are invalid or not normalizable."""


class UndefinedAngle(InputValidationError):
    """Phase-matching angle requested for r = 0."""


class DomainError(InputValidationError):
    """A scalar argument is outside its mathematical domain."""


class MappingDomainError(InputValidationError):
    """The oscillator mapping needs r * s < 0."""


class DisplacementError(InputValidationError):
    """A ket has non-zero mean displacement."""


class ModelRangeError(InputValidationError):
    """A frequency falls outside a dispersion model's validity window."""


class ConfigurationError(InputValidationError):
    """Configuration or data file is invalid."""


class NumericalFailure(NumericalError):
    """Non-finite values or a failed decomposition."""


class TruncationError(NumericalError):
    """Fock truncation lost more weight than allowed."""


class DegenerateOptimum(NumericalError):
    """The closed-form optimal pump photon number is undefined."""


class OptimizationFailure(NumericalError):
    """No optimizer restart converged."""

    def __init__(self, message: str, trace: Optional[List[Any]] = None) -> None:
        super().__init__(message)
        self.trace = list(trace or [])


class TruncationWarning(UserWarning):
    """Fock truncation tail above the warning threshold."""
