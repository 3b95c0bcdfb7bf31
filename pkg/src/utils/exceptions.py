"""
Custom exception hierarchy for the query simulator.

Every error raised by the library derives from QuerySimError so the CLI can
map failures to exit codes in one place.
"""

from typing import Optional, Dict, Any


class QuerySimError(Exception):
    """Base exception for all simulator errors."""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        original_exception: Optional[Exception] = None
    ):
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.original_exception = original_exception

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for machine-readable reports."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "details": self.details
        }


# Configuration Exceptions
class ConfigurationError(QuerySimError):
    """Raised when there's a configuration issue."""
    pass


class MissingConfigurationError(ConfigurationError):
    """Raised when required configuration is missing."""
    pass


class InvalidConfigurationError(ConfigurationError):
    """Raised when configuration values are invalid."""
    pass


# Validation Exceptions
class ValidationError(QuerySimError):
    """Base exception for rejected inputs."""
    pass


class InvalidSizeError(ValidationError):
    """Raised when a domain size is not a positive integer."""

    def __init__(self, n: Any, **kwargs):
        super().__init__(f"Invalid domain size: {n}", details={"n": n}, **kwargs)
        self.n = n


class DomainIndexError(ValidationError):
    """Raised when a point lies outside [0, n)."""

    def __init__(self, x: Any, n: int, **kwargs):
        message = f"Index {x} outside domain [0, {n})"
        super().__init__(message, details={"x": x, "n": n}, **kwargs)
        self.x = x
        self.n = n


class InvalidFunctionTableError(ValidationError):
    """Raised when a function table violates its invariants."""
    pass


class NotABijectionError(ValidationError):
    """Raised when a table that must be a permutation is not one."""
    pass


class SizeMismatchError(ValidationError):
    """Raised when tables that must share a domain size do not."""

    def __init__(self, sizes: Dict[str, int], **kwargs):
        listing = ", ".join(f"{name}={size}" for name, size in sizes.items())
        super().__init__(f"Size mismatch: {listing}", details={"sizes": sizes}, **kwargs)
        self.sizes = sizes


class InvalidProfileError(ValidationError):
    """Raised when a collision profile violates its invariants."""
    pass


class InvalidParameterError(ValidationError):
    """Raised when a numeric parameter is out of range."""
    pass


class MalformedWitnessError(ValidationError):
    """Raised when a relation witness is structurally broken."""
    pass


# Reduction Exceptions
class ReductionError(QuerySimError):
    """Base exception for hybrid and relation constructions."""
    pass


class RelationPreconditionError(ReductionError):
    """Raised when a related pair cannot be built for the given input."""

    def __init__(self, invariant: str, message: str, **kwargs):
        details = kwargs.pop("details", {})
        details["invariant"] = invariant
        super().__init__(f"{invariant}: {message}", details=details, **kwargs)
        self.invariant = invariant


# Simulation Exceptions
class SimulationError(QuerySimError):
    """Base exception for statevector simulation failures."""
    pass


class NormViolationError(SimulationError):
    """Raised when a state drifts away from unit norm."""
    pass


# Experiment Exceptions
class ExperimentError(QuerySimError):
    """Base exception for harness failures."""
    pass


class OutputWriteError(ExperimentError):
    """Raised when a result file cannot be written."""

    def __init__(self, path: str, **kwargs):
        super().__init__(f"Cannot write output file: {path}", details={"path": path}, **kwargs)
        self.path = path


class InputReadError(ExperimentError):
    """Raised when an input file is missing or unparsable."""

    def __init__(self, path: str, reason: str, **kwargs):
        message = f"Cannot read {path}: {reason}"
        super().__init__(message, details={"path": path, "reason": reason}, **kwargs)
        self.path = path


class FitError(ExperimentError):
    """Raised when an exponent fit is degenerate."""
    pass
