"""Utility modules for the query simulator."""

from .exceptions import (
    QuerySimError,
    ConfigurationError,
    MissingConfigurationError,
    InvalidConfigurationError,
    ValidationError,
    InvalidSizeError,
    DomainIndexError,
    InvalidFunctionTableError,
    NotABijectionError,
    SizeMismatchError,
    InvalidProfileError,
    InvalidParameterError,
    MalformedWitnessError,
    ReductionError,
    RelationPreconditionError,
    SimulationError,
    NormViolationError,
    ExperimentError,
    OutputWriteError,
    InputReadError,
    FitError,
)

from .validators import (
    TableValidator,
    ProfileValidator,
    ParameterValidator,
)

from .helpers import (
    stream_key,
    derive_seed_sequence,
    trial_rng,
    make_rng,
    child_seed,
    ceil_root,
    goodness_threshold,
    format_float,
    two_proportion_halfwidth,
    pairs_to_arrays,
)

__all__ = [
    # Exceptions
    "QuerySimError",
    "ConfigurationError",
    "MissingConfigurationError",
    "InvalidConfigurationError",
    "ValidationError",
    "InvalidSizeError",
    "DomainIndexError",
    "InvalidFunctionTableError",
    "NotABijectionError",
    "SizeMismatchError",
    "InvalidProfileError",
    "InvalidParameterError",
    "MalformedWitnessError",
    "ReductionError",
    "RelationPreconditionError",
    "SimulationError",
    "NormViolationError",
    "ExperimentError",
    "OutputWriteError",
    "InputReadError",
    "FitError",
    # Validators
    "TableValidator",
    "ProfileValidator",
    "ParameterValidator",
    # Helpers
    "stream_key",
    "derive_seed_sequence",
    "trial_rng",
    "make_rng",
    "child_seed",
    "ceil_root",
    "goodness_threshold",
    "format_float",
    "two_proportion_halfwidth",
    "pairs_to_arrays",
]
