"""
Experiment configuration.

An experiment is described by a flat key=value file (dotenv syntax). Every key
is also a CLI flag, and flags override the file.
"""

from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional

from dotenv import dotenv_values
from loguru import logger
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..utils.exceptions import InputReadError, InvalidConfigurationError, MissingConfigurationError


class ExperimentConfig(BaseSettings):
    """
    One sweep or scaling run.

    The seed has no default: every experiment names its randomness.
    """

    model_config = SettingsConfigDict(
        env_prefix="RPRF_",
        case_sensitive=False,
        extra="forbid"
    )

    n_values: List[int] = Field(
        default_factory=list,
        description="Domain sizes to run"
    )
    distinguisher: Literal["birthday", "bht"] = Field(
        default="birthday",
        description="Which distinguisher to run"
    )
    budgets: List[int] = Field(
        default_factory=list,
        description="Total query budgets; empty means one default budget per n"
    )
    k: Optional[int] = Field(
        default=None,
        ge=1,
        description="Table size of the bht distinguisher; default ceil(n**(1/3))"
    )
    trials: int = Field(
        default=200,
        ge=1,
        description="Trials per distribution per row"
    )
    seed: int = Field(
        ...,
        description="Master seed"
    )
    d: float = Field(
        default=0.6,
        gt=0.0,
        lt=1.0,
        description="Hybrid threshold exponent"
    )
    output: str = Field(
        default="",
        description="CSV output path; empty writes to stdout"
    )
    workers: int = Field(
        default=1,
        ge=1,
        description="Worker threads for trial fan-out"
    )

    @field_validator("n_values", "budgets", mode="before")
    @classmethod
    def split_int_list(cls, v: Any) -> Any:
        """Accept comma-separated strings for list fields."""
        if isinstance(v, str):
            return [int(part) for part in v.replace(" ", "").split(",") if part]
        if isinstance(v, int):
            return [v]
        return v

    @field_validator("n_values", "budgets")
    @classmethod
    def validate_positive(cls, v: List[int]) -> List[int]:
        """All sizes and budgets must be positive."""
        if any(item < 1 for item in v):
            raise ValueError(f"Values must be positive, got {v}")
        return v


def load_experiment_config(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None
) -> ExperimentConfig:
    """
    Build an ExperimentConfig from a key=value file plus flag overrides.

    Args:
        path: Config file, or None for flags only
        overrides: Flag values; None entries are ignored

    Returns:
        The validated config

    Raises:
        InputReadError: If the file is missing
        MissingConfigurationError: If a required key such as seed is absent
        InvalidConfigurationError: On unknown keys or invalid values
    """
    values: Dict[str, Any] = {}

    if path is not None:
        file_path = Path(path)
        if not file_path.is_file():
            raise InputReadError(str(path), "file not found")
        raw = dotenv_values(file_path)
        known = set(ExperimentConfig.model_fields)
        unknown = sorted(key for key in raw if key.lower() not in known)
        if unknown:
            raise InvalidConfigurationError(
                f"Unknown config keys in {path}: {unknown}",
                details={"path": str(path), "unknown": unknown}
            )
        values.update({key.lower(): value for key, value in raw.items() if value is not None})
        logger.debug(f"Loaded {len(values)} config keys from {path}")

    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    try:
        return ExperimentConfig(**values)
    except ValidationError as err:
        missing = [str(e["loc"][0]) for e in err.errors() if e["type"] == "missing"]
        if missing:
            raise MissingConfigurationError(
                f"Experiment config is missing {missing}",
                details={"missing": missing},
                original_exception=err
            )
        raise InvalidConfigurationError(
            "Experiment config validation failed",
            details={"errors": [
                f"{'.'.join(str(loc) for loc in e['loc'])}: {e['msg']}" for e in err.errors()
            ]},
            original_exception=err
        )
