"""
Process-wide settings for rprf-sim.

Logging sinks and the trial thread pool, read from the environment or a local
.env file.
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .. import __version__

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """
    Runtime settings shared by the CLI and the library.

    Override any field with an environment variable of the same name.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    app_name: str = Field(
        default="rprf-sim",
        description="Program name shown by --version"
    )
    app_version: str = Field(
        default=__version__,
        description="Release shown by --version"
    )

    # Logging; results never go through the logger
    log_level: str = Field(
        default="WARNING",
        description=f"Minimum level of the stderr sink: {', '.join(LOG_LEVELS)}"
    )
    log_file: str = Field(
        default="",
        description="Optional log file; empty means stderr only"
    )
    log_rotation: str = Field(
        default="10 MB",
        description="Size at which the log file rotates"
    )
    log_retention: str = Field(
        default="30 days",
        description="How long rotated log files are kept"
    )
    log_format: str = Field(
        default="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        description="loguru format string of every sink"
    )

    # Trial fan-out
    max_workers: int = Field(
        default=1,
        ge=1,
        description="Threads that run independent trials; 1 runs them inline"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Upper-case the level and reject unknown names."""
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {LOG_LEVELS}, got {v!r}")
        return level


settings = Settings()
