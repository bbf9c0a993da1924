"""
Sparse VCH Control - Process Settings

Centralized process-level configuration using Pydantic Settings for
type-safe environment variable handling. Everything that describes an
experiment lives in the YAML run configuration instead (see run_config).
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Process settings loaded from environment variables.

    All settings can be overridden via environment variables.
    Example: VCH_LOG_LEVEL=DEBUG will set log_level to "DEBUG"
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="VCH_",
        case_sensitive=False,
        extra="ignore",
    )

    # =========================================================================
    # Application Settings
    # =========================================================================
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="INFO",
        description="Logging level"
    )

    # =========================================================================
    # Run Defaults
    # =========================================================================
    default_config_path: str = Field(
        default="config/default.yaml",
        description="Run configuration used when --config points to a directory"
    )
    output_dir: str = Field(
        default="runs",
        description="Base directory for run artifacts when --out is not given"
    )
    n_workers: int = Field(
        default=1,
        description="Worker threads for independent directional solves"
    )

    # =========================================================================
    # Export
    # =========================================================================
    csv_float_format: str = Field(
        default="%.17g",
        description="printf-style float format for CSV exports (round-trip exact)"
    )

    @model_validator(mode="after")
    def _validate_workers(self) -> "Settings":
        """Reject worker pools that cannot run anything."""
        if self.n_workers < 1:
            raise ValueError("n_workers must be at least 1")
        if "%" not in self.csv_float_format:
            raise ValueError("csv_float_format must be a printf-style format")
        return self


@lru_cache
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Uses LRU cache to avoid re-parsing environment on every call.
    """
    return Settings()


# Singleton settings instance for easy import
settings = get_settings()
