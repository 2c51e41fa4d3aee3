"""
Configuration Management

Pydantic Settings-based runtime configuration with environment variable
validation. Experiment parameters live in the typed models of each module
(ScenarioConfig, SolverConfig, PsoParams, ExperimentSpec); this module only
carries process-level knobs.
"""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Runtime settings loaded from environment variables.

    Variables use the ``MA_MAXMIN_`` prefix and may also come from a
    ``.env`` file in the working directory.
    """

    model_config = SettingsConfigDict(
        env_prefix="MA_MAXMIN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    environment: Literal["development", "production", "test"] = Field(
        default="development", description="Runtime environment"
    )
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO", description="Logging level"
    )
    log_format: Literal["console", "json"] = Field(
        default="console", description="Log renderer (json is forced in production)"
    )

    # Execution
    workers: int | None = Field(
        default=None,
        ge=1,
        description="Worker processes for trials when --workers is not given",
    )

    # Observability
    metrics_textfile: Path | None = Field(
        default=None,
        description="Write Prometheus metrics to this text file at CLI exit",
    )


# Global settings instance
settings = Settings()
