"""Configuration management using Pydantic Settings.

Process-level settings come from environment variables prefixed with
FRUIT_CENSUS_ (or a local .env file). Experiment parameters live in the
JSON run configuration, see ``fruit_census.models.run_config``.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="FRUIT_CENSUS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"

    # Parallel per-frame 3D detection (LangGraph max_concurrency)
    max_workers: int = Field(default=8, ge=1)

    # Default artifact root for run-all when --out is omitted
    output_dir: str = "runs"

    default_weight_model: Literal["paper", "fitted"] = "paper"


@lru_cache
def get_settings() -> Settings:
    """Get cached application settings.

    Uses lru_cache to ensure settings are only loaded once.

    Returns:
        Settings instance with values from environment.
    """
    return Settings()
