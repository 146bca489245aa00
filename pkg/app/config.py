"""
Spike Forecaster - Configuration Module

Process-level settings loaded from environment variables with Pydantic
settings. Run-level parameters live in the JSON RunConfig document
(see app.schemas).
"""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application configuration loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="SPIKE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"
    log_json: bool = False

    # Execution
    jobs: int = 1
    seed: int = 0

    # Output
    out_dir: str = "runs"

    # Config file picked up when --config is not given
    config_path: str | None = None


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
