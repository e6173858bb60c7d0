"""Configuration management using Pydantic settings."""

from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables (prefix ``UMT_``)."""

    model_config = SettingsConfigDict(
        env_prefix="UMT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Materialization guards
    cap: int = 1_000_000
    depth_cap: int = 3
    default_depth: int = 2
    isomorphism_limit: int = 8

    # Sampling
    seed: int = 0
    exhaustive_limit: int = 100_000
    formula_budget: int = 20_000
    sample_size: int = 2_000

    # Star map
    canonicalize: bool = True

    log_level: str = "WARNING"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


def resolve(value: Optional[int], field: str) -> int:
    """Return ``value`` or the configured default for ``field``."""
    if value is not None:
        return value
    return getattr(get_settings(), field)
