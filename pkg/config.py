"""
Readout Nonlinearity Configuration

Centralized process settings using Pydantic BaseSettings.
Values can be overridden via environment variables or a .env file.
Run-specific physics parameters live in INI run configs (see src/cli).
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Application Settings
    log_level: str = "INFO"

    # Fixed-point solver defaults for the steady-state photon number
    solver_damping: float = Field(default=0.5, gt=0.0, le=1.0)
    solver_max_iterations: int = Field(default=100_000, ge=1)
    solver_tolerance: float = Field(default=1e-10, gt=0.0)
    solver_max_halvings: int = Field(default=4, ge=0)
    solver_acceleration: bool = True

    # Sweep execution
    workers: int = Field(default=1, ge=1)
    output_format: Literal["csv", "json"] = "csv"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance.

    Returns:
        Settings instance (cached for performance).
    """
    return Settings()
