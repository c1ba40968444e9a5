"""
Configuration management for the hierarchical scale-free graph toolkit.
Uses Pydantic for validation and environment variable loading.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from core.exceptions import ConfigurationError


class Settings(BaseSettings):
    """
    Toolkit settings with environment variable support.
    All settings can be overridden via environment variables or .env file.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Application Settings
    APP_NAME: str = "Hierarchical Scale-Free Graph Toolkit"
    APP_VERSION: str = "1.0.0"
    LOG_LEVEL: str = "INFO"
    LOG_TO_FILE: bool = Field(default=False, description="Also write logs to a dated file")
    LOG_DIR: str = Field(default="logs", description="Directory for log files")

    # Output
    OUTPUT_DIR: str = Field(default="output", description="Default directory for CLI artifacts")
    FLOAT_SIGNIFICANT_DIGITS: int = Field(default=12, ge=6, le=17, description="Digits for printed floats")

    # Construction
    MAX_VERTICES: int = Field(default=10_000_000, ge=1, description="Refuse to build larger instances")

    # Measurement
    EXACT_DIAMETER_MAX_VERTICES: int = Field(
        default=200_000, ge=1,
        description="Above this vertex count the diameter is lower-bounded from sampled sources"
    )
    DIAMETER_SAMPLE_SOURCES: int = Field(default=64, ge=1, description="Sources used in sampled mode")
    BFS_CHUNK_SIZE: int = Field(default=256, ge=1, le=65_536, description="BFS sources per batch")
    MEASURE_WORKERS: int = Field(default=1, ge=1, le=64, description="Threads for BFS batches")

    # Hitting-time solvers
    DENSE_SOLVE_MAX_VERTICES: int = Field(default=2000, ge=2, description="Dense LU solve up to this size")
    SPARSE_SOLVE_MAX_VERTICES: int = Field(default=5_000_000, ge=2, description="Sparse LU solve up to this size")
    ITERATIVE_TOLERANCE: float = Field(default=1e-12, gt=0.0, le=1e-3, description="Fixed-point error bound")
    ITERATIVE_MAX_SWEEPS: int = Field(default=1_000_000, ge=1, description="Fixed-point sweep limit")

    # Monte Carlo
    MC_TRUNCATION_THRESHOLD: float = Field(
        default=1e-6, ge=0.0, le=1.0,
        description="Largest tolerated fraction of walks cut off by max_steps"
    )
    MC_BATCH_SIZE: int = Field(default=20_000, ge=1, description="Walkers advanced together per batch")
    MC_WORKERS: int = Field(default=1, ge=1, le=64, description="Threads running walker batches")

    # Exact arithmetic
    ARITHMETIC_MODE: Literal["arbitrary", "checked128"] = Field(
        default="arbitrary",
        description="'checked128' raises when a rational leaves the signed 128-bit range"
    )

    # Sweeps
    SWEEP_WORKERS: int = Field(default=1, ge=1, le=64, description="Processes evaluating sweep cells")
    SWEEP_MEASURE_MAX_VERTICES: int = Field(
        default=200_000, ge=1,
        description="Sweep cells above this size report closed forms only"
    )


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.
    Uses lru_cache to ensure settings are loaded only once.
    """
    try:
        return Settings()
    except ValidationError as e:
        raise ConfigurationError(
            "Invalid toolkit settings",
            details={"errors": [f"{err['loc']}: {err['msg']}" for err in e.errors()]},
        ) from e
