"""Configuration for the infinity analysis toolkit."""

import math

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8")

    app_name: str = "PWL Infinity"
    app_version: str = "0.1.0"
    log_level: str = "INFO"

    # Series recurrence
    series_max_order: int = 32

    # Classification of the orbit at infinity
    classification_tolerance: float = 1e-11
    ambiguity_factor: float = 10.0

    # Exact flows and half-return maps
    crossing_tolerance: float = 1e-15
    crossing_bracket_samples: int = 96
    trace_max_time: float = 20 * math.pi

    # Limit cycle scan
    cycle_u0_max: float = 0.01
    cycle_grid: int = 400
    cycle_scan_floor: float = 1e-6
    root_tolerance: float = 1e-13  # relative to u0
    root_dedup_relative: float = 1e-9
    slope_tolerance: float = 1e-14
    annulus_tolerance: float = 1e-10

    # Unfolding and Jacobians
    newton_max_iterations: int = 50
    unfold_locality_radius: float = 0.5
    unfold_tolerance: float = 1e-13
    jacobian_agreement: float = 1e-5

    # Reports
    output_digits: int = 17


settings = Settings()
