"""
filename: config.py
description: Module for the project-wide settings, overridable through CONVEX_ROUNDER_*
    environment variables.
"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="CONVEX_ROUNDER_")

    # direction grids
    grid_n: int = 720
    grid_n_3d: int = 2048
    grid_seed: int = 0
    # geometric identity checks
    abs_tol: float = 1e-9
    rel_tol: float = 1e-3
    safety_factor: float = 1.0 + 1e-6
    recenter_fraction: float = 0.5
    # certificates
    strict_floor: float = 1e-9
    smooth_ceiling: float = 1e-3
    fd_step: float = 1e-4
    fd_order: int = 2
    n_pairs: int = 256
    n_points: int = 64
    n_probe_dirs: int = 8
    # rounding
    epsilon: float = 0.1
    reg_weight: float = 0.1
    round_tol: float = 1e-6
    max_iter: int = 200
    max_halvings: int = 40
    soft_power: float = 1024.0
    soft_doublings: int = 6
    soft_reg: float = 1e-6

    log_level: str = "INFO"


settings = Settings()
