# numidx/settings.py
from __future__ import annotations

import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from numidx.geometry.operators import GOLDEN_ITERATIONS, REFINE_CANDIDATES, THETA_GRID
from numidx.index.brute import COARSE_THETA_GRID, DEFAULT_RESOLUTION, PATTERN_ROUNDS
from numidx.index.lp import CONDITION_GRID

# Load .env file if it exists (from project root or current directory)
load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


class EngineSettings(BaseModel):
    """
    Tunable defaults for the CLI.

    Library functions take these as explicit keyword arguments; only the CLI
    reads them from here. Command-line flags win over settings.
    """

    grid_resolution: int = Field(default=DEFAULT_RESOLUTION, ge=8)
    theta_grid: int = Field(default=THETA_GRID, ge=16)
    refine_candidates: int = Field(default=REFINE_CANDIDATES, ge=1)
    golden_iterations: int = Field(default=GOLDEN_ITERATIONS, ge=0)
    coarse_theta_grid: int = Field(default=COARSE_THETA_GRID, ge=16)
    pattern_rounds: int = Field(default=PATTERN_ROUNDS, ge=0)
    condition_grid: int = Field(default=CONDITION_GRID, ge=2)
    workers: int = Field(default=4, ge=1)
    log_level: str = Field(default="WARNING")

    @classmethod
    def default_from_env(cls) -> "EngineSettings":
        """
        Seed defaults from NIDX_* environment variables when present.
        Malformed integers fall back to the built-in defaults.
        """
        level = os.getenv("NIDX_LOG_LEVEL", "WARNING").strip().upper()
        if level not in LOG_LEVELS:
            level = "WARNING"

        return cls(
            grid_resolution=max(8, _env_int("NIDX_GRID", DEFAULT_RESOLUTION)),
            theta_grid=max(16, _env_int("NIDX_THETA_GRID", THETA_GRID)),
            coarse_theta_grid=max(16, _env_int("NIDX_COARSE_GRID", COARSE_THETA_GRID)),
            condition_grid=max(2, _env_int("NIDX_CONDITION_GRID", CONDITION_GRID)),
            workers=max(1, _env_int("NIDX_WORKERS", 4)),
            log_level=level,
        )


_settings: EngineSettings = EngineSettings.default_from_env()


def get_settings() -> EngineSettings:
    return _settings


def reload_settings() -> EngineSettings:
    """Rebuild the process-wide settings from the current environment."""
    global _settings
    _settings = EngineSettings.default_from_env()
    return _settings
