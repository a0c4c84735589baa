"""
Runtime settings loaded from the environment (and an optional .env file)
"""
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Numerical defaults and logging configuration"""
    grid_size: int = Field(32, ge=4, description="Default k-grid points per axis")
    symmetry_tol: float = Field(1e-9, gt=0, description="Relative Frobenius tolerance of symmetry checks")
    gap_threshold: float = Field(1e-6, gt=0, description="Spectral gap below which a model counts as gapless")
    residual_threshold: float = Field(0.05, gt=0, lt=0.5, description="Largest accepted distance to the rounded invariant")
    sweep_workers: int = Field(4, ge=1, description="Worker threads used by parameter sweeps")
    log_level: str = Field("WARNING", description="stderr log level")
    log_file: Optional[str] = Field(None, description="Optional rotated log file")

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from TENFOLD_* environment variables"""
        load_dotenv()
        return cls(
            grid_size=int(os.getenv("TENFOLD_GRID", "32")),
            symmetry_tol=float(os.getenv("TENFOLD_SYMMETRY_TOL", "1e-9")),
            gap_threshold=float(os.getenv("TENFOLD_GAP_THRESHOLD", "1e-6")),
            residual_threshold=float(os.getenv("TENFOLD_RESIDUAL_THRESHOLD", "0.05")),
            sweep_workers=int(os.getenv("TENFOLD_SWEEP_WORKERS", "4")),
            log_level=os.getenv("TENFOLD_LOG_LEVEL", "WARNING").upper(),
            log_file=os.getenv("TENFOLD_LOG_FILE") or None,
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()
