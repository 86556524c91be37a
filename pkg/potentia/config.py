"""
Potentia Configuration
"""
import os

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "potentia"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False

    # Log
    LOG_LEVEL: str = "INFO"

    # Run defaults (CLI flags override these per run)
    OUTPUT_DIR: str = "./output"
    SEED: int = 0
    THREADS: int = 0  # 0 means all available cores

    # Budgets
    ENUMERATION_BUDGET: int = 10_000_000
    LIFT_EXPONENT_BUDGET: int = 64

    # Root finding
    ROOT_TOL: float = 1e-10
    ROOT_MAX_ITER: int = 500

    # Quadrature / calibration
    QUAD_NODES: int = 64
    NEWTON_TOL: float = 1e-10
    NEWTON_MAX_ITER: int = 50

    # Fekete optimisation
    FEKETE_GRID: int = 2049
    FEKETE_RESTARTS: int = 2

    # Lift certification
    LEMNISCATE_SAMPLES: int = 512

    # Measure diagnostics
    REFERENCE_NODES: int = 512
    EXTERIOR_RING_POINTS: int = 64

    @property
    def WORKERS(self) -> int:
        if self.THREADS > 0:
            return self.THREADS
        return os.cpu_count() or 1

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
