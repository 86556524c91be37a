"""
Run Configuration Model
"""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from potentia.config import settings


class Subcommand(str, Enum):
    CAPACITY = "capacity"
    FEKETE = "fekete"
    CHEBYSHEV = "chebyshev"
    JACOBI = "jacobi"
    CALIBRATE = "calibrate"
    LIFT = "lift"
    PIPELINE = "pipeline"
    SEARCH = "search"
    ENUMERATE = "enumerate"
    VOLUME = "volume"
    BERNSTEIN = "bernstein"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """Resolved parameters of one CLI run; flags override `settings`."""

    subcommand: Subcommand
    input_path: Optional[str] = None
    seed: int = Field(default_factory=lambda: settings.SEED)
    threads: int = Field(default_factory=lambda: settings.WORKERS, ge=1)
    output_dir: str = Field(default_factory=lambda: settings.OUTPUT_DIR)
    format: OutputFormat = OutputFormat.JSON
    require_certified: bool = False
