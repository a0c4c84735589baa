"""
Pydantic models for command-line runs and parameter sweeps
"""
import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .symmetry_models import AZClass

RANGE_EPS = 1e-9


class RunConfig(BaseModel):
    """Validated command-line invocation"""
    command: Literal["table", "kr", "classify", "invariant", "sweep"] = Field(..., description="Subcommand")
    model_name: Optional[str] = Field(None, description="Built-in model identifier")
    spec_path: Optional[str] = Field(None, description="Model spec file")
    params: Dict[str, float] = Field(default_factory=dict, description="Parameter overrides from --set")
    grid_size: int = Field(32, ge=4, description="Grid points per axis")
    output_format: Literal["text", "json", "csv"] = Field("text", description="Output format")
    tol: float = Field(1e-9, gt=0, description="Symmetry tolerance")
    fermi: float = Field(0.0, description="Fermi level")
    az_class: Optional[AZClass] = Field(None, description="Requested symmetry class")

    # kr
    space: Literal["sphere", "torus"] = Field("sphere", description="Base space of the KR group")
    degree: int = Field(0, description="i in KR^{-i}")
    dimension: int = Field(1, ge=1, description="d of the sphere or torus")
    reduced: bool = Field(False, description="Reduced group")
    quaternionic: bool = Field(False, description="Report KQ instead of KR")

    # sweep
    axis: Optional[str] = Field(None, description="Swept parameter")
    range_start: Optional[float] = None
    range_stop: Optional[float] = None
    range_step: Optional[float] = None
    out_path: Optional[str] = Field(None, description="CSV destination; stdout when absent")
    workers: int = Field(4, ge=1, description="Sweep worker threads")

    verbose: bool = False

    @model_validator(mode="after")
    def check_consistency(self) -> "RunConfig":
        if self.grid_size % 2:
            raise ValueError(f"Grid size must be even, got {self.grid_size}")
        if self.command in ("classify", "invariant", "sweep") and not (self.model_name or self.spec_path):
            raise ValueError(f"{self.command} needs --model or --spec")
        if self.command == "sweep":
            if self.axis is None or self.range_step is None:
                raise ValueError("sweep needs --axis and --range")
            if not self.range_step > 0:
                raise ValueError(f"Sweep step must be positive, got {self.range_step}")
            if self.range_stop < self.range_start:
                raise ValueError("Sweep range stop lies below start")
        return self

    def sweep_values(self) -> List[float]:
        """floor((stop - start) / step) + 1 evenly spaced values"""
        count = math.floor((self.range_stop - self.range_start) / self.range_step + RANGE_EPS) + 1
        return [round(self.range_start + j * self.range_step, 12) for j in range(count)]


class SweepRow(BaseModel):
    """One CSV row of a parameter sweep"""
    param: float
    kind: Literal["Integer", "Mod2", "Trivial", "gapless", "nonconvergent", "ambiguous", "error"]
    value: Optional[int] = None
    raw: Optional[float] = None
    residual: Optional[float] = None
    gap: float
