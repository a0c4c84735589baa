"""
Pydantic models for the tenfold toolkit
"""

from .band_models import (
    EigDecomposition,
    MomentumPoint,
    ModelParams,
    BlochModel,
    SampledBloch,
    grid_axis,
    involution_indices,
    reduce_momentum,
)
from .symmetry_models import (
    AZClass,
    AntiUnitaryOp,
    UnitaryOp,
    SymmetrySignature,
    AntiUnitaryCheck,
    SymmetryWitnesses,
    ClassificationResult,
)
from .ktheory_models import AbelianGroup, KIndex, ClassTablesEntry, TableRow
from .invariant_models import FlattenedBloch, ChiralBlock, RealityConstraint, InvariantValue
from .run_models import RunConfig, SweepRow

__all__ = [
    "EigDecomposition",
    "MomentumPoint",
    "ModelParams",
    "BlochModel",
    "SampledBloch",
    "grid_axis",
    "involution_indices",
    "reduce_momentum",
    "AZClass",
    "AntiUnitaryOp",
    "UnitaryOp",
    "SymmetrySignature",
    "AntiUnitaryCheck",
    "SymmetryWitnesses",
    "ClassificationResult",
    "AbelianGroup",
    "KIndex",
    "ClassTablesEntry",
    "TableRow",
    "FlattenedBloch",
    "ChiralBlock",
    "RealityConstraint",
    "InvariantValue",
    "RunConfig",
    "SweepRow",
]
