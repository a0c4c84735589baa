"""
Numerical and symbolic services for the tenfold toolkit
"""

from .numkit import det, eig_hermitian, eig_hermitian_batch, pauli_string, pfaffian, unitary_distance
from .model_zoo import ZOO, default_candidates, make_model, min_gap, sample_grid
from .spec_file import ModelSpec, load_spec_file
from .symmetry_service import az_class_of, check_antiunitary, check_chiral, classify
from .ktable_service import (
    class_metadata,
    class_number,
    ko_point,
    kq_shift,
    kr_sphere,
    kr_torus,
    periodic_table_entry,
    verify_tables,
)
from .flattening import chiral_block, flatten
from .sweep_service import SweepOrchestrator

__all__ = [
    "det",
    "eig_hermitian",
    "eig_hermitian_batch",
    "pauli_string",
    "pfaffian",
    "unitary_distance",
    "ZOO",
    "default_candidates",
    "make_model",
    "min_gap",
    "sample_grid",
    "ModelSpec",
    "load_spec_file",
    "az_class_of",
    "check_antiunitary",
    "check_chiral",
    "classify",
    "class_metadata",
    "class_number",
    "ko_point",
    "kq_shift",
    "kr_sphere",
    "kr_torus",
    "periodic_table_entry",
    "verify_tables",
    "chiral_block",
    "flatten",
    "SweepOrchestrator",
]
