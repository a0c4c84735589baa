"""
Pydantic models for flattened Hamiltonians and topological invariants
"""
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .band_models import BlochModel, SampledBloch
from .symmetry_models import AntiUnitaryOp


class FlattenedBloch(BaseModel):
    """Q(k) = 1 - 2 P(k) on the grid, with the occupied eigenvector frames"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source: SampledBloch
    fermi: float = Field(0.0, description="Fermi level used for the flattening")
    Q: np.ndarray = Field(..., description="Flattened Hamiltonian with shape (N,)*dim + (bands, bands)")
    frames: np.ndarray = Field(..., description="Occupied eigenvectors with shape (N,)*dim + (bands, n_occ)")
    n_occ: int = Field(..., ge=0, description="Occupied bands (constant over the grid)")

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def grid_size(self) -> int:
        return self.source.grid_size

    @property
    def bands(self) -> int:
        return self.source.bands

    def projector(self) -> np.ndarray:
        """Occupied projector p = (I - Q) / 2"""
        return 0.5 * (np.eye(self.bands) - self.Q)

    def as_model(self) -> BlochModel:
        """The flattening sign(H(k) - fermi) as a Bloch model evaluable anywhere"""
        from ..services.numkit import dagger, eig_hermitian_batch

        source_model = self.source.model
        fermi = self.fermi

        def flat_hamiltonian(ks: np.ndarray) -> np.ndarray:
            values, vectors = eig_hermitian_batch(source_model.evaluate_many(ks))
            signs = np.sign(values - fermi)
            return (vectors * signs[..., None, :]) @ dagger(vectors)

        return BlochModel(
            name=f"flat({source_model.name})",
            dim=source_model.dim,
            bands=source_model.bands,
            params=dict(source_model.params),
            hamiltonian=flat_hamiltonian,
        )

    def as_sampled(self) -> SampledBloch:
        from ..services.model_zoo import sample_grid

        return sample_grid(self.as_model(), self.grid_size)


class ChiralBlock(BaseModel):
    """Unitary off-diagonal block q(k) of a chirally symmetric flat Hamiltonian"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    blocks: np.ndarray = Field(..., description="q(k) with shape (N,)*dim + (m, m)")
    dim: int = Field(..., ge=1, le=3)

    @property
    def grid_size(self) -> int:
        return self.blocks.shape[0]

    @property
    def size(self) -> int:
        return self.blocks.shape[-1]

    def direct_sum(self, other: "ChiralBlock") -> "ChiralBlock":
        if other.dim != self.dim or other.grid_size != self.grid_size:
            raise ValueError("Direct sum needs blocks on the same grid")
        m, n = self.size, other.size
        out = np.zeros(self.blocks.shape[:-2] + (m + n, m + n), dtype=complex)
        out[..., :m, :m] = self.blocks
        out[..., m:, m:] = other.blocks
        return ChiralBlock(blocks=out, dim=self.dim)


class RealityConstraint(BaseModel):
    """Evidence that an antiunitary symmetry constrains the transition function"""
    model_config = ConfigDict(frozen=True)

    kind: Literal["TRS", "PHS"]
    sign: int = Field(..., description="Square of the witnessing operator")
    witness: str = Field(..., description="Label of the witnessing operator")

    @classmethod
    def from_witness(cls, op: Optional[AntiUnitaryOp]) -> Optional["RealityConstraint"]:
        if op is None:
            return None
        return cls(kind=op.kind, sign=op.sign, witness=op.label())


class InvariantValue(BaseModel):
    """Rounded topological invariant together with its numerical provenance"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    kind: Literal["Integer", "Mod2", "Trivial"] = Field(..., description="Invariant type")
    value: int = Field(..., description="Rounded value")
    raw: float = Field(..., description="Pre-rounding numeric value")
    grid_size: int = Field(..., alias="grid", description="Grid points per axis")
    residual: float = Field(..., ge=0, description="|raw - rounded|")
