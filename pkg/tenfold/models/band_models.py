"""
Pydantic models for Bloch Hamiltonians and their momentum-grid samples
"""
import math
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_validator, model_validator

TWO_PI = 2.0 * math.pi


def reduce_momentum(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Map momenta into [-pi, pi)"""
    reduced = x - TWO_PI * np.floor((np.asarray(x) + math.pi) / TWO_PI)
    reduced = np.where(reduced >= math.pi, reduced - TWO_PI, reduced)
    if np.ndim(reduced) == 0:
        return float(reduced)
    return reduced


def grid_axis(n_points: int) -> np.ndarray:
    """k_n = -pi + 2 pi n / N, written so that k_{N-n} == -k_n bitwise"""
    n = np.arange(n_points)
    return np.pi * (2 * n - n_points) / n_points


def involution_indices(n_points: int) -> np.ndarray:
    """Index n' with k_{n'} = -k_n (mod 2 pi)"""
    return (-np.arange(n_points)) % n_points


class EigDecomposition(BaseModel):
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eigenvalues: np.ndarray = Field(..., description="Real eigenvalues in ascending order")
    eigenvectors: np.ndarray = Field(..., description="Unitary matrix whose columns are eigenvectors")


class MomentumPoint(BaseModel):
    """A point of the Brillouin torus"""
    model_config = ConfigDict(frozen=True)

    coords: Tuple[float, ...] = Field(..., min_length=1, max_length=3, description="Momenta in [-pi, pi)")

    @field_validator("coords", mode="before")
    @classmethod
    def reduce_coords(cls, value):
        return tuple(float(reduce_momentum(float(c))) for c in value)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


class ModelParams(BaseModel):
    """Real model parameters; unknown names are kept as extras for spec-file models"""
    model_config = ConfigDict(extra="allow", populate_by_name=True, frozen=True)

    mu: Optional[float] = Field(None, description="Chemical potential")
    t: Optional[float] = Field(None, description="Hopping amplitude")
    delta: Optional[float] = Field(
        None,
        validation_alias=AliasChoices("delta", "pd", "Delta"),
        description="Pairing amplitude",
    )
    m: Optional[float] = Field(None, description="Mass")
    dx2y2: Optional[float] = Field(None, description="d_{x^2-y^2} pairing amplitude")
    dxy: Optional[float] = Field(None, description="d_{xy} pairing amplitude")
    coupling: Optional[float] = Field(None, description="Spin-mixing coupling")
    asym: Optional[float] = Field(None, description="Particle-hole asymmetric band bending")

    @model_validator(mode="after")
    def check_finite(self) -> "ModelParams":
        for name, value in self.as_dict().items():
            if not math.isfinite(value):
                raise ValueError(f"Parameter {name} must be finite, got {value}")
        return self

    def as_dict(self) -> Dict[str, float]:
        values = {k: v for k, v in self.model_dump().items() if v is not None}
        return {k: float(v) for k, v in values.items()}


Hamiltonian = Callable[[np.ndarray], np.ndarray]


class BlochModel(BaseModel):
    """
    Bloch Hamiltonian on the d-torus.

    ``hamiltonian`` maps momenta shaped ``(..., dim)`` to matrices shaped
    ``(..., bands, bands)``; it must be pure.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str = Field(..., description="Model identifier")
    dim: int = Field(..., ge=1, le=3, description="Spatial dimension")
    bands: int = Field(..., ge=1, le=16, description="Matrix size")
    params: Dict[str, float] = Field(default_factory=dict, description="Named real parameters")
    hamiltonian: Hamiltonian = Field(..., description="Vectorised momentum -> matrix map")

    def evaluate_many(self, ks: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        if ks.shape[-1] != self.dim:
            raise ValueError(f"{self.name} expects {self.dim} momentum components, got {ks.shape[-1]}")
        return np.asarray(self.hamiltonian(ks), dtype=complex)

    def evaluate(self, k: Union[MomentumPoint, Sequence[float], float]) -> np.ndarray:
        if isinstance(k, MomentumPoint):
            point = k
        elif np.ndim(k) == 0:
            point = MomentumPoint(coords=(float(k),))
        else:
            point = MomentumPoint(coords=tuple(k))
        return self.evaluate_many(point.as_array()[None, :])[0]


class SampledBloch(BaseModel):
    """A Bloch model evaluated on the uniform even grid, with its spectrum"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    model: BlochModel
    grid_size: int = Field(..., ge=4, description="Grid points per axis (even)")
    values: np.ndarray = Field(..., description="H(k) with shape (N,)*dim + (bands, bands)")
    eigenvalues: np.ndarray = Field(..., description="Ascending spectrum at every grid point")
    eigenvectors: np.ndarray = Field(..., description="Eigenvector columns at every grid point")
    min_gap: float = Field(..., ge=0, description="Smallest |eigenvalue| over the grid")

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def bands(self) -> int:
        return self.model.bands

    def axis(self) -> np.ndarray:
        return grid_axis(self.grid_size)

    def momenta(self) -> np.ndarray:
        axes = [self.axis()] * self.dim
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def negated_values(self) -> np.ndarray:
        """H(-k) laid out on the same grid"""
        inv = involution_indices(self.grid_size)
        out = self.values
        for ax in range(self.dim):
            out = np.take(out, inv, axis=ax)
        return out

    def trim_indices(self) -> List[Tuple[int, ...]]:
        """Grid indices of the time-reversal-invariant momenta (k_j in {0, -pi})"""
        half = self.grid_size // 2
        return [tuple(idx) for idx in product((half, 0), repeat=self.dim)]

    def is_gapless(self, threshold: float) -> bool:
        return self.min_gap < threshold
