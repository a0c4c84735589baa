"""
Model zoo: the lattice Bloch Hamiltonians and uniform grid sampling
"""
from typing import Callable, Dict, Iterable, List, Literal, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import GridTooSmallError, MissingParamError, NotEvenError, UnknownModelError
from ..models.band_models import BlochModel, ModelParams, SampledBloch, grid_axis
from ..models.symmetry_models import AntiUnitaryOp, UnitaryOp
from .numkit import block_diag, eig_hermitian_batch, pauli_string

TAU_X = pauli_string("x")
TAU_Y = pauli_string("y")
TAU_Z = pauli_string("z")


def combine(terms: Iterable[Tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    """Sum of coefficient grids times constant matrices"""
    total = None
    for coeff, matrix in terms:
        contribution = np.asarray(coeff, dtype=complex)[..., None, None] * matrix
        total = contribution if total is None else total + contribution
    return total


def kitaev_chain(p: Mapping[str, float]) -> Callable[[np.ndarray], np.ndarray]:
    mu, t, delta = p["mu"], p["t"], p["delta"]

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        k = ks[..., 0]
        return combine([(-mu - t * np.cos(k), TAU_Z), (delta * np.sin(k), TAU_Y)])

    return hamiltonian


def chiral_p_wave(p: Mapping[str, float]) -> Callable[[np.ndarray], np.ndarray]:
    mu, t, delta = p["mu"], p["t"], p["delta"]

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        kx, ky = ks[..., 0], ks[..., 1]
        eps = -mu - 2.0 * t * (np.cos(kx) + np.cos(ky))
        return combine([(delta * np.sin(kx), TAU_X), (delta * np.sin(ky), TAU_Y), (eps, TAU_Z)])

    return hamiltonian


def d_id_wave(p: Mapping[str, float]) -> Callable[[np.ndarray], np.ndarray]:
    mu, t, dx2y2, dxy = p["mu"], p["t"], p["dx2y2"], p["dxy"]

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        kx, ky = ks[..., 0], ks[..., 1]
        eps = -mu - 2.0 * t * (np.cos(kx) + np.cos(ky))
        return combine([
            (dx2y2 * (np.cos(kx) - np.cos(ky)), TAU_X),
            (dxy * np.sin(kx) * np.sin(ky), TAU_Y),
            (eps, TAU_Z),
        ])

    return hamiltonian


def diii_superposition(p: Mapping[str, float]) -> Callable[[np.ndarray], np.ndarray]:
    """
    Spin-up and spin-down chiral p-wave condensates of opposite chirality.
    Basis (particle up, particle down, hole up, hole down).
    """
    mu, t, delta = p["mu"], p["t"], p["delta"]
    zz = pauli_string("z*0")
    xz = pauli_string("x*z")
    y0 = pauli_string("y*0")

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        kx, ky = ks[..., 0], ks[..., 1]
        eps = -mu - 2.0 * t * (np.cos(kx) + np.cos(ky))
        return combine([(eps, zz), (delta * np.sin(kx), xz), (-delta * np.sin(ky), y0)])

    return hamiltonian


def bhz_qsh(p: Mapping[str, float]) -> Callable[[np.ndarray], np.ndarray]:
    """
    Two time-reversed Chern blocks (spin (x) orbital). ``coupling`` mixes the
    spins without breaking time reversal; ``asym`` bends both bands and removes
    the accidental particle-hole symmetry of the bare model.
    """
    m, coupling, asym = p["m"], p["coupling"], p["asym"]
    zx = pauli_string("z*x")
    oy = pauli_string("0*y")
    oz = pauli_string("0*z")
    yy = pauli_string("y*y")
    oo = pauli_string("0*0")

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        kx, ky = ks[..., 0], ks[..., 1]
        bend = 2.0 - np.cos(kx) - np.cos(ky)
        return combine([
            (np.sin(kx), zx),
            (np.sin(ky), oy),
            (bend - m, oz),
            (coupling * np.ones_like(kx), yy),
            (-asym * bend, oo),
        ])

    return hamiltonian


def dirac_3d_chiral(p: Mapping[str, float]) -> Callable[[np.ndarray], np.ndarray]:
    """Chiral Dirac lattice model, S = tau_z (x) 1"""
    m = p["m"]
    xx = pauli_string("x*x")
    xy = pauli_string("x*y")
    xz = pauli_string("x*z")
    y0 = pauli_string("y*0")

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        kx, ky, kz = ks[..., 0], ks[..., 1], ks[..., 2]
        mass = m - np.cos(kx) - np.cos(ky) - np.cos(kz)
        return combine([(np.sin(kx), xx), (np.sin(ky), xy), (np.sin(kz), xz), (mass, y0)])

    return hamiltonian


class ZooEntry(BaseModel):
    """Registry record of a built-in model"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    dim: int
    bands: int
    required: Tuple[str, ...]
    defaults: Dict[str, float] = Field(default_factory=dict)
    builder: Callable[[Mapping[str, float]], Callable[[np.ndarray], np.ndarray]]
    harness: bool = Field(False, description="Test-bed model added for numerical checks")
    witnesses: Tuple[Tuple[Literal["TRS", "PHS", "CS"], str], ...] = Field(
        (), description="(kind, Pauli string) operators used instead of the built-in candidate sweep"
    )
    description: str = ""


ZOO: Dict[str, ZooEntry] = {
    entry.name: entry
    for entry in [
        ZooEntry(name="kitaev_chain", dim=1, bands=2, required=("mu", "t", "delta"), builder=kitaev_chain,
                 description="Kitaev Majorana chain"),
        ZooEntry(name="chiral_p_wave", dim=2, bands=2, required=("mu", "t", "delta"), builder=chiral_p_wave,
                 description="Spinless chiral p-wave superconductor"),
        ZooEntry(name="d_id_wave", dim=2, bands=2, required=("mu", "t", "dx2y2", "dxy"), builder=d_id_wave,
                 description="Spin-singlet d+id superconductor"),
        ZooEntry(name="diii_superposition", dim=2, bands=4, required=("mu", "t", "delta"),
                 builder=diii_superposition, witnesses=(("TRS", "0*y"), ("PHS", "x*0")),
                 description="Opposite-chirality p-wave pair"),
        ZooEntry(name="bhz_qsh", dim=2, bands=4, required=("m",), defaults={"coupling": 0.1, "asym": 0.05},
                 builder=bhz_qsh, harness=True, description="Quantum spin Hall lattice model"),
        ZooEntry(name="dirac_3d_chiral", dim=3, bands=4, required=("m",), builder=dirac_3d_chiral,
                 harness=True, description="3d chiral Dirac lattice model"),
    ]
}


def available_models() -> List[str]:
    return sorted(ZOO)


def default_candidates(name: str) -> List[Union[AntiUnitaryOp, UnitaryOp]]:
    """Symmetry operators registered for a zoo model; empty means use the Pauli sweep"""
    entry = ZOO.get(name)
    if entry is None:
        raise UnknownModelError(f"Unknown model {name!r}; available: {', '.join(available_models())}")
    candidates: List[Union[AntiUnitaryOp, UnitaryOp]] = []
    for kind, label in entry.witnesses:
        matrix = pauli_string(label)
        if kind == "CS":
            candidates.append(UnitaryOp(S=matrix, name=f"pauli:{label}"))
        else:
            candidates.append(AntiUnitaryOp(U=matrix, kind=kind, name=f"pauli:{label}"))
    return candidates


def make_model(name: str, params: Union[ModelParams, Mapping[str, float], None] = None) -> BlochModel:
    """Build a zoo model; raises UnknownModelError / MissingParamError"""
    entry = ZOO.get(name)
    if entry is None:
        raise UnknownModelError(f"Unknown model {name!r}; available: {', '.join(available_models())}")
    if params is None:
        params = ModelParams()
    elif not isinstance(params, ModelParams):
        params = ModelParams(**params)

    values = {**entry.defaults, **params.as_dict()}
    missing = [key for key in entry.required if key not in values]
    if missing:
        raise MissingParamError(f"Model {name} needs parameter(s): {', '.join(missing)}")

    logger.debug(f"[ModelZoo] Building {name} with {values}")
    return BlochModel(
        name=name,
        dim=entry.dim,
        bands=entry.bands,
        params=values,
        hamiltonian=entry.builder(values),
    )


def sample_grid(model: BlochModel, grid_size: int) -> SampledBloch:
    """Evaluate the model on the N^d grid k_n = -pi + 2 pi n / N and diagonalise every point"""
    if grid_size < 4:
        raise GridTooSmallError(f"Grid size {grid_size} is below the minimum of 4")
    if grid_size % 2:
        raise NotEvenError(f"Grid size {grid_size} must be even")

    axes = [grid_axis(grid_size)] * model.dim
    ks = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    values = model.evaluate_many(ks)
    expected = (grid_size,) * model.dim + (model.bands, model.bands)
    if values.shape != expected:
        raise ValueError(f"{model.name} returned shape {values.shape}, expected {expected}")

    eigenvalues, eigenvectors = eig_hermitian_batch(values)
    gap = float(np.min(np.abs(eigenvalues)))
    logger.debug(f"[ModelZoo] Sampled {model.name} on {grid_size}^{model.dim} grid, min_gap={gap:.6g}")
    return SampledBloch(
        model=model,
        grid_size=grid_size,
        values=values,
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        min_gap=gap,
    )


def min_gap(sampled: SampledBloch) -> float:
    return sampled.min_gap


def direct_sum(first: BlochModel, second: BlochModel) -> BlochModel:
    """H_1(k) (+) H_2(k)"""
    if first.dim != second.dim:
        raise ValueError("Direct sum needs models of the same dimension")

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        return block_diag([first.evaluate_many(ks), second.evaluate_many(ks)])

    return BlochModel(
        name=f"{first.name}+{second.name}",
        dim=first.dim,
        bands=first.bands + second.bands,
        params={**{f"a.{k}": v for k, v in first.params.items()}, **{f"b.{k}": v for k, v in second.params.items()}},
        hamiltonian=hamiltonian,
    )


def conjugate_model(model: BlochModel) -> BlochModel:
    """H(k) -> conj(H(k))"""

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        return np.conj(model.evaluate_many(ks))

    return model.model_copy(update={"name": f"conj({model.name})", "hamiltonian": hamiltonian})


def reflect_model(model: BlochModel, axis: int = 0) -> BlochModel:
    """H(k) -> H(k') with k'_axis = -k_axis"""
    if not 0 <= axis < model.dim:
        raise ValueError(f"Axis {axis} out of range for a {model.dim}d model")

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        flipped = np.array(ks, dtype=float, copy=True)
        flipped[..., axis] = -flipped[..., axis]
        return model.evaluate_many(flipped)

    return model.model_copy(update={"name": f"reflect{axis}({model.name})", "hamiltonian": hamiltonian})


def block_model(model: BlochModel, indices: Sequence[int]) -> BlochModel:
    """Restrict H(k) to the rows and columns in ``indices``"""
    idx = np.asarray(indices, dtype=int)

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        values = model.evaluate_many(ks)
        return values[..., idx[:, None], idx[None, :]]

    return model.model_copy(update={"name": f"block({model.name})", "bands": len(idx), "hamiltonian": hamiltonian})


def unitary_rotation(model: BlochModel, U: np.ndarray, name: Optional[str] = None) -> BlochModel:
    """H(k) -> U H(k) U^dagger"""
    U = np.asarray(U, dtype=complex)

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        return U @ model.evaluate_many(ks) @ U.conj().T

    return model.model_copy(update={"name": name or f"rot({model.name})", "hamiltonian": hamiltonian})
