"""
Spectral flattening and chiral off-diagonal blocks
"""
import numpy as np
from loguru import logger

from ..config import get_settings
from ..exceptions import GaplessModelError, InconsistentOccupationError, NotChiralError, OddSplitError
from ..models.band_models import SampledBloch
from ..models.invariant_models import ChiralBlock, FlattenedBloch
from ..models.symmetry_models import UnitaryOp
from .numkit import dagger, eig_hermitian, frobenius

FLAT_TOL = 1e-8


def flatten(sampled: SampledBloch, fermi: float = 0.0) -> FlattenedBloch:
    """
    Q(k) = V sign(lambda - fermi) V^dagger at every grid point.
    A level closer to the Fermi level than gap_threshold times the bandwidth (at least 1) is gapless.
    """
    bandwidth = float(np.max(sampled.eigenvalues) - np.min(sampled.eigenvalues))
    threshold = get_settings().gap_threshold * max(1.0, bandwidth)
    distance = float(np.min(np.abs(sampled.eigenvalues - fermi)))
    if distance < threshold:
        raise GaplessModelError(
            f"{sampled.model.name} has a level within {distance:.3e} of the Fermi level {fermi} "
            f"(threshold {threshold:.3e} for bandwidth {bandwidth:.3e})"
        )

    occupied = np.sum(sampled.eigenvalues < fermi, axis=-1)
    counts = np.unique(occupied)
    if counts.size != 1:
        raise InconsistentOccupationError(
            f"Occupied band count varies over the grid: {sorted(int(c) for c in counts)}"
        )
    n_occ = int(counts[0])

    vectors = sampled.eigenvectors
    signs = np.where(sampled.eigenvalues < fermi, -1.0, 1.0)
    Q = (vectors * signs[..., None, :]) @ dagger(vectors)
    deviation = float(np.max(frobenius(Q @ Q - np.eye(sampled.bands))))
    if deviation >= FLAT_TOL:
        raise GaplessModelError(f"Flattened Hamiltonian fails Q^2 = I (deviation {deviation:.3e})")

    logger.debug(f"[Flattening] {sampled.model.name}: n_occ={n_occ}, Q^2 deviation {deviation:.2e}")
    return FlattenedBloch(
        source=sampled,
        fermi=fermi,
        Q=Q,
        frames=vectors[..., :n_occ],
        n_occ=n_occ,
    )


def chiral_basis(op: UnitaryOp) -> np.ndarray:
    """Unitary P with P^dagger S P = diag(I, -I) (S rescaled to square to +1)"""
    decomposition = eig_hermitian(op.hermitian_form())
    values, vectors = decomposition.eigenvalues, decomposition.eigenvectors
    plus = vectors[:, values > 0]
    minus = vectors[:, values < 0]
    if plus.shape[1] != minus.shape[1]:
        raise OddSplitError(
            f"Chiral operator {op.name} splits into {plus.shape[1]} + {minus.shape[1]} dimensional eigenspaces"
        )
    return np.concatenate([plus, minus], axis=1)


def chiral_block(flat: FlattenedBloch, op: UnitaryOp) -> ChiralBlock:
    """Off-diagonal block q(k) of Q(k) written in the eigenbasis of S"""
    if op.size != flat.bands:
        raise NotChiralError(f"Chiral operator {op.name} is {op.size}x{op.size}, model has {flat.bands} bands")
    S = op.S
    anti = frobenius(S @ flat.Q @ S.conj().T + flat.Q)
    if float(np.max(anti)) > FLAT_TOL * np.sqrt(flat.bands):
        raise NotChiralError(f"{op.name} does not anticommute with Q (max residual {float(np.max(anti)):.3e})")

    P = chiral_basis(op)
    half = flat.bands // 2
    rotated = P.conj().T @ flat.Q @ P
    blocks = rotated[..., :half, half:]
    unitarity = float(np.max(frobenius(dagger(blocks) @ blocks - np.eye(half))))
    if unitarity >= FLAT_TOL:
        raise NotChiralError(f"Chiral block is not unitary (deviation {unitarity:.3e})")
    logger.debug(f"[Flattening] Chiral block of size {half} extracted with {op.name}")
    return ChiralBlock(blocks=blocks, dim=flat.dim)
