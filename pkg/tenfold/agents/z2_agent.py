"""
Z2 invariants: TRIM Pfaffian signs for 1d class D and Wannier-center flow for 2d Kramers systems
"""
import math
from typing import List

import numpy as np
from loguru import logger
from scipy.optimize import linear_sum_assignment

from ..config import get_settings
from ..exceptions import (
    GaplessModelError,
    NonConvergentError,
    NotClassDError,
    NotTimeReversalError,
    OddOccupationError,
    UnsupportedInvariantError,
)
from ..models.band_models import SampledBloch
from ..models.invariant_models import FlattenedBloch, InvariantValue
from ..models.symmetry_models import AntiUnitaryOp
from ..services.flattening import flatten
from ..services.model_zoo import sample_grid
from ..services.numkit import pfaffian, takagi_symmetric_unitary
from ..services.symmetry_service import check_antiunitary
from .base_agent import BaseInvariantAgent

MAX_CENTER_STEP = 0.5 * math.pi


def wrap_phase(x):
    """Map phases into (-pi, pi]"""
    return -((-np.asarray(x) + math.pi) % (2.0 * math.pi) - math.pi)


class ClassDPfaffianAgent(BaseInvariantAgent[SampledBloch]):
    """ch1^(2)(w) in class D, d = 1: sign of Pf(iH(0)) Pf(iH(pi)) in the Majorana basis"""

    def __init__(self, **kwargs):
        super().__init__("ClassDPfaffianAgent", **kwargs)

    def get_index_tag(self) -> str:
        return "ch1^(2)(w)"

    def majorana_pfaffian(self, H: np.ndarray, W: np.ndarray) -> float:
        rotated = W.conj().T @ H @ W
        return pfaffian(1j * rotated)

    def compute(self, subject: SampledBloch, phs: AntiUnitaryOp = None, **kwargs) -> InvariantValue:
        if subject.dim != 1:
            raise UnsupportedInvariantError(f"TRIM Pfaffian invariant needs a 1d model, got {subject.dim}d")
        if phs is None or phs.kind != "PHS" or phs.sign != 1:
            raise NotClassDError("Class D invariant needs a particle-hole witness squaring to +1")
        if subject.min_gap < get_settings().gap_threshold:
            raise GaplessModelError(f"{subject.model.name} is gapless on the grid (min_gap={subject.min_gap:.3e})")
        if not check_antiunitary(subject, phs).holds:
            raise NotClassDError(f"Particle-hole witness {phs.label()} does not hold on {subject.model.name}")

        W = takagi_symmetric_unitary(phs.U)
        zero, pi = subject.grid_size // 2, 0
        pf_zero = self.majorana_pfaffian(subject.values[zero], W)
        pf_pi = self.majorana_pfaffian(subject.values[pi], W)
        sign = math.copysign(1.0, pf_zero * pf_pi)
        logger.debug(f"[{self.name}] Pf(0)={pf_zero:.6g} Pf(pi)={pf_pi:.6g}")
        bit = int(round((1.0 - sign) / 2.0))
        return self.parity(bit, subject.grid_size, raw=(1.0 - sign) / 2.0)


def wilson_loop_phases(frames: np.ndarray) -> np.ndarray:
    """
    Sorted Wilson-loop eigenphases along k_y for every k_x row of a
    (Nx, Ny, bands, n_occ) frame grid.
    """
    n_x, n_y = frames.shape[0], frames.shape[1]
    n_occ = frames.shape[-1]
    loop = np.broadcast_to(np.eye(n_occ, dtype=complex), (n_x, n_occ, n_occ)).copy()
    for j in range(n_y):
        overlap = np.conj(np.swapaxes(frames[:, j], -1, -2)) @ frames[:, (j + 1) % n_y]
        u, _, vh = np.linalg.svd(overlap)
        loop = loop @ (u @ vh)
    return np.sort(np.angle(np.linalg.eigvals(loop)), axis=-1)


def half_zone_rows(grid_size: int) -> List[int]:
    """k_x grid indices running from 0 up to pi"""
    return list(range(grid_size // 2, grid_size)) + [0]


def reference_line(first: np.ndarray, last: np.ndarray) -> float:
    """Midpoint of the widest gap among the Wannier centers at k_x = 0 and pi"""
    phases = np.sort(np.concatenate([first, last]))
    gaps = np.diff(np.concatenate([phases, [phases[0] + 2.0 * math.pi]]))
    widest = int(np.argmax(gaps))
    return float(wrap_phase(phases[widest] + 0.5 * gaps[widest]))


def count_crossings(centers: np.ndarray, reference: float) -> int:
    """Times the tracked centers cross the reference line between consecutive rows"""
    crossings = 0
    for before, after in zip(centers[:-1], centers[1:]):
        cost = np.abs(wrap_phase(after[None, :] - before[:, None]))
        rows, cols = linear_sum_assignment(cost)
        for i, j in zip(rows, cols):
            step = float(wrap_phase(after[j] - before[i]))
            if abs(step) > MAX_CENTER_STEP:
                raise NonConvergentError(
                    f"Wannier center moves by {step:.3f} rad between neighbouring k_x; refine the grid"
                )
            offset = float(wrap_phase(reference - before[i]))
            if (step > 0 and 0 < offset <= step) or (step < 0 and step <= offset < 0):
                crossings += 1
    return crossings


class WannierZ2Agent(BaseInvariantAgent[FlattenedBloch]):
    """ch1^(2)(w)_2->1: parity of Wannier-center flow across a reference line over half the zone"""

    def __init__(self, check_refinement: bool = True, **kwargs):
        super().__init__("WannierZ2Agent", **kwargs)
        self.check_refinement = check_refinement

    def get_index_tag(self) -> str:
        return "ch1^(2)(w)_2->1"

    def compute(self, subject: FlattenedBloch, trs: AntiUnitaryOp = None, **kwargs) -> InvariantValue:
        if subject.dim != 2:
            raise UnsupportedInvariantError(f"Wannier-flow Z2 needs a 2d model, got {subject.dim}d")
        if trs is None or trs.kind != "TRS" or trs.sign != -1:
            raise NotTimeReversalError("Wannier-flow Z2 needs a time-reversal witness squaring to -1")
        if not check_antiunitary(subject.source, trs).holds:
            raise NotTimeReversalError(f"Time-reversal witness {trs.label()} does not hold")
        if subject.n_occ % 2:
            raise OddOccupationError(f"{subject.n_occ} occupied bands cannot form Kramers pairs")

        crossings = self.flow_crossings(subject)
        if self.check_refinement:
            finer = flatten(sample_grid(subject.source.model, 2 * subject.grid_size), subject.fermi)
            refined = self.flow_crossings(finer)
            if (refined - crossings) % 2:
                raise NonConvergentError(
                    f"Wannier-flow parity changes from {crossings % 2} to {refined % 2} "
                    f"between N={subject.grid_size} and N={finer.grid_size}"
                )
        return self.parity(crossings, subject.grid_size)

    def flow_crossings(self, flat: FlattenedBloch) -> int:
        centers = wannier_centers(flat)
        reference = reference_line(centers[0], centers[-1])
        crossings = count_crossings(centers, reference)
        logger.debug(f"[{self.name}] N={flat.grid_size}: {crossings} crossings of the line {reference:.4f}")
        return crossings


def wannier_centers(flat: FlattenedBloch) -> np.ndarray:
    """Wilson-loop phases for k_x from 0 to pi, shape (N/2 + 1, n_occ)"""
    phases = wilson_loop_phases(flat.frames)
    return phases[half_zone_rows(flat.grid_size)]


def class_d_1d_z2(sampled: SampledBloch, C: AntiUnitaryOp) -> InvariantValue:
    return ClassDPfaffianAgent().execute(sampled, phs=C)


def z2_wannier_2d(flat: FlattenedBloch, theta: AntiUnitaryOp, check_refinement: bool = True) -> InvariantValue:
    """Parity on the given grid, cross-checked on the doubled grid unless disabled"""
    return WannierZ2Agent(check_refinement=check_refinement).execute(flat, trs=theta)
