"""
Lattice field-strength Chern number of the occupied bands
"""
import math

import numpy as np
from loguru import logger

from ..exceptions import SingularOverlapError, UnsupportedInvariantError
from ..models.invariant_models import FlattenedBloch, InvariantValue
from .base_agent import BaseInvariantAgent

LINK_TOL = 1e-6


def link_variables(frames: np.ndarray, axis: int) -> np.ndarray:
    """det <u(k)|u(k + e_axis)> over the occupied frames"""
    shifted = np.roll(frames, -1, axis=axis)
    overlaps = np.einsum("...ai,...aj->...ij", np.conj(frames), shifted)
    return np.linalg.det(overlaps)


def chern_from_frames(frames: np.ndarray) -> float:
    """
    Sum of plaquette phases / 2 pi for frames shaped (Nx, Ny, bands, n_occ).
    Plaquettes run k -> k + x -> k + x + y -> k + y.
    """
    if frames.ndim != 4:
        raise UnsupportedInvariantError(f"Chern number needs a 2d frame grid, got shape {frames.shape}")
    ux = link_variables(frames, 0)
    uy = link_variables(frames, 1)
    smallest = float(min(np.min(np.abs(ux)), np.min(np.abs(uy))))
    if smallest < LINK_TOL:
        raise SingularOverlapError(f"Link overlap {smallest:.2e} below {LINK_TOL}; grid too coarse")
    loop = ux * np.roll(uy, -1, axis=0) * np.conj(np.roll(ux, -1, axis=1)) * np.conj(uy)
    curvature = np.angle(loop)
    return float(np.sum(curvature) / (2.0 * math.pi))


class ChernNumberAgent(BaseInvariantAgent[FlattenedBloch]):
    """First Chern number ch1(p) of the occupied projector"""

    def __init__(self, **kwargs):
        super().__init__("ChernNumberAgent", **kwargs)

    def get_index_tag(self) -> str:
        return "ch1(p)"

    def compute(self, subject: FlattenedBloch, **kwargs) -> InvariantValue:
        if subject.dim != 2:
            raise UnsupportedInvariantError(f"Chern number is defined here for 2d models, got {subject.dim}d")
        raw = chern_from_frames(subject.frames)
        logger.debug(f"[{self.name}] Plaquette sum {raw:.12f} over {subject.grid_size}^2 grid")
        return self.round_integer(raw, subject.grid_size)


def chern_number(flat: FlattenedBloch) -> InvariantValue:
    return ChernNumberAgent().execute(flat)
