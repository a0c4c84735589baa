"""
Winding numbers of chiral blocks (1d determinant winding, 3d degree) and mod 2 reduction
"""
import math
from typing import Optional

import numpy as np
from loguru import logger

from ..exceptions import NonConvergentError, NoRealityConstraintError, NotSmoothError, UnsupportedInvariantError
from ..models.invariant_models import ChiralBlock, InvariantValue, RealityConstraint
from .base_agent import BaseInvariantAgent

MAX_PHASE_STEP = 0.5 * math.pi
MAX_NEIGHBOUR_DISTANCE = 0.5


class Winding1DAgent(BaseInvariantAgent[ChiralBlock]):
    """ch1(w): winding of det q(k) around the circle"""

    def __init__(self, **kwargs):
        super().__init__("Winding1DAgent", **kwargs)

    def get_index_tag(self) -> str:
        return "ch1(w)"

    def compute(self, subject: ChiralBlock, **kwargs) -> InvariantValue:
        if subject.dim != 1:
            raise UnsupportedInvariantError(f"1d winding needs a 1d block grid, got {subject.dim}d")
        dets = np.linalg.det(subject.blocks)
        steps = np.angle(np.roll(dets, -1) * np.conj(dets))
        largest = float(np.max(np.abs(steps)))
        if largest > MAX_PHASE_STEP:
            raise NonConvergentError(
                f"det q phase jumps by {largest:.3f} rad between neighbouring points; refine the grid"
            )
        raw = float(np.sum(steps) / (2.0 * math.pi))
        return self.round_integer(raw, subject.grid_size)


def _derivative(q: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    """Fourth-order central difference on the periodic grid"""
    forward1 = np.roll(q, -1, axis=axis)
    backward1 = np.roll(q, 1, axis=axis)
    forward2 = np.roll(q, -2, axis=axis)
    backward2 = np.roll(q, 2, axis=axis)
    return (-forward2 + 8.0 * forward1 - 8.0 * backward1 + backward2) / (12.0 * spacing)


class Winding3DAgent(BaseInvariantAgent[ChiralBlock]):
    """ch3(w): (1 / 24 pi^2) int eps^{ijk} tr[(q^-1 d_i q)(q^-1 d_j q)(q^-1 d_k q)]"""

    def __init__(self, **kwargs):
        super().__init__("Winding3DAgent", **kwargs)

    def get_index_tag(self) -> str:
        return "ch3(w)"

    def compute(self, subject: ChiralBlock, **kwargs) -> InvariantValue:
        if subject.dim != 3:
            raise UnsupportedInvariantError(f"3d winding needs a 3d block grid, got {subject.dim}d")
        q = subject.blocks
        for axis in range(3):
            jump = np.sqrt(np.sum(np.abs(np.roll(q, -1, axis=axis) - q) ** 2, axis=(-2, -1)))
            worst = float(np.max(jump))
            if worst >= MAX_NEIGHBOUR_DISTANCE:
                raise NotSmoothError(
                    f"q changes by {worst:.3f} between neighbours along axis {axis}; refine the grid"
                )

        n = subject.grid_size
        spacing = 2.0 * math.pi / n
        q_dag = np.conj(np.swapaxes(q, -1, -2))
        ax, ay, az = (q_dag @ _derivative(q, axis, spacing) for axis in range(3))
        xyz = np.trace(ax @ ay @ az, axis1=-2, axis2=-1)
        xzy = np.trace(ax @ az @ ay, axis1=-2, axis2=-1)
        density = 3.0 * (xyz - xzy)
        total = np.sum(density) * spacing ** 3
        raw = float(np.real(total) / (24.0 * math.pi ** 2))
        logger.debug(f"[{self.name}] Imaginary part of the integral {float(np.imag(total)):.2e}")
        return self.round_integer(raw, n)


def winding_1d(q: ChiralBlock) -> InvariantValue:
    return Winding1DAgent().execute(q)


def winding_3d(q: ChiralBlock) -> InvariantValue:
    return Winding3DAgent().execute(q)


def mod2_reduce(v: InvariantValue, compat: Optional[RealityConstraint]) -> InvariantValue:
    """Reduce an integer index mod 2; only legal under a reality constraint"""
    if compat is None:
        raise NoRealityConstraintError(
            f"Refusing to reduce integer {v.value} mod 2 without an antiunitary reality constraint"
        )
    if v.kind != "Integer":
        raise ValueError(f"mod 2 reduction expects an Integer invariant, got {v.kind}")
    logger.debug(f"[Mod2] Reducing {v.value} under {compat.kind} {compat.witness}")
    return InvariantValue(kind="Mod2", value=v.value % 2, raw=v.raw, grid=v.grid_size, residual=v.residual)
