"""
Invariant calculators and the class-driven dispatcher
"""

from .base_agent import BaseInvariantAgent
from .chern_agent import ChernNumberAgent, chern_from_frames, chern_number
from .winding_agent import Winding1DAgent, Winding3DAgent, mod2_reduce, winding_1d, winding_3d
from .z2_agent import ClassDPfaffianAgent, WannierZ2Agent, class_d_1d_z2, wannier_centers, z2_wannier_2d
from .orchestrator import InvariantOrchestrator, dispatch

__all__ = [
    "BaseInvariantAgent",
    "ChernNumberAgent",
    "Winding1DAgent",
    "Winding3DAgent",
    "ClassDPfaffianAgent",
    "WannierZ2Agent",
    "InvariantOrchestrator",
    "chern_from_frames",
    "chern_number",
    "winding_1d",
    "winding_3d",
    "mod2_reduce",
    "class_d_1d_z2",
    "wannier_centers",
    "z2_wannier_2d",
    "dispatch",
]
