"""
Class-driven dispatch of the bulk invariant calculators
"""
from typing import Optional, Sequence, Tuple, Union

from loguru import logger

from ..exceptions import (
    ComplexClassError,
    NotChiralError,
    NotClassDError,
    NotTimeReversalError,
    UsageError,
)
from ..models.band_models import SampledBloch
from ..models.invariant_models import InvariantValue, RealityConstraint
from ..models.symmetry_models import AntiUnitaryOp, AZClass, ClassificationResult, SymmetryWitnesses, UnitaryOp
from ..services import ktable_service as ktable
from ..services.flattening import chiral_block, flatten
from ..services.symmetry_service import chiral_from_pair, classify
from .chern_agent import ChernNumberAgent
from .winding_agent import Winding1DAgent, Winding3DAgent, mod2_reduce
from .z2_agent import ClassDPfaffianAgent, WannierZ2Agent

Operator = Union[AntiUnitaryOp, UnitaryOp]


class InvariantOrchestrator:
    """
    Routes a (class, dimension) pair to its index formula.
    Empty table cells give a Trivial value without touching the grid.
    """

    def __init__(self, check_refinement: bool = True):
        self.chern_agent = ChernNumberAgent()
        self.winding_1d_agent = Winding1DAgent()
        self.winding_3d_agent = Winding3DAgent()
        self.pfaffian_agent = ClassDPfaffianAgent()
        self.wannier_agent = WannierZ2Agent(check_refinement=check_refinement)

        logger.debug("[InvariantOrchestrator] Initialized with 5 invariant agents")

    def dispatch(
        self,
        az_class: AZClass,
        sampled: SampledBloch,
        witnesses: Optional[SymmetryWitnesses] = None,
        fermi: float = 0.0,
    ) -> InvariantValue:
        if az_class.is_complex:
            raise ComplexClassError(f"Class {az_class.value} has no real index table")
        witnesses = witnesses or SymmetryWitnesses()
        entry = ktable.class_metadata(az_class, sampled.dim)
        tag = entry.index_tag
        logger.info(
            f"[InvariantOrchestrator] {az_class.value} d={sampled.dim}: group {entry.group}, index {tag or 'none'}"
        )

        if tag is None:
            return self.chern_agent.trivial(sampled.grid_size)

        if tag == ktable.CH1_P:
            return self.chern_agent.execute(flatten(sampled, fermi))

        if tag == ktable.CH1_W:
            block = chiral_block(flatten(sampled, fermi), self.chiral_witness(witnesses))
            return self.winding_1d_agent.execute(block)

        if tag == ktable.CH3_W:
            block = chiral_block(flatten(sampled, fermi), self.chiral_witness(witnesses))
            return self.winding_3d_agent.execute(block)

        if tag == ktable.CH1_W_MOD2:
            if az_class == AZClass.D:
                if witnesses.phs is None:
                    raise NotClassDError("Class D dispatch needs a particle-hole witness")
                return self.pfaffian_agent.execute(sampled, phs=witnesses.phs)
            block = chiral_block(flatten(sampled, fermi), self.chiral_witness(witnesses))
            value = self.winding_1d_agent.execute(block)
            return mod2_reduce(value, self.reality_constraint(witnesses))

        if tag == ktable.CH3_W_MOD2:
            block = chiral_block(flatten(sampled, fermi), self.chiral_witness(witnesses))
            value = self.winding_3d_agent.execute(block)
            return mod2_reduce(value, self.reality_constraint(witnesses))

        if tag == ktable.CH1_W_2TO1:
            if witnesses.trs is None:
                raise NotTimeReversalError(f"{az_class.value} dispatch needs a time-reversal witness")
            return self.wannier_agent.execute(flatten(sampled, fermi), trs=witnesses.trs)

        raise ValueError(f"Unknown index tag {tag}")

    def evaluate(
        self,
        sampled: SampledBloch,
        az_class: Optional[AZClass] = None,
        candidates: Optional[Sequence[Operator]] = None,
        tol: Optional[float] = None,
        fermi: float = 0.0,
    ) -> Tuple[ClassificationResult, AZClass, InvariantValue]:
        """Classify, pick the requested (or detected) class and dispatch"""
        result = classify(sampled, candidates, tol)
        chosen = az_class or result.az_class
        if chosen not in result.classes:
            raise UsageError(
                f"Requested class {chosen.value} is not consistent with the witnesses "
                f"({', '.join(c.value for c in result.classes)})"
            )
        return result, chosen, self.dispatch(chosen, sampled, result.witnesses, fermi)

    @staticmethod
    def chiral_witness(witnesses: SymmetryWitnesses) -> UnitaryOp:
        if witnesses.chiral is not None:
            return witnesses.chiral
        if witnesses.trs is not None and witnesses.phs is not None:
            return chiral_from_pair(witnesses.trs, witnesses.phs)
        raise NotChiralError("No chiral witness available; winding invariants need one")

    @staticmethod
    def reality_constraint(witnesses: SymmetryWitnesses) -> Optional[RealityConstraint]:
        return RealityConstraint.from_witness(witnesses.trs) or RealityConstraint.from_witness(witnesses.phs)


def dispatch(
    az_class: AZClass,
    sampled: SampledBloch,
    witnesses: Optional[SymmetryWitnesses] = None,
    fermi: float = 0.0,
) -> InvariantValue:
    return InvariantOrchestrator().dispatch(az_class, sampled, witnesses, fermi)
