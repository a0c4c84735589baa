"""
Symmetry checks on sampled Hamiltonians and Altland-Zirnbauer classification
"""
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..config import get_settings
from ..exceptions import (
    AmbiguousWitnessError,
    DimensionMismatchError,
    GaplessModelError,
    InconsistentSignatureError,
    NoCandidatesError,
)
from ..models.band_models import SampledBloch
from ..models.symmetry_models import (
    AntiUnitaryCheck,
    AntiUnitaryOp,
    AZClass,
    ClassificationResult,
    SymmetrySignature,
    SymmetryWitnesses,
    UnitaryOp,
)
from .numkit import dagger, frobenius, pauli_string

Operator = Union[AntiUnitaryOp, UnitaryOp]

AZ_TABLE: Dict[Tuple[int, int, int], AZClass] = {
    (0, 0, 0): AZClass.A,
    (0, 0, 1): AZClass.AIII,
    (1, 0, 0): AZClass.AI,
    (1, 1, 1): AZClass.BDI,
    (0, 1, 0): AZClass.D,
    (-1, 1, 1): AZClass.DIII,
    (-1, 0, 0): AZClass.AII,
    (-1, -1, 1): AZClass.CII,
    (0, -1, 0): AZClass.C,
    (1, -1, 1): AZClass.CI,
}

CARTAN_NAMES = {
    AZClass.A: "unitary",
    AZClass.AIII: "chiral unitary",
    AZClass.AI: "orthogonal",
    AZClass.BDI: "chiral orthogonal",
    AZClass.D: "BdG",
    AZClass.DIII: "BdG",
    AZClass.AII: "symplectic",
    AZClass.CII: "chiral symplectic",
    AZClass.C: "BdG",
    AZClass.CI: "BdG",
}


def cartan_name(az_class: AZClass) -> str:
    return CARTAN_NAMES[az_class]


def signature_of(az_class: AZClass) -> SymmetrySignature:
    for (trs, phs, cs), label in AZ_TABLE.items():
        if label == az_class:
            return SymmetrySignature(trs=trs, phs=phs, cs=cs)
    raise KeyError(az_class)


def _relative_residual(lhs: np.ndarray, target: np.ndarray, reference: np.ndarray) -> np.ndarray:
    scale = frobenius(reference)
    error = frobenius(lhs - target)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(scale > 0, error / np.where(scale > 0, scale, 1.0), np.where(error > 0, np.inf, 0.0))


def _require_size(sampled: SampledBloch, size: int, label: str) -> None:
    if size != sampled.bands:
        raise DimensionMismatchError(f"{label} is {size}x{size} but the model has {sampled.bands} bands")


def check_antiunitary(sampled: SampledBloch, op: AntiUnitaryOp, tol: Optional[float] = None) -> AntiUnitaryCheck:
    """TRS: U conj(H(k)) U^dagger == H(-k); PHS: == -H(-k); at every grid point"""
    tol = get_settings().symmetry_tol if tol is None else tol
    _require_size(sampled, op.size, op.label())
    H = sampled.values
    lhs = op.U @ np.conj(H) @ op.U.conj().T
    target = sampled.negated_values()
    if op.kind == "PHS":
        target = -target
    residual = _relative_residual(lhs, target, H)
    worst = float(np.max(residual))
    holds = bool(np.all(residual <= tol))
    logger.debug(f"[SymmetryService] {op.kind} {op.name}: holds={holds} residual={worst:.3e}")
    return AntiUnitaryCheck(holds=holds, sign=op.sign if holds else None, max_residual=worst)


def check_chiral(sampled: SampledBloch, op: UnitaryOp, tol: Optional[float] = None) -> bool:
    """S H(k) S^dagger == -H(k) at every grid point"""
    tol = get_settings().symmetry_tol if tol is None else tol
    _require_size(sampled, op.size, f"chiral operator {op.name}")
    H = sampled.values
    lhs = op.S @ H @ op.S.conj().T
    residual = _relative_residual(lhs, -H, H)
    holds = bool(np.all(residual <= tol))
    logger.debug(f"[SymmetryService] CS {op.name}: holds={holds} residual={float(np.max(residual)):.3e}")
    return holds


def az_class_of(signature: SymmetrySignature) -> AZClass:
    if not signature.is_consistent():
        raise InconsistentSignatureError(f"Signature {signature.as_tuple()} matches no symmetry class")
    return AZ_TABLE[signature.as_tuple()]


def chiral_from_pair(trs: AntiUnitaryOp, phs: AntiUnitaryOp) -> UnitaryOp:
    """S = U_T conj(U_C)"""
    return UnitaryOp(S=trs.U @ np.conj(phs.U), name=f"({trs.name})conj({phs.name})")


def check_commutation(trs: AntiUnitaryOp, phs: AntiUnitaryOp, tol: float = 1e-9) -> bool:
    """Theta C == C Theta, i.e. U_T conj(U_C) == U_C conj(U_T); warns when violated"""
    left = trs.U @ np.conj(phs.U)
    right = phs.U @ np.conj(trs.U)
    commutes = float(np.linalg.norm(left - right)) <= tol * max(1.0, float(np.linalg.norm(left)))
    if not commutes:
        logger.warning(f"[SymmetryService] Witnesses {trs.label()} and {phs.label()} do not commute")
    return commutes


def pauli_candidates(bands: int) -> List[Operator]:
    """All Pauli strings as TRS/PHS (times K) and chiral candidates"""
    if bands == 1:
        labels = ["1"]
        matrices = {"1": np.eye(1, dtype=complex)}
    elif bands in (2, 4):
        factors = 1 if bands == 2 else 2
        labels = ["*".join(p) for p in product("0xyz", repeat=factors)]
        matrices = {label: pauli_string(label) for label in labels}
    else:
        raise NoCandidatesError(f"No built-in candidate sweep for {bands} bands; supply operators explicitly")
    ops: List[Operator] = []
    for label in labels:
        name = f"pauli:{label}"
        ops.append(AntiUnitaryOp(U=matrices[label], kind="TRS", name=name))
        ops.append(AntiUnitaryOp(U=matrices[label], kind="PHS", name=name))
        ops.append(UnitaryOp(S=matrices[label], name=name))
    return ops


def _pick(holding: List[AntiUnitaryOp], kind: str) -> Optional[AntiUnitaryOp]:
    if not holding:
        return None
    first = holding[0]
    for other in holding[1:]:
        if other.sign != first.sign:
            raise AmbiguousWitnessError(
                f"{kind} witnesses disagree: {first.label()} squares to {first.sign:+d}, "
                f"{other.label()} squares to {other.sign:+d}",
                first=first.label(),
                second=other.label(),
            )
    return first


def classify(
    sampled: SampledBloch,
    candidates: Optional[Sequence[Operator]] = None,
    tol: Optional[float] = None,
) -> ClassificationResult:
    """
    Assemble the symmetry signature from the candidates that hold and look up the class.
    With both antiunitaries, the PHS-only, TRS-only and chiral-only classes are alternatives.
    """
    settings = get_settings()
    tol = settings.symmetry_tol if tol is None else tol
    if sampled.is_gapless(settings.gap_threshold):
        raise GaplessModelError(f"{sampled.model.name} is gapless on the grid (min_gap={sampled.min_gap:.3e})")

    ops = list(candidates) if candidates else pauli_candidates(sampled.bands)
    logger.info(f"[SymmetryService] Classifying {sampled.model.name} with {len(ops)} candidates")

    holding_trs: List[AntiUnitaryOp] = []
    holding_phs: List[AntiUnitaryOp] = []
    holding_cs: List[UnitaryOp] = []
    for op in ops:
        if isinstance(op, AntiUnitaryOp):
            if check_antiunitary(sampled, op, tol).holds:
                (holding_trs if op.kind == "TRS" else holding_phs).append(op)
        elif check_chiral(sampled, op, tol):
            holding_cs.append(op)

    # one antiunitary plus a chiral operator implies the other antiunitary
    if holding_cs and bool(holding_trs) != bool(holding_phs):
        chiral = holding_cs[0]
        base = (holding_trs or holding_phs)[0]
        other_kind = "PHS" if base.kind == "TRS" else "TRS"
        derived = AntiUnitaryOp(U=chiral.S @ base.U, kind=other_kind, name=f"{chiral.name}.{base.name}")
        if check_antiunitary(sampled, derived, 2 * tol).holds:
            (holding_phs if other_kind == "PHS" else holding_trs).append(derived)
            logger.info(f"[SymmetryService] Derived {other_kind} witness {derived.label()}")

    trs = _pick(holding_trs, "TRS")
    phs = _pick(holding_phs, "PHS")

    chiral: Optional[UnitaryOp] = None
    if trs is not None and phs is not None:
        check_commutation(trs, phs)
        chiral = chiral_from_pair(trs, phs)
        if not check_chiral(sampled, chiral, 2 * tol):
            logger.warning(f"[SymmetryService] Product chiral operator {chiral.name} fails the direct check")
            direct = [op for op in holding_cs]
            chiral = direct[0] if direct else chiral
        cs = 1
    elif trs is None and phs is None:
        cs = 1 if holding_cs else 0
        chiral = holding_cs[0] if holding_cs else None
    else:
        cs = 0

    signature = SymmetrySignature(trs=trs.sign if trs else 0, phs=phs.sign if phs else 0, cs=cs)
    az_class = az_class_of(signature)

    # each symmetry read alone, BdG reading first
    alternatives: List[AZClass] = []
    if trs is not None and phs is not None:
        alternatives.append(az_class_of(SymmetrySignature(phs=phs.sign)))
        alternatives.append(az_class_of(SymmetrySignature(trs=trs.sign)))
        alternatives.append(az_class_of(SymmetrySignature(cs=1)))

    holding = [op.label() for op in holding_trs + holding_phs] + [op.name for op in holding_cs]
    logger.info(
        f"[SymmetryService] {sampled.model.name}: class {az_class.value} signature {signature.as_tuple()}"
        + (f", also {', '.join(a.value for a in alternatives)}" if alternatives else "")
    )
    return ClassificationResult(
        az_class=az_class,
        signature=signature,
        witnesses=SymmetryWitnesses(trs=trs, phs=phs, chiral=chiral),
        holding=holding,
        alternatives=alternatives,
    )
