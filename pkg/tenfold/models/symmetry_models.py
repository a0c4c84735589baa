"""
Pydantic models for symmetry operators, signatures and Altland-Zirnbauer classes
"""
from enum import Enum
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

OPERATOR_TOL = 1e-9


class AZClass(str, Enum):
    """The ten Altland-Zirnbauer symmetry classes"""
    A = "A"
    AIII = "AIII"
    AI = "AI"
    BDI = "BDI"
    D = "D"
    DIII = "DIII"
    AII = "AII"
    CII = "CII"
    C = "C"
    CI = "CI"

    @property
    def is_complex(self) -> bool:
        return self in (AZClass.A, AZClass.AIII)

    def __str__(self) -> str:
        return self.value


def _identity_distance(M: np.ndarray) -> float:
    return float(np.linalg.norm(M - np.eye(M.shape[0])))


class AntiUnitaryOp(BaseModel):
    """U K with U unitary and U conj(U) = sign * I"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    U: np.ndarray = Field(..., description="Unitary part of the operator")
    kind: Literal["TRS", "PHS"] = Field(..., description="Time reversal or particle-hole")
    name: str = Field("custom", description="Human-readable label, e.g. pauli:y")
    sign: int = Field(0, description="Square of the operator, filled in by validation")

    @model_validator(mode="before")
    @classmethod
    def compute_sign(cls, data):
        if not isinstance(data, dict):
            return data
        U = np.asarray(data.get("U"), dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError(f"Operator matrix must be square, got shape {U.shape}")
        if _identity_distance(U.conj().T @ U) >= OPERATOR_TOL:
            raise ValueError(f"Operator {data.get('name', 'custom')} is not unitary")
        square = U @ U.conj()
        if _identity_distance(square) < OPERATOR_TOL:
            sign = 1
        elif _identity_distance(-square) < OPERATOR_TOL:
            sign = -1
        else:
            raise ValueError(f"Operator {data.get('name', 'custom')} does not square to +1 or -1")
        return {**data, "U": U, "sign": sign}

    @property
    def size(self) -> int:
        return self.U.shape[0]

    def label(self) -> str:
        return f"{self.name} K"


class UnitaryOp(BaseModel):
    """Chiral operator S with S^2 = +-I"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    S: np.ndarray = Field(..., description="Unitary chiral operator")
    name: str = Field("custom", description="Human-readable label")
    square: int = Field(0, description="S^2 = square * I, filled in by validation")

    @model_validator(mode="before")
    @classmethod
    def compute_square(cls, data):
        if not isinstance(data, dict):
            return data
        S = np.asarray(data.get("S"), dtype=complex)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ValueError(f"Chiral operator must be square, got shape {S.shape}")
        if _identity_distance(S.conj().T @ S) >= OPERATOR_TOL:
            raise ValueError(f"Chiral operator {data.get('name', 'custom')} is not unitary")
        if _identity_distance(S @ S) < OPERATOR_TOL:
            square = 1
        elif _identity_distance(-(S @ S)) < OPERATOR_TOL:
            square = -1
        else:
            raise ValueError(f"Chiral operator {data.get('name', 'custom')} does not square to +1 or -1")
        return {**data, "S": S, "square": square}

    @property
    def size(self) -> int:
        return self.S.shape[0]

    def hermitian_form(self) -> np.ndarray:
        """S rescaled so that it squares to +I"""
        return self.S if self.square == 1 else 1j * self.S


class SymmetrySignature(BaseModel):
    """(TRS, PHS, CS) sign triple"""
    model_config = ConfigDict(frozen=True)

    trs: Literal[-1, 0, 1] = 0
    phs: Literal[-1, 0, 1] = 0
    cs: Literal[0, 1] = 0

    def is_consistent(self) -> bool:
        if self.trs and self.phs:
            return self.cs == 1
        if self.trs or self.phs:
            return self.cs == 0
        return True

    def as_tuple(self):
        return (self.trs, self.phs, self.cs)


class AntiUnitaryCheck(BaseModel):
    """Outcome of an antiunitary symmetry test on a grid"""
    holds: bool
    sign: Optional[int] = Field(None, description="Square of the operator when it holds")
    max_residual: float = Field(..., description="Largest relative Frobenius residual over the grid")


class SymmetryWitnesses(BaseModel):
    """Operators that realise the signature of a classified model"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    trs: Optional[AntiUnitaryOp] = None
    phs: Optional[AntiUnitaryOp] = None
    chiral: Optional[UnitaryOp] = None

    def describe(self) -> List[str]:
        parts = []
        if self.trs is not None:
            parts.append(f"TRS {self.trs.sign:+d} witness: {self.trs.label()}")
        if self.phs is not None:
            parts.append(f"PHS {self.phs.sign:+d} witness: {self.phs.label()}")
        if self.chiral is not None:
            parts.append(f"CS witness: {self.chiral.name}")
        return parts


class ClassificationResult(BaseModel):
    """Class label, signature and witnesses found by classify"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    az_class: AZClass
    signature: SymmetrySignature
    witnesses: SymmetryWitnesses
    holding: List[str] = Field(default_factory=list, description="Labels of every candidate that holds")
    alternatives: List[AZClass] = Field(default_factory=list, description="Other consistent readings")

    @property
    def classes(self) -> List[AZClass]:
        return [self.az_class] + list(self.alternatives)
