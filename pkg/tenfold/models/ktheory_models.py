"""
Pydantic models for the K-theory table engine
"""
import re
from collections import Counter
from typing import Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .symmetry_models import AZClass

_TERM = re.compile(r"^Z(\d*)(?:\^(\d+))?$")
COTANGENT_PATTERN = re.compile(r"^(KR|KQ)(?:\^(-?\d+))?\(TX\)$")


class AbelianGroup(BaseModel):
    """Finitely generated abelian group Z^r + (torsion)"""
    model_config = ConfigDict(frozen=True)

    free_rank: int = Field(0, ge=0, description="Number of Z summands")
    torsion: Tuple[int, ...] = Field(default_factory=tuple, description="Orders of the cyclic torsion summands")

    @field_validator("torsion", mode="before")
    @classmethod
    def canonical_torsion(cls, value):
        orders = tuple(sorted(int(v) for v in value))
        if any(v < 2 for v in orders):
            raise ValueError(f"Torsion orders must be >= 2, got {orders}")
        return orders

    @classmethod
    def zero(cls) -> "AbelianGroup":
        return cls()

    @classmethod
    def integers(cls, rank: int = 1) -> "AbelianGroup":
        return cls(free_rank=rank)

    @classmethod
    def cyclic(cls, order: int, copies: int = 1) -> "AbelianGroup":
        return cls(torsion=(order,) * copies)

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """Parse ``"Z^3 + Z2"`` style notation; ``"0"`` is the trivial group"""
        text = text.strip()
        if text in ("0", ""):
            return cls.zero()
        rank = 0
        torsion = []
        for term in text.split("+"):
            match = _TERM.match(term.strip())
            if not match:
                raise ValueError(f"Cannot parse group term {term!r}")
            order, power = match.group(1), int(match.group(2) or 1)
            if order:
                torsion.extend([int(order)] * power)
            else:
                rank += power
        return cls(free_rank=rank, torsion=tuple(torsion))

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup(free_rank=self.free_rank + other.free_rank, torsion=self.torsion + other.torsion)

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return self.direct_sum(other)

    def times(self, copies: int) -> "AbelianGroup":
        if copies < 0:
            raise ValueError("Multiplicity must be non-negative")
        return AbelianGroup(free_rank=self.free_rank * copies, torsion=self.torsion * copies)

    def contains_summand(self, other: "AbelianGroup") -> bool:
        if other.free_rank > self.free_rank:
            return False
        mine = Counter(self.torsion)
        return all(mine[order] >= count for order, count in Counter(other.torsion).items())

    def __str__(self) -> str:
        if self.is_trivial():
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for order, count in sorted(Counter(self.torsion).items()):
            parts.append(f"Z{order}" if count == 1 else f"Z{order}^{count}")
        return " + ".join(parts)


class KIndex(BaseModel):
    """Degree i of KO^{-i}, canonical modulo Bott periodicity 8"""
    model_config = ConfigDict(frozen=True)

    i: int

    @property
    def reduced(self) -> int:
        return self.i % 8

    def __eq__(self, other) -> bool:
        if isinstance(other, KIndex):
            return self.reduced == other.reduced
        if isinstance(other, int):
            return self.reduced == other % 8
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.reduced)


IndexLike = Union[int, KIndex]


def as_degree(i: IndexLike) -> int:
    return i.i if isinstance(i, KIndex) else int(i)


class ClassTablesEntry(BaseModel):
    """Hard-coded table metadata for one (class, dimension) cell"""
    model_config = ConfigDict(frozen=True)

    az_class: AZClass = Field(..., serialization_alias="class")
    d: int = Field(..., ge=1, le=3)
    group: AbelianGroup
    ko_label: Optional[int] = Field(None, description="Exponent of KO (0, -2 or -4); None for an empty cell")
    fredholm_label: Optional[int] = Field(None, description="i of the classifying space F_i")
    homotopy_label: Optional[Tuple[Literal[0, 1], int]] = Field(None, description="(n, i) for pi_n(F_i)")
    source_exponent: Optional[int] = Field(None, description="Exponent of the bulk KR source")
    cotangent_source: Optional[str] = Field(None, description="Cotangent-bundle group, e.g. KR^-2(TX)")
    index_tag: Optional[str] = Field(None, description="Topological index formula tag")

    def ko_text(self) -> str:
        return "-" if self.ko_label is None else f"KO^{self.ko_label}"

    def fredholm_text(self) -> str:
        return "-" if self.fredholm_label is None else f"F{self.fredholm_label}"

    def homotopy_text(self) -> str:
        if self.homotopy_label is None:
            return "-"
        n, i = self.homotopy_label
        return f"pi{n}(F{i})"

    def source_text(self) -> str:
        return "-" if self.source_exponent is None else f"KR^{self.source_exponent}"

    def cotangent_text(self) -> str:
        return "-" if self.cotangent_source is None else self.cotangent_source

    def cotangent_exponent(self) -> Optional[int]:
        """KR exponent of the cotangent source, reading KQ as KR^-4"""
        if self.cotangent_source is None:
            return None
        match = COTANGENT_PATTERN.fullmatch(self.cotangent_source)
        if match is None:
            raise ValueError(f"Unreadable cotangent source {self.cotangent_source!r}")
        exponent = int(match.group(2) or 0)
        return exponent - 4 if match.group(1) == "KQ" else exponent


class TableRow(BaseModel):
    """One emitted line of the periodic table"""
    az_class: AZClass = Field(..., serialization_alias="class")
    d: int
    group: str
    ko_label: Optional[str] = None
    index_tag: Optional[str] = None
