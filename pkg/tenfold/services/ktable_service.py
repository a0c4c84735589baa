"""
Symbolic KO/KR/KQ engine, periodic-table generation and the transcribed class tables.

Every table is kept twice: generated from ``ko_point`` and transcribed
verbatim.  ``verify_tables`` compares the two.
"""
from math import comb
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..exceptions import ComplexClassError
from ..models.ktheory_models import AbelianGroup, ClassTablesEntry, IndexLike, KIndex, as_degree
from ..models.symmetry_models import AZClass

Z = AbelianGroup.integers()
Z2 = AbelianGroup.cyclic(2)
ZERO = AbelianGroup.zero()

KO_POINT: Tuple[AbelianGroup, ...] = (Z, Z2, Z2, ZERO, Z, ZERO, ZERO, ZERO)

REAL_CLASSES: Tuple[AZClass, ...] = (
    AZClass.AI, AZClass.BDI, AZClass.D, AZClass.DIII,
    AZClass.AII, AZClass.CII, AZClass.C, AZClass.CI,
)
TABLE_DIMENSIONS = (1, 2, 3)

# periodic table of topological insulators: (TRS, PHS, CS) and d = 1, 2, 3
PERIODIC_TABLE: Dict[AZClass, Tuple[Tuple[int, int, int], Tuple[str, str, str]]] = {
    AZClass.AI: ((1, 0, 0), ("0", "0", "0")),
    AZClass.BDI: ((1, 1, 1), ("Z", "0", "0")),
    AZClass.D: ((0, 1, 0), ("Z2", "Z", "0")),
    AZClass.DIII: ((-1, 1, 1), ("Z2", "Z2", "Z")),
    AZClass.AII: ((-1, 0, 0), ("0", "Z2", "Z2")),
    AZClass.CII: ((-1, -1, 1), ("Z", "0", "Z2")),
    AZClass.C: ((0, -1, 0), ("0", "Z", "0")),
    AZClass.CI: ((1, -1, 1), ("0", "0", "Z")),
}

# reduced KQ groups of spheres and tori, d = 1, 2, 3
KQ_TABLE: Dict[Tuple[str, int], Tuple[str, str, str]] = {
    ("sphere", 0): ("0", "Z2", "Z2"),
    ("torus", 0): ("0", "Z2", "Z2^4"),
    ("sphere", 1): ("Z", "0", "Z2"),
    ("torus", 1): ("Z", "Z^2", "Z^3 + Z2"),
}

# single-row reduced KR^{-i} tables on spheres, d = 1, 2, 3
KR_SPHERE_ROWS: Dict[int, Tuple[str, str, str]] = {
    0: ("0", "0", "0"),
    2: ("Z2", "Z", "0"),
    6: ("0", "Z", "0"),
    3: ("Z2", "Z2", "Z"),
    7: ("0", "0", "Z"),
    5: ("Z", "0", "Z2"),
    1: ("Z", "0", "0"),
}

# KO labels: exponent of KO(pt) each nonzero entry belongs to
KO_LABELS: Dict[AZClass, Tuple[Optional[int], ...]] = {
    AZClass.AI: (None, None, None),
    AZClass.BDI: (0, None, None),
    AZClass.D: (-2, 0, None),
    AZClass.DIII: (-2, -2, 0),
    AZClass.AII: (None, -2, -2),
    AZClass.CII: (-4, None, -2),
    AZClass.C: (None, -4, None),
    AZClass.CI: (None, None, -4),
}

# classifying spaces F_i of KR^{-i}
FREDHOLM_LABELS: Dict[AZClass, Tuple[Optional[int], ...]] = {
    AZClass.AI: (None, None, None),
    AZClass.BDI: (0, None, None),
    AZClass.D: (1, 0, None),
    AZClass.DIII: (2, 1, 0),
    AZClass.AII: (None, 2, 1),
    AZClass.CII: (4, None, 2),
    AZClass.C: (None, 4, None),
    AZClass.CI: (None, None, 4),
}

# (n, i) for pi_n(F_i)
HOMOTOPY_LABELS: Dict[AZClass, Tuple[Optional[Tuple[int, int]], ...]] = {
    AZClass.AI: (None, None, None),
    AZClass.BDI: ((0, 0), None, None),
    AZClass.D: ((1, 1), (0, 0), None),
    AZClass.DIII: ((0, 2), (1, 1), (0, 0)),
    AZClass.AII: (None, (0, 2), (1, 1)),
    AZClass.CII: ((0, 4), None, (0, 2)),
    AZClass.C: (None, (0, 4), None),
    AZClass.CI: (None, None, (0, 4)),
}

# bulk KR exponents acting as sources of the nonzero entries
SOURCE_EXPONENTS: Dict[AZClass, Tuple[Optional[int], ...]] = {
    AZClass.AI: (None, None, None),
    AZClass.BDI: (-1, None, None),
    AZClass.D: (-3, -2, None),
    AZClass.DIII: (-3, -4, -3),
    AZClass.AII: (None, -4, -5),
    AZClass.CII: (-5, None, -5),
    AZClass.C: (None, -6, None),
    AZClass.CI: (None, None, -7),
}

# cotangent-bundle sources of the nonzero entries, one Thom shift above SOURCE_EXPONENTS
COTANGENT_SOURCES: Dict[AZClass, Tuple[Optional[str], ...]] = {
    AZClass.AI: (None, None, None),
    AZClass.BDI: ("KR(TX)", None, None),
    AZClass.D: ("KR^-2(TX)", "KR(TX)", None),
    AZClass.DIII: ("KR^-2(TX)", "KR^-2(TX)", "KR(TX)"),
    AZClass.AII: (None, "KR^-2(TX)", "KR^-2(TX)"),
    AZClass.CII: ("KQ(TX)", None, "KR^-2(TX)"),
    AZClass.C: (None, "KQ(TX)", None),
    AZClass.CI: (None, None, "KQ(TX)"),
}

CH1_P = "ch1(p)"
CH1_W = "ch1(w)"
CH3_W = "ch3(w)"
CH1_W_MOD2 = "ch1^(2)(w)"
CH3_W_MOD2 = "ch3^(2)(w)"
CH1_W_2TO1 = "ch1^(2)(w)_2->1"

INDEX_TAGS: Dict[AZClass, Tuple[Optional[str], ...]] = {
    AZClass.AI: (None, None, None),
    AZClass.BDI: (CH1_W, None, None),
    AZClass.D: (CH1_W_MOD2, CH1_P, None),
    AZClass.DIII: (CH1_W_MOD2, CH1_W_2TO1, CH3_W),
    AZClass.AII: (None, CH1_W_2TO1, CH3_W_MOD2),
    AZClass.CII: (CH1_W, None, CH3_W_MOD2),
    AZClass.C: (None, CH1_P, None),
    AZClass.CI: (None, None, CH3_W),
}


def ko_point(i: IndexLike) -> AbelianGroup:
    """KO^{-i}(pt)"""
    return KO_POINT[as_degree(i) % 8]


def kr_sphere(i: IndexLike, d: int, reduced: bool = True) -> AbelianGroup:
    """KR^{-i}(S^{1,d}) = KO^{-i} + KO^{-i+d}; the reduced group drops KO^{-i}"""
    if d < 1:
        raise ValueError(f"Sphere dimension must be >= 1, got {d}")
    degree = as_degree(i)
    top = ko_point(degree - d)
    return top if reduced else ko_point(degree) + top


def torus_summands(i: IndexLike, d: int, reduced: bool = True) -> List[Tuple[int, int, AbelianGroup]]:
    """(k, multiplicity C(d, k), KO^{-i+k}) summands of KR^{-i}(T^d)"""
    if d < 1:
        raise ValueError(f"Torus dimension must be >= 1, got {d}")
    degree = as_degree(i)
    start = 1 if reduced else 0
    return [(k, comb(d, k), ko_point(degree - k)) for k in range(start, d + 1)]


def kr_torus(i: IndexLike, d: int, reduced: bool = True) -> AbelianGroup:
    total = ZERO
    for _, multiplicity, group in torus_summands(i, d, reduced):
        total = total + group.times(multiplicity)
    return total


def kq_shift(n: IndexLike) -> KIndex:
    """KQ^n = KR^{n-4}; returns the KR superscript reduced mod 8"""
    return KIndex(i=(as_degree(n) - 4) % 8)


def kq_sphere(i: IndexLike, d: int, reduced: bool = True) -> AbelianGroup:
    """KQ^{-i}(S^{1,d}) via KQ^{-i} = KR^{-i-4}"""
    return kr_sphere(-kq_shift(-as_degree(i)).i, d, reduced)


def kq_torus(i: IndexLike, d: int, reduced: bool = True) -> AbelianGroup:
    return kr_torus(-kq_shift(-as_degree(i)).i, d, reduced)


def _require_real(az_class: AZClass) -> None:
    if az_class.is_complex:
        raise ComplexClassError(f"Class {az_class.value} is complex; KR computations need a real class")


def class_number(az_class: AZClass) -> int:
    _require_real(az_class)
    return REAL_CLASSES.index(az_class)


def cs_code(az_class: AZClass) -> str:
    """Chiral column read from the top of the table down to this class"""
    number = class_number(az_class)
    return "".join(str(PERIODIC_TABLE[c][0][2]) for c in REAL_CLASSES[: number + 1])


def class_number_from_code(code: str) -> int:
    """Split the code into pairs, add 2**(last digit) of each chunk, subtract one"""
    if not code or set(code) - {"0", "1"}:
        raise ValueError(f"Code must be a non-empty binary string, got {code!r}")
    chunks = [code[j:j + 2] for j in range(0, len(code), 2)]
    return sum(2 ** int(chunk[-1]) for chunk in chunks) - 1


def periodic_table_entry(az_class: AZClass, d: int) -> AbelianGroup:
    """KO^{-(k - d)}(pt) for class number k"""
    if d < 1:
        raise ValueError(f"Dimension must be >= 1, got {d}")
    return ko_point(class_number(az_class) - d)


def class_metadata(az_class: AZClass, d: int) -> ClassTablesEntry:
    _require_real(az_class)
    if d not in TABLE_DIMENSIONS:
        raise ValueError(f"Class tables cover d = 1, 2, 3; got {d}")
    slot = d - 1
    return ClassTablesEntry(
        az_class=az_class,
        d=d,
        group=AbelianGroup.parse(PERIODIC_TABLE[az_class][1][slot]),
        ko_label=KO_LABELS[az_class][slot],
        fredholm_label=FREDHOLM_LABELS[az_class][slot],
        homotopy_label=HOMOTOPY_LABELS[az_class][slot],
        source_exponent=SOURCE_EXPONENTS[az_class][slot],
        cotangent_source=COTANGENT_SOURCES[az_class][slot],
        index_tag=INDEX_TAGS[az_class][slot],
    )


def verify_tables() -> List[str]:
    """Differences between generated and transcribed tables (empty when they agree)"""
    mismatches: List[str] = []

    for az_class in REAL_CLASSES:
        for d in TABLE_DIMENSIONS:
            generated = periodic_table_entry(az_class, d)
            entry = class_metadata(az_class, d)
            if generated != entry.group:
                mismatches.append(f"periodic table {az_class.value} d={d}: {generated} != {entry.group}")
            slots = (entry.ko_label, entry.fredholm_label, entry.homotopy_label,
                     entry.source_exponent, entry.cotangent_source, entry.index_tag)
            if generated.is_trivial() != all(s is None for s in slots):
                mismatches.append(f"metadata {az_class.value} d={d} does not match emptiness of {generated}")
            if entry.ko_label is not None and ko_point(-entry.ko_label) != generated:
                mismatches.append(f"KO label {entry.ko_text()} of {az_class.value} d={d} != {generated}")
            if generated == Z2 and entry.ko_label != -2:
                mismatches.append(f"Z2 entry {az_class.value} d={d} carries {entry.ko_text()}")
            if entry.source_exponent is not None:
                if kr_sphere(-entry.source_exponent, d) != generated:
                    mismatches.append(f"source KR^{entry.source_exponent} of {az_class.value} d={d} != {generated}")
            if entry.cotangent_source is not None:
                cotangent = entry.cotangent_exponent()
                if cotangent != entry.ko_label:
                    mismatches.append(
                        f"cotangent {entry.cotangent_source} of {az_class.value} d={d} != {entry.ko_text()}"
                    )
                if entry.source_exponent is None or entry.source_exponent != cotangent - d:
                    mismatches.append(
                        f"cotangent {entry.cotangent_source} of {az_class.value} d={d} "
                        f"does not shift to {entry.source_text()}"
                    )

    for az_class in REAL_CLASSES:
        for d in (1, 2):
            nxt = REAL_CLASSES[(class_number(az_class) + 1) % 8]
            if periodic_table_entry(nxt, d + 1) != periodic_table_entry(az_class, d):
                mismatches.append(f"diagonal {az_class.value} d={d} -> {nxt.value} d={d + 1}")
        if class_number_from_code(cs_code(az_class)) != class_number(az_class):
            mismatches.append(f"binary code {cs_code(az_class)} of {az_class.value}")

    for (space, i), row in KQ_TABLE.items():
        compute = kq_sphere if space == "sphere" else kq_torus
        for d, text in zip(TABLE_DIMENSIONS, row):
            if compute(i, d, True) != AbelianGroup.parse(text):
                mismatches.append(f"KQ^-{i} {space} d={d}: {compute(i, d, True)} != {text}")

    for i, row in KR_SPHERE_ROWS.items():
        for d, text in zip(TABLE_DIMENSIONS, row):
            if kr_sphere(i, d, True) != AbelianGroup.parse(text):
                mismatches.append(f"KR^-{i} sphere d={d}: {kr_sphere(i, d, True)} != {text}")

    for i, expected in enumerate((Z, Z2, Z2, ZERO, Z, ZERO, ZERO, ZERO)):
        if ko_point(i) != expected:
            mismatches.append(f"KO^-{i}(pt)")

    if mismatches:
        logger.warning(f"[KTable] {len(mismatches)} table mismatches")
    else:
        logger.info("[KTable] Generated tables agree with the transcriptions")
    return mismatches
