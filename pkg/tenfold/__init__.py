"""
tenfold - symmetry classification, KR-theory tables and bulk invariants of gapped band Hamiltonians
"""

__version__ = "1.0.0"
__description__ = "Tenfold-way classifier, KR/KO table engine and topological invariant calculators"
