"""
Exception hierarchy for the tenfold toolkit.

Library code raises these; only the CLI maps them onto process exit codes.
"""
from typing import Optional


class TenfoldError(Exception):
    """Base class for every error raised by tenfold"""

    exit_code: int = 1

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.__class__.__name__)
        self.context = context


# numkit

class NotHermitianError(TenfoldError):
    """Matrix fails the Hermiticity check"""


class NoConvergenceError(TenfoldError):
    """Jacobi sweeps exhausted before the off-diagonal norm vanished"""


class NotAntisymmetricError(TenfoldError):
    """Matrix is not real antisymmetric"""


class OddDimensionError(TenfoldError):
    """Pfaffian requested for an odd-dimensional matrix"""


class MatrixTooLargeError(TenfoldError):
    """Recursive Pfaffian expansion is limited to small matrices"""


# models

class UnknownModelError(TenfoldError):
    """Model name is not in the zoo"""


class MissingParamError(TenfoldError):
    """A required model parameter was not supplied"""


class GridTooSmallError(TenfoldError):
    """Grid size below the minimum of 4 points per axis"""


class NotEvenError(TenfoldError):
    """Grid size must be even so that k = 0 and k = pi are both sampled"""


class DimensionMismatchError(TenfoldError):
    """Operator size does not match the number of bands"""


class SpecFileError(TenfoldError):
    """Model spec file could not be parsed"""

    exit_code = 2


class SpecFileNotFoundError(TenfoldError):
    """Model spec file does not exist"""

    exit_code = 3


# symmetry

class InconsistentSignatureError(TenfoldError):
    """Signature does not correspond to any Altland-Zirnbauer class"""


class GaplessModelError(TenfoldError):
    """The sampled model closes its gap on the grid"""

    exit_code = 4


class AmbiguousWitnessError(TenfoldError):
    """Two holding witnesses of the same kind disagree in sign"""

    def __init__(self, message: str = "", first: Optional[str] = None, second: Optional[str] = None):
        super().__init__(message, first=first, second=second)
        self.first = first
        self.second = second


class NoCandidatesError(TenfoldError):
    """No candidate operators given and no built-in sweep for this band count"""


# ktable

class ComplexClassError(TenfoldError):
    """Class number requested for a complex class (A or AIII)"""


# invariants

class InconsistentOccupationError(TenfoldError):
    """Number of occupied bands changes across the grid"""


class NotChiralError(TenfoldError):
    """Chiral operator does not anticommute with the flattened Hamiltonian"""


class OddSplitError(TenfoldError):
    """Chiral eigenspaces have unequal dimension"""


class NonConvergentError(TenfoldError):
    """Numerical result is not trustworthy at this grid resolution"""

    exit_code = 5


class SingularOverlapError(NonConvergentError):
    """Link variable magnitude collapsed on a plaquette"""


class NotSmoothError(NonConvergentError):
    """Chiral block changes too quickly between neighbouring grid points"""


class NoRealityConstraintError(TenfoldError):
    """mod 2 reduction requested without a compatible antiunitary symmetry"""


class NotClassDError(TenfoldError):
    """Particle-hole witness with sign +1 is required"""


class NotTimeReversalError(TenfoldError):
    """Time-reversal witness with sign -1 is required"""


class OddOccupationError(TenfoldError):
    """Kramers pairing needs an even number of occupied bands"""


class UnsupportedInvariantError(TenfoldError):
    """No numerical route exists for this class and dimension"""


# cli

class UsageError(TenfoldError):
    """Invalid command-line usage"""

    exit_code = 2
