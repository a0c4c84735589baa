"""
Base class for the invariant calculators
"""
from abc import ABC, abstractmethod
from typing import Any, Generic, Optional, TypeVar

from loguru import logger

from ..config import get_settings
from ..exceptions import NonConvergentError, TenfoldError
from ..models.invariant_models import InvariantValue

T = TypeVar("T")


class BaseInvariantAgent(ABC, Generic[T]):
    """Shared logging and rounding policy of every invariant calculator"""

    def __init__(self, name: str, residual_threshold: Optional[float] = None):
        self.name = name
        self.residual_threshold = (
            get_settings().residual_threshold if residual_threshold is None else residual_threshold
        )
        logger.debug(f"[{self.name}] Initialized (residual threshold {self.residual_threshold})")

    @abstractmethod
    def get_index_tag(self) -> str:
        """Topological index formula this agent evaluates"""
        pass

    @abstractmethod
    def compute(self, subject: T, **kwargs: Any) -> InvariantValue:
        """Evaluate the invariant on the subject"""
        pass

    def execute(self, subject: T, **kwargs: Any) -> InvariantValue:
        """Run ``compute`` with logging; library errors propagate to the caller"""
        try:
            logger.info(f"[{self.name}] Computing {self.get_index_tag()}")
            result = self.compute(subject, **kwargs)
            logger.info(
                f"[{self.name}] {result.kind} value={result.value} raw={result.raw:.12g} "
                f"grid={result.grid_size} residual={result.residual:.3g}"
            )
            return result
        except TenfoldError as error:
            logger.error(f"[{self.name}] {type(error).__name__}: {error}")
            raise

    def round_integer(self, raw: float, grid_size: int) -> InvariantValue:
        value = int(round(raw))
        residual = abs(raw - value)
        if residual >= self.residual_threshold:
            raise NonConvergentError(
                f"{self.name}: raw value {raw:.6f} is {residual:.3f} away from an integer "
                f"on a {grid_size}-point grid; refine the grid"
            )
        return InvariantValue(kind="Integer", value=value, raw=raw, grid=grid_size, residual=residual)

    @staticmethod
    def parity(value: int, grid_size: int, raw: Optional[float] = None) -> InvariantValue:
        bit = value % 2
        return InvariantValue(
            kind="Mod2",
            value=bit,
            raw=float(bit) if raw is None else raw,
            grid=grid_size,
            residual=0.0,
        )

    @staticmethod
    def trivial(grid_size: int) -> InvariantValue:
        return InvariantValue(kind="Trivial", value=0, raw=0.0, grid=grid_size, residual=0.0)
