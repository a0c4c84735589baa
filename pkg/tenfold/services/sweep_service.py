"""
Async parameter sweeps over a model family
"""
import asyncio
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Callable, List, Optional, Sequence, Union

import aiofiles
from loguru import logger

from ..config import get_settings
from ..exceptions import AmbiguousWitnessError, GaplessModelError, NonConvergentError, TenfoldError
from ..models.band_models import BlochModel
from ..models.run_models import SweepRow
from ..models.symmetry_models import AntiUnitaryOp, AZClass, UnitaryOp
from .model_zoo import sample_grid

CSV_COLUMNS = ("param", "kind", "value", "raw", "residual", "gap")

ModelFactory = Callable[[float], BlochModel]
Operator = Union[AntiUnitaryOp, UnitaryOp]


def format_float(value: Optional[float]) -> str:
    """12 significant digits, empty for missing values"""
    if value is None:
        return ""
    text = f"{value:.12g}"
    return "0" if text == "-0" else text


def render_csv(rows: Sequence[SweepRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join([
            format_float(row.param),
            row.kind,
            "" if row.value is None else str(row.value),
            format_float(row.raw),
            format_float(row.residual),
            format_float(row.gap),
        ]))
    return "\n".join(lines) + "\n"


class SweepOrchestrator:
    """
    Evaluates one invariant per parameter value on a worker pool.
    Rows come back in sweep order whatever the completion order.
    """

    def __init__(self, workers: Optional[int] = None):
        from ..agents.orchestrator import InvariantOrchestrator

        self.workers = workers or get_settings().sweep_workers
        self.invariants = InvariantOrchestrator()
        logger.info(f"🧭 Sweep orchestrator initialized ({self.workers} workers)")

    def evaluate_point(
        self,
        factory: ModelFactory,
        value: float,
        grid_size: int,
        az_class: Optional[AZClass] = None,
        candidates: Optional[Sequence[Operator]] = None,
        tol: Optional[float] = None,
        fermi: float = 0.0,
    ) -> SweepRow:
        sampled = sample_grid(factory(value), grid_size)
        gap = sampled.min_gap
        if sampled.is_gapless(get_settings().gap_threshold):
            logger.info(f"[SweepOrchestrator] {value:.12g}: gapless (min_gap={gap:.3e})")
            return SweepRow(param=value, kind="gapless", gap=gap)
        try:
            _, _, result = self.invariants.evaluate(sampled, az_class, candidates, tol, fermi)
        except GaplessModelError:
            return SweepRow(param=value, kind="gapless", gap=gap)
        except NonConvergentError as error:
            logger.warning(f"[SweepOrchestrator] {value:.12g}: {error}")
            return SweepRow(param=value, kind="nonconvergent", gap=gap)
        except AmbiguousWitnessError as error:
            logger.warning(f"[SweepOrchestrator] {value:.12g}: {error}")
            return SweepRow(param=value, kind="ambiguous", gap=gap)
        except TenfoldError as error:
            logger.warning(f"[SweepOrchestrator] {value:.12g}: {type(error).__name__}: {error}")
            return SweepRow(param=value, kind="error", gap=gap)
        return SweepRow(
            param=value,
            kind=result.kind,
            value=result.value,
            raw=result.raw,
            residual=result.residual,
            gap=gap,
        )

    async def run(
        self,
        factory: ModelFactory,
        values: Sequence[float],
        grid_size: int,
        az_class: Optional[AZClass] = None,
        candidates: Optional[Sequence[Operator]] = None,
        tol: Optional[float] = None,
        fermi: float = 0.0,
    ) -> List[SweepRow]:
        logger.info(f"[SweepOrchestrator] Sweeping {len(values)} points on a {grid_size}-point grid")
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            tasks = [
                loop.run_in_executor(
                    pool,
                    partial(self.evaluate_point, factory, value, grid_size, az_class, candidates, tol, fermi),
                )
                for value in values
            ]
            rows = await asyncio.gather(*tasks)
        logger.info(f"[SweepOrchestrator] Completed {len(rows)} points")
        return list(rows)

    async def write_csv(self, rows: Sequence[SweepRow], path: str) -> None:
        async with aiofiles.open(path, "w", newline="\n") as handle:
            await handle.write(render_csv(rows))
        logger.info(f"[SweepOrchestrator] Wrote {len(rows)} rows to {path}")
