"""
Command-line entry point: tenfold {table,kr,classify,invariant,sweep}
"""
import argparse
import asyncio
import csv
import io
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from loguru import logger
from pydantic import ValidationError

from . import __version__
from .agents.orchestrator import InvariantOrchestrator
from .config import get_settings
from .exceptions import SpecFileNotFoundError, TenfoldError, UsageError
from .logging_setup import configure_logging
from .models.band_models import BlochModel, ModelParams
from .models.ktheory_models import AbelianGroup, TableRow
from .models.run_models import RunConfig
from .models.symmetry_models import AZClass, ClassificationResult
from .services import ktable_service as ktable
from .services.model_zoo import available_models, default_candidates, make_model, sample_grid
from .services.spec_file import Operator, load_spec_file
from .services.symmetry_service import classify
from .services.sweep_service import SweepOrchestrator, format_float, render_csv


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting"""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--format", dest="output_format", choices=["text", "json", "csv"], default="text")

    model = argparse.ArgumentParser(add_help=False)
    source = model.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", dest="model_name", help=f"Built-in model: {', '.join(available_models())}")
    source.add_argument("--spec", dest="spec_path", help="TOML model spec file")
    model.add_argument("--set", dest="params", default="", help="Parameter overrides k=v,k=v")
    model.add_argument("--grid", dest="grid_size", type=int, default=settings.grid_size)
    model.add_argument("--tol", type=float, default=settings.symmetry_tol)
    model.add_argument("--class", dest="az_class", help="Class to evaluate (must be consistent with the witnesses)")
    model.add_argument("--fermi", type=float, default=0.0)

    parser = _Parser(prog="tenfold", description="Tenfold-way classification and bulk invariants")
    parser.add_argument("--version", action="version", version=f"tenfold {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    commands.add_parser("table", parents=[common], help="Periodic table with class metadata")

    kr = commands.add_parser("kr", parents=[common], help="KR/KQ groups of spheres and tori")
    kr.add_argument("--space", choices=["sphere", "torus"], default="sphere")
    kr.add_argument("--i", dest="degree", type=int, required=True, help="Degree i of KR^{-i}")
    kr.add_argument("--d", dest="dimension", type=int, required=True)
    kr.add_argument("--reduced", action="store_true")
    kr.add_argument("--kq", dest="quaternionic", action="store_true", help="Quaternionic KQ^{-i}")

    commands.add_parser("classify", parents=[common, model], help="Detect the symmetry class")
    commands.add_parser("invariant", parents=[common, model], help="Bulk invariant of the detected class")

    sweep = commands.add_parser("sweep", parents=[common, model], help="Invariant along a parameter range")
    sweep.add_argument("--axis", required=True, help="Parameter to sweep")
    sweep.add_argument("--range", dest="sweep_range", required=True, help="start:stop:step")
    sweep.add_argument("--out", dest="out_path")
    sweep.add_argument("--workers", type=int, default=settings.sweep_workers)
    return parser


def parse_params(text: str) -> Dict[str, float]:
    params: Dict[str, float] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"Bad --set entry {item!r}; expected name=value")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"Parameter {key.strip()} needs a real value, got {value!r}")
    return params


def parse_range(text: str) -> Tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--range expects start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--range values must be numbers, got {text!r}")
    return start, stop, step


def _attach_values(argv: Sequence[str]) -> List[str]:
    """Glue option values that start with '-' (e.g. --range -2:2:0.05) to their flag"""
    out: List[str] = []
    tokens = list(argv)
    j = 0
    while j < len(tokens):
        token = tokens[j]
        if token in ("--range", "--set") and j + 1 < len(tokens) and tokens[j + 1].startswith("-"):
            out.append(f"{token}={tokens[j + 1]}")
            j += 2
            continue
        out.append(token)
        j += 1
    return out


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    argv = sys.argv[1:] if argv is None else argv
    namespace = build_parser().parse_args(_attach_values(argv))
    values = {k: v for k, v in vars(namespace).items() if v is not None}

    if "params" in values:
        values["params"] = parse_params(values["params"])
    if "sweep_range" in values:
        values["range_start"], values["range_stop"], values["range_step"] = parse_range(values.pop("sweep_range"))
    if "az_class" in values:
        try:
            values["az_class"] = AZClass(values["az_class"])
        except ValueError:
            raise UsageError(f"Unknown class {values['az_class']!r}; expected one of {[c.value for c in AZClass]}")
    if values.get("spec_path") and not Path(values["spec_path"]).is_file():
        raise SpecFileNotFoundError(f"Spec file not found: {values['spec_path']}")

    try:
        return RunConfig(**values)
    except ValidationError as error:
        first = error.errors()[0]
        raise UsageError(f"{'.'.join(str(p) for p in first['loc']) or 'arguments'}: {first['msg']}")


# model resolution

def resolve_model(cfg: RunConfig) -> Tuple[Callable[[Dict[str, float]], BlochModel], Optional[List[Operator]]]:
    """Builder from parameter overrides to a model, plus explicit candidates from a spec file or the zoo entry"""
    if cfg.spec_path:
        spec = load_spec_file(cfg.spec_path)
        return spec.build, (spec.candidates or None)

    def build(overrides: Dict[str, float]) -> BlochModel:
        try:
            params = ModelParams(**overrides)
        except ValidationError as error:
            raise UsageError(f"Invalid parameters: {error.errors()[0]['msg']}")
        return make_model(cfg.model_name, params)

    return build, (default_candidates(cfg.model_name) or None)


# output

def _emit_table(rows: List[Dict], output_format: str, out: TextIO) -> None:
    if output_format == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows({k: "" if v is None else v for k, v in row.items()} for row in rows)
        out.write(buffer.getvalue())
        return
    headers = list(rows[0])
    cells = [[("-" if row[h] is None else str(row[h])) for h in headers] for row in rows]
    widths = [max(len(h), *(len(c[j]) for c in cells)) for j, h in enumerate(headers)]
    out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    for line in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() + "\n")


def run_table(cfg: RunConfig, out: TextIO) -> int:
    rows = []
    for az_class in ktable.REAL_CLASSES:
        for d in ktable.TABLE_DIMENSIONS:
            entry = ktable.class_metadata(az_class, d)
            row = TableRow(
                az_class=az_class,
                d=d,
                group=str(ktable.periodic_table_entry(az_class, d)),
                ko_label=None if entry.ko_label is None else entry.ko_text(),
                index_tag=entry.index_tag,
            ).model_dump(mode="json", by_alias=True)
            if cfg.output_format == "text":
                row.update(
                    number=ktable.class_number(az_class),
                    fredholm=entry.fredholm_text(),
                    homotopy=entry.homotopy_text(),
                    source=entry.source_text(),
                    cotangent=entry.cotangent_text(),
                )
            rows.append(row)
    _emit_table(rows, cfg.output_format, out)

    mismatches = ktable.verify_tables()
    for line in mismatches:
        print(f"mismatch: {line}", file=sys.stderr)
    if mismatches:
        logger.error(f"[CLI] {len(mismatches)} table mismatches")
    return 0 if not mismatches else 1


def kr_group(cfg: RunConfig) -> AbelianGroup:
    if cfg.quaternionic:
        compute = ktable.kq_sphere if cfg.space == "sphere" else ktable.kq_torus
    else:
        compute = ktable.kr_sphere if cfg.space == "sphere" else ktable.kr_torus
    return compute(cfg.degree, cfg.dimension, cfg.reduced)


def run_kr(cfg: RunConfig, out: TextIO) -> int:
    group = kr_group(cfg)
    if cfg.output_format == "json":
        out.write(json.dumps({
            "theory": "KQ" if cfg.quaternionic else "KR",
            "space": cfg.space,
            "i": cfg.degree,
            "d": cfg.dimension,
            "reduced": cfg.reduced,
            "group": str(group),
        }) + "\n")
    else:
        out.write(f"{group}\n")
    return 0


def classification_lines(result: ClassificationResult) -> List[str]:
    witnesses = result.witnesses.describe()
    head = result.az_class.value + (f" ({'; '.join(witnesses)})" if witnesses else "")
    lines = [head]
    for alternative in result.alternatives:
        lines.append(f"also consistent: {alternative.value}")
    return lines


def run_classify(cfg: RunConfig, out: TextIO) -> int:
    build, candidates = resolve_model(cfg)
    sampled = sample_grid(build(cfg.params), cfg.grid_size)
    result = classify(sampled, candidates, cfg.tol)
    if cfg.output_format == "json":
        out.write(json.dumps({
            "class": result.az_class.value,
            "signature": list(result.signature.as_tuple()),
            "witnesses": result.witnesses.describe(),
            "alternatives": [a.value for a in result.alternatives],
        }) + "\n")
    else:
        out.write("\n".join(classification_lines(result)) + "\n")
    return 0


def run_invariant(cfg: RunConfig, out: TextIO) -> int:
    build, candidates = resolve_model(cfg)
    sampled = sample_grid(build(cfg.params), cfg.grid_size)
    _, chosen, value = InvariantOrchestrator().evaluate(sampled, cfg.az_class, candidates, cfg.tol, cfg.fermi)
    logger.info(f"[CLI] {sampled.model.name}: class {chosen.value}")
    if cfg.output_format == "json":
        payload = value.model_dump(by_alias=True)
        for key in ("raw", "residual"):
            if payload.get(key) is not None:
                payload[key] = float(format_float(payload[key]))
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(
            f"kind={value.kind} value={value.value} raw={format_float(value.raw)} "
            f"grid={value.grid_size} residual={format_float(value.residual)}\n"
        )
    return 0


def run_sweep(cfg: RunConfig, out: TextIO) -> int:
    build, candidates = resolve_model(cfg)
    values = cfg.sweep_values()

    def factory(x: float) -> BlochModel:
        return build({**cfg.params, cfg.axis: x})

    orchestrator = SweepOrchestrator(workers=cfg.workers)

    async def sweep():
        rows = await orchestrator.run(factory, values, cfg.grid_size, cfg.az_class, candidates, cfg.tol, cfg.fermi)
        if cfg.out_path:
            await orchestrator.write_csv(rows, cfg.out_path)
        return rows

    rows = asyncio.run(sweep())
    if not cfg.out_path:
        out.write(render_csv(rows))
    return 0


COMMANDS: Dict[str, Callable[[RunConfig, TextIO], int]] = {
    "table": run_table,
    "kr": run_kr,
    "classify": run_classify,
    "invariant": run_invariant,
    "sweep": run_sweep,
}


def execute(cfg: RunConfig, out: Optional[TextIO] = None) -> int:
    """Run a validated configuration; returns the exit code"""
    logger.debug(f"[CLI] {cfg.command}: {cfg.model_dump(exclude_none=True)}")
    return COMMANDS[cfg.command](cfg, out or sys.stdout)


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    configure_logging(settings)
    try:
        cfg = parse_args(argv)
        configure_logging(settings, verbose=cfg.verbose)
        return execute(cfg)
    except TenfoldError as error:
        print(f"error: {error}", file=sys.stderr)
        return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
