"""
Model spec files.

A spec file is TOML with a ``[model]`` table (name, dim, optional bands and
terms), a ``[params]`` table of reals and optional ``[symmetry.trs]``,
``[symmetry.phs]`` and ``[symmetry.cs]`` operator entries::

    [model]
    name = "custom_chain"
    dim = 1
    bands = 2
    terms = ["-mu * pauli:z", "-t * cos(kx) * pauli:z", "delta * sin(kx) * pauli:y"]

    [params]
    mu = 0.5
    t = 1.0
    delta = 1.0

    [symmetry.phs]
    u = "pauli:x"
    antiunitary = true

Terms follow ``coeff * trig(k_axis) * ... * pauli:<string>``; the coefficient
is a number or a parameter name (optionally negated) and trig factors are
``cos(...)``/``sin(...)`` of ``kx``, ``ky`` or ``kz``.
"""
import re

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Dict, List, Literal, Mapping, Optional, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..exceptions import SpecFileError, SpecFileNotFoundError
from ..models.band_models import BlochModel, ModelParams
from ..models.symmetry_models import AntiUnitaryOp, UnitaryOp
from .model_zoo import ZOO, make_model
from .numkit import pauli_string

AXES = {"k": 0, "kx": 0, "k1": 0, "ky": 1, "k2": 1, "kz": 2, "k3": 2}
_TRIG = re.compile(r"^(-?)(cos|sin)\(\s*([a-z0-9]+)\s*\)$")
_PHASES = {"": 1.0, "+": 1.0, "-": -1.0, "i": 1j, "+i": 1j, "-i": -1j}

Operator = Union[AntiUnitaryOp, UnitaryOp]


class TrigFactor(BaseModel):
    """cos or sin of one momentum component"""
    model_config = ConfigDict(frozen=True)

    func: Literal["cos", "sin"]
    axis: int = Field(..., ge=0, le=2)


class Term(BaseModel):
    """coefficient * product of trig factors * Pauli string"""
    model_config = ConfigDict(frozen=True)

    sign: float = 1.0
    coefficient: Union[float, str] = Field(..., description="Number or parameter name")
    trig: Tuple[TrigFactor, ...] = ()
    pauli: str

    def value(self, params: Mapping[str, float]) -> float:
        if isinstance(self.coefficient, str):
            if self.coefficient not in params:
                raise SpecFileError(f"Term uses undefined parameter {self.coefficient!r}")
            return self.sign * float(params[self.coefficient])
        return self.sign * self.coefficient


def parse_operator(text: str) -> Tuple[np.ndarray, str]:
    """``[phase *] pauli:<factors>`` -> (matrix, label)"""
    text = text.strip()
    if "pauli:" not in text:
        raise SpecFileError(f"Operator {text!r} must use the pauli: notation")
    prefix, label = text.split("pauli:", 1)
    prefix = prefix.strip().rstrip("*").strip().replace(" ", "")
    if prefix in _PHASES:
        phase = _PHASES[prefix]
    else:
        try:
            phase = complex(prefix.replace("i", "j"))
        except ValueError as error:
            raise SpecFileError(f"Cannot parse operator phase {prefix!r}") from error
    try:
        matrix = phase * pauli_string(label)
    except ValueError as error:
        raise SpecFileError(str(error)) from error
    return matrix, text


def parse_term(text: str, dim: int) -> Term:
    if "pauli:" not in text:
        raise SpecFileError(f"Term {text!r} has no pauli: factor")
    head, label = text.split("pauli:", 1)
    factors = [f.strip() for f in head.strip().rstrip("*").split("*") if f.strip()]
    sign = 1.0
    coefficient: Union[float, str] = 1.0
    trig: List[TrigFactor] = []
    seen_coefficient = False
    for factor in factors:
        match = _TRIG.match(factor)
        if match:
            negate, func, axis_name = match.groups()
            if axis_name not in AXES or AXES[axis_name] >= dim:
                raise SpecFileError(f"Momentum {axis_name!r} is not valid in {dim}d")
            if negate:
                sign = -sign
            trig.append(TrigFactor(func=func, axis=AXES[axis_name]))
            continue
        if seen_coefficient:
            raise SpecFileError(f"Term {text!r} has more than one coefficient")
        seen_coefficient = True
        if factor.startswith("-"):
            sign = -sign
            factor = factor[1:].strip()
        elif factor.startswith("+"):
            factor = factor[1:].strip()
        try:
            coefficient = float(factor)
        except ValueError:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", factor):
                raise SpecFileError(f"Cannot parse coefficient {factor!r}")
            coefficient = factor
    try:
        pauli_string(label)
    except ValueError as error:
        raise SpecFileError(str(error)) from error
    return Term(sign=sign, coefficient=coefficient, trig=tuple(trig), pauli=label.strip())


def terms_model(name: str, dim: int, terms: List[Term], params: Mapping[str, float]) -> BlochModel:
    """Bloch model from a list of Pauli terms"""
    matrices = [pauli_string(term.pauli) for term in terms]
    sizes = {m.shape[0] for m in matrices}
    if len(sizes) != 1:
        raise SpecFileError(f"Terms of {name} mix Pauli strings of sizes {sorted(sizes)}")
    bands = sizes.pop()
    amplitudes = [term.value(params) for term in terms]

    def hamiltonian(ks: np.ndarray) -> np.ndarray:
        total = np.zeros(ks.shape[:-1] + (bands, bands), dtype=complex)
        for term, amplitude, matrix in zip(terms, amplitudes, matrices):
            coeff = np.full(ks.shape[:-1], amplitude, dtype=float)
            for factor in term.trig:
                coeff = coeff * (np.cos if factor.func == "cos" else np.sin)(ks[..., factor.axis])
            total = total + coeff[..., None, None] * matrix
        return total

    return BlochModel(name=name, dim=dim, bands=bands, params=dict(params), hamiltonian=hamiltonian)


class ModelSpec(BaseModel):
    """Parsed contents of a spec file"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    dim: Optional[int] = None
    bands: Optional[int] = None
    params: Dict[str, float] = Field(default_factory=dict)
    terms: List[Term] = Field(default_factory=list)
    candidates: List[Operator] = Field(default_factory=list)

    def build(self, overrides: Optional[Mapping[str, float]] = None) -> BlochModel:
        params = {**self.params, **(overrides or {})}
        if self.terms:
            model = terms_model(self.name, self.dim, self.terms, params)
            if self.bands is not None and model.bands != self.bands:
                raise SpecFileError(f"Terms give {model.bands} bands, [model] declares {self.bands}")
            return model
        return make_model(self.name, ModelParams(**params))


def _operator_entry(kind: str, entry: Mapping) -> Operator:
    if "u" not in entry:
        raise SpecFileError(f"[symmetry.{kind}] needs a u = \"pauli:...\" entry")
    matrix, label = parse_operator(str(entry["u"]))
    antiunitary = bool(entry.get("antiunitary", kind != "cs"))
    try:
        if kind == "cs":
            if antiunitary:
                raise SpecFileError("[symmetry.cs] must be unitary (antiunitary = false)")
            return UnitaryOp(S=matrix, name=label)
        if not antiunitary:
            raise SpecFileError(f"[symmetry.{kind}] must be antiunitary")
        return AntiUnitaryOp(U=matrix, kind=kind.upper(), name=label)
    except ValidationError as error:
        raise SpecFileError(f"Invalid operator in [symmetry.{kind}]: {error.errors()[0]['msg']}") from error


def parse_spec(data: Mapping) -> ModelSpec:
    model_table = data.get("model")
    if not isinstance(model_table, Mapping) or "name" not in model_table:
        raise SpecFileError("Spec file needs a [model] table with a name")
    name = str(model_table["name"])
    raw_terms = model_table.get("terms", data.get("terms", []))
    dim = model_table.get("dim")
    if raw_terms and dim is None:
        raise SpecFileError("Term models must declare [model] dim")
    if dim is None and name in ZOO:
        dim = ZOO[name].dim
    if raw_terms and name in ZOO:
        logger.info(f"[SpecFile] Terms override built-in model {name}")

    params_table = data.get("params", {})
    try:
        params = {str(k): float(v) for k, v in params_table.items()}
    except (TypeError, ValueError) as error:
        raise SpecFileError(f"[params] must hold real numbers: {error}") from error

    terms = [parse_term(str(t), int(dim)) for t in raw_terms]
    candidates: List[Operator] = []
    for kind in ("trs", "phs", "cs"):
        entry = data.get("symmetry", {}).get(kind)
        if entry is not None:
            candidates.append(_operator_entry(kind, entry))

    return ModelSpec(
        name=name,
        dim=int(dim) if dim is not None else None,
        bands=model_table.get("bands"),
        params=params,
        terms=terms,
        candidates=candidates,
    )


def load_spec_file(path: Union[str, Path]) -> ModelSpec:
    path = Path(path)
    if not path.is_file():
        raise SpecFileNotFoundError(f"Spec file not found: {path}")
    try:
        with path.open("rb") as handle:
            data = tomllib.load(handle)
    except tomllib.TOMLDecodeError as error:
        raise SpecFileError(f"Cannot parse {path}: {error}") from error
    spec = parse_spec(data)
    logger.info(f"[SpecFile] Loaded {spec.name} from {path} ({len(spec.terms)} terms, {len(spec.candidates)} operators)")
    return spec
