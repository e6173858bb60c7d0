"""Pydantic schemas for input files and run reports."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from umt.errors import PreconditionError
from umt.filters.core import Filter, SetFamily, generate_filter, principal
from umt.logic.parser import parse_formula
from umt.logic.syntax import Formula, Language
from umt.mostowski.model import EpsilonModel
from umt.reports import CheckReport, render
from umt.saturation.reversals import OrderReversal
from umt.semantics.structures import Structure
from umt.starmap.context import StarMapContext
from umt.ultraproduct.products import IndexedFamily

ModelT = TypeVar("ModelT", bound=BaseModel)


# ============================================================================
# Base schemas with common configuration
# ============================================================================


class UmtFileModel(BaseModel):
    """Base model for input files: unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


def load_file(path: Union[str, Path], model: Type[ModelT]) -> ModelT:
    """Read a YAML or JSON file and validate it against ``model``.

    Raises:
        PreconditionError: If the file is missing or does not match the schema
    """
    path = Path(path)
    if not path.exists():
        raise PreconditionError("Input file not found", str(path))
    with open(path) as f:
        data = yaml.safe_load(f)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise PreconditionError(f"Invalid {model.__name__} in {path}", e.errors(include_url=False)) from None


# ============================================================================
# Structures and families
# ============================================================================


class LanguageSpec(UmtFileModel):
    relations: Dict[str, int] = Field(default_factory=dict)
    functions: Dict[str, int] = Field(default_factory=dict)


class StructureFile(UmtFileModel):
    """A finite structure; each function row lists the arguments followed by the value."""

    language: LanguageSpec = Field(default_factory=LanguageSpec)
    universe: List[str] = Field(..., min_length=1)
    relations: Dict[str, List[List[str]]] = Field(default_factory=dict)
    functions: Dict[str, List[List[str]]] = Field(default_factory=dict)

    def to_domain(self) -> Structure:
        language = Language(self.language.relations, self.language.functions)
        tables = {}
        for name, rows in self.functions.items():
            table = {}
            for row in rows:
                if not row:
                    raise PreconditionError(f"Function {name} has an empty row")
                table[tuple(row[:-1])] = row[-1]
            tables[name] = table
        return Structure(language, tuple(self.universe), {n: frozenset(map(tuple, r)) for n, r in self.relations.items()}, tables)

    @classmethod
    def from_domain(cls, s: Structure) -> "StructureFile":
        return cls(
            language=LanguageSpec(relations=s.language.relations, functions=s.language.functions),
            universe=list(s.universe),
            relations={n: sorted(list(r) for r in rows) for n, rows in s.relations.items()},
            functions={n: sorted([*args, v] for args, v in t.items()) for n, t in s.functions.items()},
        )


class FamilyFile(UmtFileModel):
    index_set: List[str] = Field(..., min_length=1)
    members: List[List[str]] = Field(default_factory=list)

    def to_domain(self) -> SetFamily:
        return SetFamily.of(self.index_set, self.members)


class UltrafilterFile(UmtFileModel):
    """An ultrafilter by principal point, or by a generating member list."""

    index_set: Optional[List[str]] = None
    principal: Optional[str] = None
    members: Optional[List[List[str]]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "UltrafilterFile":
        if (self.principal is None) == (self.members is None):
            raise ValueError("give exactly one of 'principal' or 'members'")
        return self

    def to_filter(self, index_set: Optional[List[str]] = None) -> Filter:
        indices = index_set if index_set is not None else self.index_set
        if not indices:
            raise PreconditionError("Ultrafilter needs an index set")
        if self.principal is not None:
            return principal(indices, self.principal)
        return generate_filter(SetFamily.of(indices, self.members or []))

    def to_domain(self, index_set: Optional[List[str]] = None) -> Filter:
        """The ultrafilter itself.

        Raises:
            PreconditionError: If the members generate a filter that is not ultra
        """
        return self.to_filter(index_set).as_ultrafilter()


class IndexedFamilyFile(UmtFileModel):
    """Structure files keyed by index, or one structure raised to a power."""

    index_set: List[str] = Field(..., min_length=1)
    structures: Optional[Dict[str, StructureFile]] = None
    power: Optional[StructureFile] = None

    @model_validator(mode="after")
    def _one_form(self) -> "IndexedFamilyFile":
        if (self.structures is None) == (self.power is None):
            raise ValueError("give exactly one of 'structures' or 'power'")
        return self

    def to_domain(self) -> IndexedFamily:
        if self.power is not None:
            return IndexedFamily.power(self.power.to_domain(), self.index_set)
        return IndexedFamily(tuple(self.index_set), {i: s.to_domain() for i, s in (self.structures or {}).items()})


class CompactnessFile(UmtFileModel):
    """Sentences plus one model per nonempty subset, keyed by sentence positions like ``[0,1]``."""

    sentences: List[str] = Field(..., min_length=1)
    models: Dict[str, StructureFile]

    def to_domain(self) -> Tuple[List[Formula], Dict[frozenset, Structure]]:
        structures = {k: s.to_domain() for k, s in self.models.items()}
        if not structures:
            raise PreconditionError("No models given")
        language = next(iter(structures.values())).language
        sentences = [parse_formula(text, language) for text in self.sentences]
        models = {}
        for key, s in structures.items():
            positions = _subset_key(key)
            if any(not isinstance(p, int) or p >= len(sentences) for p in positions):
                raise PreconditionError("Model key names an unknown sentence", key)
            models[frozenset(sentences[p] for p in positions)] = s
        return sentences, models


class StarContextFile(UmtFileModel):
    base: List[str] = Field(..., min_length=1)
    rank_bound: int = Field(..., ge=0)
    index_set: List[str] = Field(default_factory=lambda: ["0"], min_length=1)
    ultrafilter: Optional[UltrafilterFile] = None
    canonicalize: Optional[bool] = None

    def to_domain(self, canonicalize: Optional[bool] = None) -> StarMapContext:
        point = None
        if self.ultrafilter is not None:
            point = self.ultrafilter.to_domain(self.index_set).principal_point
        flag = canonicalize if canonicalize is not None else self.canonicalize
        return StarMapContext.create(self.base, self.rank_bound, self.index_set, point, flag)


# ============================================================================
# Order reversals and epsilon-models
# ============================================================================


def _ground_value(text: str) -> Union[int, str]:
    return int(text) if text.isdigit() else text


def _subset_key(key: str) -> List[Union[int, str]]:
    inner = key.strip()
    if not (inner.startswith("[") and inner.endswith("]")):
        raise ValueError(f"subset key {key!r} is not in bracket notation")
    body = inner[1:-1].strip()
    return [_ground_value(part.strip().strip("\"'")) for part in body.split(",")] if body else []


class ReversalFile(UmtFileModel):
    """An order reversal; digit-only ground elements are read as integers."""

    ground_set: List[str]
    index_set: List[str] = Field(..., min_length=1)
    p: Dict[str, List[str]]
    chain: Optional[List[List[str]]] = None

    @field_validator("ground_set", mode="before")
    @classmethod
    def _stringify(cls, value: Any) -> Any:
        return [str(v) for v in value] if isinstance(value, list) else value

    @field_validator("p")
    @classmethod
    def _keys_parse(cls, value: Dict[str, List[str]]) -> Dict[str, List[str]]:
        for key in value:
            _subset_key(key)
        return value

    def to_domain(self) -> OrderReversal:
        ground = tuple(_ground_value(g) for g in self.ground_set)
        mapping = {frozenset(_subset_key(k)): frozenset(v) for k, v in self.p.items()}
        return OrderReversal(ground, tuple(self.index_set), mapping)


class EpsilonModelFile(UmtFileModel):
    carrier: List[str] = Field(..., min_length=1)
    E: List[List[str]] = Field(default_factory=list)
    base: str

    @field_validator("E")
    @classmethod
    def _pairs(cls, value: List[List[str]]) -> List[List[str]]:
        for edge in value:
            if len(edge) != 2:
                raise ValueError(f"edge {edge} is not a pair")
        return value

    def to_domain(self) -> EpsilonModel:
        return EpsilonModel(tuple(self.carrier), frozenset((b, a) for b, a in self.E), self.base)


# ============================================================================
# Run reports
# ============================================================================


class RunReport(BaseModel):
    """Machine-readable outcome of one CLI subcommand."""

    subcommand: str
    verdict: str = Field(..., pattern="^(pass|fail|error)$")
    counterexamples: List[Dict[str, Any]] = Field(default_factory=list)
    statistics: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    tool_version: str
    result: Any = None

    @classmethod
    def from_checks(
        cls,
        subcommand: str,
        reports: List[CheckReport],
        tool_version: str,
        seed: Optional[int] = None,
        result: Any = None,
    ) -> "RunReport":
        counterexamples: List[Dict[str, Any]] = []
        statistics: Dict[str, Any] = {}
        for report in reports:
            data = report.to_dict()
            counterexamples.extend({"check": report.name, **c} for c in data["counterexamples"])
            statistics[report.name] = data["statistics"]
        return cls(
            subcommand=subcommand,
            verdict="fail" if counterexamples else "pass",
            counterexamples=counterexamples,
            statistics=statistics,
            seed=seed,
            tool_version=tool_version,
            result=render(result),
        )

    @classmethod
    def error(cls, subcommand: str, message: str, tool_version: str, witness: Any = None) -> "RunReport":
        return cls(
            subcommand=subcommand,
            verdict="error",
            counterexamples=[{"check": "input", "detail": message, "witness": render(witness)}],
            tool_version=tool_version,
        )

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "error": 2}[self.verdict]
