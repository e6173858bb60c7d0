"""Check reports returned by every verification routine."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional


@dataclass
class Counterexample:
    """One failed instance of a checked property."""

    detail: str
    formula: Optional[Any] = None
    witness: Dict[str, Any] = field(default_factory=dict)


@dataclass
class CheckReport:
    """Outcome of a property check.

    A report fails exactly when it carries at least one counterexample.
    """

    name: str
    counterexamples: List[Counterexample] = field(default_factory=list)
    statistics: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def fail(self, detail: str, formula: Optional[Any] = None, **witness: Any) -> Counterexample:
        counterexample = Counterexample(detail=detail, formula=formula, witness=dict(witness))
        self.counterexamples.append(counterexample)
        return counterexample

    def count(self, key: str, amount: int = 1) -> None:
        self.statistics[key] = self.statistics.get(key, 0) + amount

    def merge(self, other: "CheckReport", prefix: Optional[str] = None) -> "CheckReport":
        """Fold ``other`` into this report; statistics keys get ``prefix.``."""
        tag = prefix or other.name
        self.counterexamples.extend(other.counterexamples)
        for key, value in other.statistics.items():
            self.statistics[f"{tag}.{key}"] = value
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "counterexamples": [
                {
                    "detail": c.detail,
                    "formula": render(c.formula) if c.formula is not None else None,
                    "witness": {k: render(v) for k, v in c.witness.items()},
                }
                for c in self.counterexamples
            ],
            "statistics": {k: render(v) for k, v in self.statistics.items()},
        }


def render(value: Any) -> Any:
    """Convert entities, formulas and containers into JSON-friendly values."""
    from umt.entities import Entity, format_entity
    from umt.logic.printer import format_formula
    from umt.logic.syntax import Formula, Term

    if isinstance(value, Entity):
        return format_entity(value)
    if isinstance(value, (Formula, Term)):
        return format_formula(value)
    if isinstance(value, Mapping):
        return {str(render(k)): render(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((render(v) for v in value), key=str)
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)
