"""Finite first-order structures."""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

from umt.errors import ArityError, PreconditionError, UnknownSymbolError
from umt.logic.syntax import Language

Element = str
RelationTable = FrozenSet[Tuple[Element, ...]]
FunctionTable = Mapping[Tuple[Element, ...], Element]


@dataclass(frozen=True)
class Structure:
    """A finite structure: ordered universe plus relation and function tables.

    Element ids are opaque strings; the order of ``universe`` is the fixed
    element order used for canonical representatives.
    """

    language: Language
    universe: Tuple[Element, ...]
    relations: Dict[str, RelationTable] = field(default_factory=dict)
    functions: Dict[str, Dict[Tuple[Element, ...], Element]] = field(default_factory=dict)

    def __post_init__(self):
        universe = tuple(str(e) for e in self.universe)
        object.__setattr__(self, "universe", universe)
        if not universe:
            raise PreconditionError("A structure needs a nonempty universe")
        if len(set(universe)) != len(universe):
            raise PreconditionError("Universe elements must be distinct", universe)
        members = set(universe)
        relations = {}
        for name, arity in self.language.relations.items():
            table = frozenset(tuple(str(x) for x in row) for row in self.relations.get(name, ()))
            for row in table:
                if len(row) != arity:
                    raise ArityError(f"Relation {name} has arity {arity}, got row {row}")
                if not set(row) <= members:
                    raise PreconditionError(f"Relation {name} mentions elements outside the universe", row)
            relations[name] = table
        for name in self.relations:
            if name not in self.language.relations:
                raise UnknownSymbolError(f"Relation {name!r} is not in the language")
        functions = {}
        for name, arity in self.language.functions.items():
            if name not in self.functions:
                raise PreconditionError(f"Function {name} has no table")
            table = {tuple(str(x) for x in k): str(v) for k, v in dict(self.functions[name]).items()}
            for args in product(universe, repeat=arity):
                if args not in table:
                    raise PreconditionError(f"Function {name} is not total", args)
                if table[args] not in members:
                    raise PreconditionError(f"Function {name} leaves the universe", args)
            functions[name] = table
        for name in self.functions:
            if name not in self.language.functions:
                raise UnknownSymbolError(f"Function {name!r} is not in the language")
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "functions", functions)

    def __hash__(self) -> int:
        return hash((self.language, self.universe, tuple(sorted(self.relations.items()))))

    def holds(self, relation: str, args: Sequence[Element]) -> bool:
        return tuple(args) in self.relations[relation]

    def value(self, function: str, args: Sequence[Element]) -> Element:
        return self.functions[function][tuple(args)]

    def constant(self, name: str) -> Element:
        return self.functions[name][()]

    @property
    def size(self) -> int:
        return len(self.universe)

    def order(self, element: Element) -> int:
        return self.universe.index(element)

    def rename(self, mapping: Mapping[Element, Element], universe: Optional[Iterable[Element]] = None) -> "Structure":
        """Transport the structure along an injective renaming of elements."""
        new_universe = tuple(universe) if universe is not None else tuple(mapping[e] for e in self.universe)
        return Structure(
            self.language,
            new_universe,
            {n: frozenset(tuple(mapping[x] for x in row) for row in rows) for n, rows in self.relations.items()},
            {
                n: {tuple(mapping[x] for x in k): mapping[v] for k, v in table.items()}
                for n, table in self.functions.items()
            },
        )

    def expand_constants(self, names: Mapping[Element, str]) -> "Structure":
        """Add a constant symbol for each listed element."""
        clash = set(names.values()) & (set(self.language.relations) | set(self.language.functions))
        if clash:
            raise PreconditionError("Constant names clash with the language", sorted(clash))
        language = self.language.with_constants(names.values())
        functions = {**self.functions, **{c: {(): e} for e, c in names.items()}}
        return Structure(language, self.universe, self.relations, functions)


def epsilon_structure(universe: Iterable[Element], edges: Iterable[Tuple[Element, Element]]) -> Structure:
    """A structure over the single binary relation ``E``."""
    return Structure(Language({"E": 2}), tuple(universe), {"E": frozenset(tuple(e) for e in edges)})


def substructure(s: Structure, universe: Iterable[Element]) -> Structure:
    """Restriction of a relational structure to ``universe`` (order follows ``s``)."""
    keep = set(universe)
    if s.language.functions:
        raise PreconditionError("Substructures are only taken of relational structures")
    ordered = tuple(e for e in s.universe if e in keep)
    return Structure(
        s.language,
        ordered,
        {n: frozenset(r for r in rows if set(r) <= keep) for n, rows in s.relations.items()},
    )
