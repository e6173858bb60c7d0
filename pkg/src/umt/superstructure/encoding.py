"""Relational structures as entities, and formulas translated into bounded membership formulas.

A structure with relations ``R1..Rk`` becomes the tuple ``(A, R1, ..., Rk)``
(``(A, {})`` when there are no relations). An m-ary relation is the set of
its m-tuples; a unary relation is the set of its elements.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence

from umt.entities import EMPTY, Atom, Entity, HFSet, atom
from umt.errors import FormulaSyntaxError, PreconditionError
from umt.logic.builders import phi_tuple
from umt.logic.syntax import (
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Language,
    Mem,
    Not,
    Or,
    Rel,
    Variable,
    all_variables,
    check_language,
    free_variables,
    fresh_variable,
)
from umt.reports import CheckReport
from umt.semantics.satisfaction import evaluate
from umt.semantics.structures import Element, Structure
from umt.superstructure.constructions import transitive_closure, tuple_entity
from umt.superstructure.evaluation import eval_bounded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StructureEncoding:
    """The entity of a structure together with what is needed to evaluate bar formulas."""

    structure: Structure
    entity: Entity
    atom_map: Dict[Element, Atom]
    relations: Sequence[str]
    ambient: HFSet = field(repr=False)

    def environment(self, assignment: Mapping[str, Element], structure_var: str = "z", universe_var: str = "t"):
        env: Dict[str, Entity] = {v: self.atom_map[e] for v, e in assignment.items()}
        env[structure_var] = self.entity
        env[universe_var] = self.ambient
        return env


def _default_atom_map(s: Structure) -> Dict[Element, Atom]:
    try:
        return {e: atom(e) for e in s.universe}
    except FormulaSyntaxError:
        return {e: atom(f"e{i}") for i, e in enumerate(s.universe)}


def _check_relational(lang: Language) -> None:
    if lang.functions:
        raise PreconditionError("Only relational languages can be encoded", sorted(lang.functions))


def encode_structure(s: Structure, atom_map: Optional[Mapping[Element, Entity]] = None) -> StructureEncoding:
    """Encode ``s`` as ``(A, R1, ..., Rk)`` with relations in sorted name order.

    The ambient entity is the transitive closure of ``{entity}``, a transitive
    set containing the encoding.

    Raises:
        PreconditionError: If the language has function symbols or ``atom_map``
            is not an injective map of the universe into atoms
    """
    _check_relational(s.language)
    mapping = dict(atom_map) if atom_map is not None else _default_atom_map(s)
    if set(mapping) != set(s.universe):
        raise PreconditionError("Atom map must cover exactly the universe", sorted(set(s.universe) ^ set(mapping)))
    if any(not isinstance(v, Atom) for v in mapping.values()):
        raise PreconditionError("Elements must be encoded by atoms")
    if len(set(mapping.values())) != len(mapping):
        raise PreconditionError("Atom map is not injective")

    names = sorted(s.language.relations)
    components: List[Entity] = [HFSet(mapping.values())]
    for name in names:
        arity = s.language.relations[name]
        if arity == 0:
            components.append(HFSet([EMPTY]) if () in s.relations[name] else EMPTY)
            continue
        components.append(HFSet(tuple_entity([mapping[x] for x in row]) for row in s.relations[name]))
    if len(components) == 1:
        components.append(EMPTY)
    entity = tuple_entity(components)
    ambient = transitive_closure(HFSet([entity]))
    logger.debug(f"Encoded structure of size {s.size} with {len(names)} relations; ambient set has {len(ambient)} members")
    return StructureEncoding(s, entity, mapping, tuple(names), ambient)  # type: ignore[arg-type]


def bar_formula(f: Formula, lang: Language, structure_var: str = "z", universe_var: str = "t") -> Formula:
    """Translate ``f`` into a bounded membership formula about an encoded structure.

    For every assignment ``a``: ``s`` satisfies ``f[a]`` iff the result holds
    with the encoded elements, ``structure_var`` bound to the encoding and
    ``universe_var`` to a transitive set containing it.

    Raises:
        PreconditionError: On function symbols, or when the reserved variable
            names occur in ``f``
    """
    _check_relational(lang)
    check_language(f, lang)
    used = set(all_variables(f))
    if {structure_var, universe_var} & used:
        raise PreconditionError("Formula uses a reserved variable", sorted({structure_var, universe_var} & used))
    names = sorted(lang.relations)
    avoid = used | {structure_var, universe_var}
    slots: List[str] = []
    for _ in range(max(2, len(names) + 1)):
        slot = fresh_variable(avoid, "u")
        avoid.add(slot)
        slots.append(slot)
    index = {name: i + 1 for i, name in enumerate(names)}

    def translate(g: Formula) -> Formula:
        if isinstance(g, Eq):
            return g
        if isinstance(g, Rel):
            container = Variable(slots[index[g.name]])
            arity = len(g.args)
            if arity == 0:
                w = fresh_variable(avoid, "w")
                return BoundedExists(w, container, Eq(Variable(w), Variable(w)))
            if arity == 1:
                return Mem(g.args[0], container)
            w = fresh_variable(avoid, "w")
            return BoundedExists(w, container, phi_tuple(w, [arg.name for arg in g.args]))  # type: ignore[attr-defined]
        if isinstance(g, Not):
            return Not(translate(g.body))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(translate(g.left), translate(g.right))
        if isinstance(g, Forall):
            return BoundedForall(g.var, Variable(slots[0]), translate(g.body))
        if isinstance(g, Exists):
            return BoundedExists(g.var, Variable(slots[0]), translate(g.body))
        raise PreconditionError("Unexpected formula in a relational language", g)

    body = And(phi_tuple(structure_var, slots), translate(f))
    for slot in reversed(slots):
        body = BoundedExists(slot, Variable(universe_var), body)
    return body


def check_encoding(
    s: Structure,
    formulas: Sequence[Formula],
    atom_map: Optional[Mapping[Element, Entity]] = None,
) -> CheckReport:
    """Compare ``s ⊨ φ[a]`` with the bar formula on the encoding for every assignment."""
    encoding = encode_structure(s, atom_map)
    report = CheckReport("structure-encoding", statistics={"formulas": len(formulas), "universe": s.size})
    for formula in formulas:
        translated = bar_formula(formula, s.language)
        free = sorted(free_variables(formula))
        for values in product(s.universe, repeat=len(free)):
            assignment = dict(zip(free, values))
            report.count("instances")
            left = evaluate(s, formula, dict(assignment))
            right = eval_bounded(translated, encoding.environment(assignment))
            if left != right:
                report.fail("bar formula disagrees with the structure", formula=formula, assignment=assignment, structure=left, encoded=right)
    return report
