"""Embeddings, diagrams, isomorphisms and depth-bounded elementarity checks."""

import logging
from itertools import permutations, product
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence

from umt.config import get_settings, resolve
from umt.errors import GuardError, PreconditionError
from umt.logic.syntax import Constant, Formula, Not, free_variables, map_terms, relativize_membership
from umt.reports import CheckReport
from umt.semantics.enumeration import (
    bounded_formula_pool,
    enumerate_formulas,
    first_order_atoms,
    formula_pool,
)
from umt.semantics.satisfaction import evaluate
from umt.semantics.structures import Element, Structure

logger = logging.getLogger(__name__)

DEFAULT_VARIABLES = ("x", "y")
DIAGRAM_VARIABLES = ("x", "y", "z")


def _assignments(variables: Sequence[str], universe: Sequence[Element]):
    for values in product(universe, repeat=len(variables)):
        yield dict(zip(variables, values))


def _check_map(h: Mapping[Element, Element], A: Structure, B: Structure) -> None:
    if A.language != B.language:
        raise PreconditionError("Structures have different languages")
    if set(h) != set(A.universe):
        raise PreconditionError("Map is not total on the source universe", sorted(set(A.universe) - set(h)))
    outside = sorted(v for v in h.values() if v not in set(B.universe))
    if outside:
        raise PreconditionError("Map leaves the target universe", outside)


def check_elementary_embedding(
    h: Mapping[Element, Element],
    A: Structure,
    B: Structure,
    depth: Optional[int] = None,
    variables: Sequence[str] = DEFAULT_VARIABLES,
    max_counterexamples: int = 5,
    seed: Optional[int] = None,
) -> CheckReport:
    """Check ``A ⊨ φ[ā] ⟺ B ⊨ φ[h(ā)]`` for every formula up to ``depth``.

    Formulas are visited in layer order, so the first counterexample has
    minimal depth.

    Raises:
        PreconditionError: If ``h`` is not a map from ``A``'s universe into ``B``'s
    """
    _check_map(h, A, B)
    depth = resolve(depth, "default_depth")
    pool = formula_pool(A.language, depth, variables, seed=seed)
    report = CheckReport("elementary-embedding", statistics=pool.statistics())
    instances = 0
    for formula in pool:
        free = sorted(free_variables(formula))
        for assignment in _assignments(free, A.universe):
            instances += 1
            image = {v: h[e] for v, e in assignment.items()}
            left = evaluate(A, formula, dict(assignment))
            right = evaluate(B, formula, image)
            if left != right:
                report.fail(
                    "truth differs between source and target",
                    formula=formula,
                    assignment=assignment,
                    source=left,
                    target=right,
                )
                if len(report.counterexamples) >= max_counterexamples:
                    report.statistics["instances"] = instances
                    return report
    report.statistics["instances"] = instances
    return report


def check_elementarily_equivalent(A: Structure, B: Structure, depth: Optional[int] = None) -> CheckReport:
    """Same sentences of depth at most ``depth``."""
    if A.language != B.language:
        raise PreconditionError("Structures have different languages")
    depth = resolve(depth, "default_depth")
    pool = formula_pool(A.language, depth, DEFAULT_VARIABLES)
    report = CheckReport("elementary-equivalence", statistics=pool.statistics())
    for formula in pool:
        if free_variables(formula):
            continue
        report.count("sentences")
        left = evaluate(A, formula, {})
        right = evaluate(B, formula, {})
        if left != right:
            report.fail("sentence separates the structures", formula=formula, first=left, second=right)
    return report


# ============================================================================
# Diagrams
# ============================================================================


def constant_names(s: Structure) -> Dict[Element, str]:
    return {e: f"c_{e}" for e in s.universe}


def atomic_diagram(s: Structure) -> FrozenSet[Formula]:
    """Atomic sentences of the expansion by element constants, and negations of the false ones."""
    names = constant_names(s)
    expanded = s.expand_constants(names)
    diagram = set()
    for atom in first_order_atoms(expanded.language, ()):
        diagram.add(atom if evaluate(expanded, atom, {}) else Not(atom))
    return frozenset(diagram)


def elementary_diagram(s: Structure, depth: Optional[int] = None) -> FrozenSet[Formula]:
    """Sentences of depth at most ``depth`` true in the expansion by element constants.

    Formulas use one bound variable per quantifier level, so every sentence of
    the depth is reached. Negations of false atomic sentences are included at
    every depth.

    Raises:
        GuardError: If ``depth`` exceeds the configured cap
    """
    depth = resolve(depth, "default_depth")
    names = constant_names(s)
    expanded = s.expand_constants(names)
    variables = DIAGRAM_VARIABLES[:depth]
    sentences = set(atomic_diagram(s))
    for formula in enumerate_formulas(expanded.language, depth, variables):
        if free_variables(formula):
            continue
        if evaluate(expanded, formula, {}):
            sentences.add(formula)
    return frozenset(sentences)


def rename_constants(sentences: Iterable[Formula], mapping: Mapping[str, str]) -> FrozenSet[Formula]:
    def swap(t):
        if isinstance(t, Constant) and t.name in mapping:
            return Constant(mapping[t.name])
        return t

    return frozenset(map_terms(f, swap) for f in sentences)


def is_embedding(h: Mapping[Element, Element], A: Structure, B: Structure) -> bool:
    """``h`` is an embedding iff ``B`` with ``c_a`` read as ``h(a)`` satisfies the atomic diagram of ``A``."""
    _check_map(h, A, B)
    names = constant_names(A)
    language = A.language.with_constants(names.values())
    functions = {**B.functions, **{names[a]: {(): h[a]} for a in A.universe}}
    target = Structure(language, B.universe, B.relations, functions)
    return all(evaluate(target, sentence, {}) for sentence in atomic_diagram(A))


def is_isomorphism(h: Mapping[Element, Element], A: Structure, B: Structure) -> bool:
    if set(h.values()) != set(B.universe) or len(set(h.values())) != len(A.universe):
        return False
    return is_embedding(h, A, B)


def find_isomorphism(A: Structure, B: Structure) -> Optional[Dict[Element, Element]]:
    """Search all bijections; returns one isomorphism or None.

    Raises:
        GuardError: If a universe is larger than the configured isomorphism limit
    """
    limit = get_settings().isomorphism_limit
    if A.size > limit or B.size > limit:
        raise GuardError(f"Isomorphism search is limited to universes of size {limit}")
    if A.language != B.language or A.size != B.size:
        return None
    for image in permutations(B.universe):
        candidate = dict(zip(A.universe, image))
        if _preserves_relations(candidate, A, B) and is_isomorphism(candidate, A, B):
            return candidate
    return None


def _preserves_relations(h: Mapping[Element, Element], A: Structure, B: Structure) -> bool:
    for name, rows in A.relations.items():
        mapped = frozenset(tuple(h[x] for x in row) for row in rows)
        if mapped != B.relations[name]:
            return False
    return True


# ============================================================================
# Membership structures
# ============================================================================


def _check_epsilon(s: Structure) -> None:
    if dict(s.language.relations) != {"E": 2} or s.language.functions:
        raise PreconditionError("Expected a structure over the single binary relation E")


def is_transitive_submodel(A: Structure, B: Structure) -> bool:
    """Whether ``A`` is closed downward under ``E`` inside ``B``.

    Raises:
        PreconditionError: If ``A`` is not a substructure of ``B``
    """
    _check_epsilon(A)
    _check_epsilon(B)
    inner = set(A.universe)
    if not inner <= set(B.universe):
        raise PreconditionError("Not a submodel: universe is not contained", sorted(inner - set(B.universe)))
    restricted = frozenset(r for r in B.relations["E"] if set(r) <= inner)
    if restricted != A.relations["E"]:
        raise PreconditionError("Not a submodel: E differs from the restriction")
    return all(b in inner for b, a in B.relations["E"] if a in inner)


def check_bounded_submodel(
    A: Structure,
    B: Structure,
    depth: Optional[int] = None,
    variables: Sequence[str] = DEFAULT_VARIABLES,
) -> CheckReport:
    """Bounded formulas with parameters in ``A`` have the same truth in ``A`` and ``B``."""
    depth = resolve(depth, "default_depth")
    report = CheckReport("bounded-submodel")
    if not is_transitive_submodel(A, B):
        report.fail("not a transitive submodel")
        return report
    pool = bounded_formula_pool(depth, variables)
    report.statistics.update(pool.statistics())
    for formula in pool:
        translated = relativize_membership(formula)
        free = sorted(free_variables(translated))
        for assignment in _assignments(free, A.universe):
            report.count("instances")
            left = evaluate(A, translated, dict(assignment))
            right = evaluate(B, translated, dict(assignment))
            if left != right:
                report.fail("bounded formula not absolute", formula=formula, assignment=assignment, inner=left, outer=right)
                return report
    return report


def identity_map(s: Structure) -> Dict[Element, Element]:
    return {e: e for e in s.universe}
