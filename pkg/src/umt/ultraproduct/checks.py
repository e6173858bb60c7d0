"""Łoś verification, the diagonal embedding, principal collapse and a compactness demonstrator."""

import logging
import random
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from umt.config import resolve
from umt.errors import PreconditionError, UmtError
from umt.filters.core import Filter, Index, SetFamily, Ultrafilter, extend_to_ultrafilter
from umt.logic.syntax import Formula, free_variables
from umt.reports import CheckReport
from umt.semantics.embeddings import DEFAULT_VARIABLES, check_elementary_embedding, is_isomorphism
from umt.semantics.enumeration import formula_pool
from umt.semantics.satisfaction import evaluate, satisfies
from umt.semantics.structures import Element, Structure
from umt.ultraproduct.products import IndexedFamily, Ultraproduct, build_reduced_product, build_ultraproduct

logger = logging.getLogger(__name__)


def _assignments(
    variables: Sequence[str],
    functions: List[Dict[Index, Element]],
    limit: int,
    sample_size: int,
    rng: random.Random,
) -> Tuple[List[Dict[str, Dict[Index, Element]]], bool]:
    total = len(functions) ** len(variables)
    if total <= limit:
        rows = [dict(zip(variables, combo)) for combo in product(functions, repeat=len(variables))]
        return rows, False
    rows = [{v: rng.choice(functions) for v in variables} for _ in range(sample_size)]
    return rows, True


def pointwise_truth(fam: IndexedFamily, formula: Formula, assignment: Mapping[str, Mapping[Index, Element]]) -> frozenset:
    """``{i : A_i ⊨ φ[f_1(i), ...]}``."""
    return frozenset(
        i for i in fam.index_set if evaluate(fam[i], formula, {v: f[i] for v, f in assignment.items()})
    )


def los_check(
    fam: IndexedFamily,
    F: Filter,
    depth: Optional[int] = None,
    variables: Sequence[str] = DEFAULT_VARIABLES,
    max_counterexamples: int = 5,
    seed: Optional[int] = None,
) -> CheckReport:
    """Compare truth in the reduced product with filter membership of the pointwise truth set.

    ``F`` may be any filter; over a filter that is not ultra the negation step
    fails and the report shows where.

    Raises:
        GuardError: If ``depth`` exceeds the configured cap
    """
    depth = resolve(depth, "default_depth")
    up = build_reduced_product(fam, F)
    pool = formula_pool(fam.language, depth, variables, seed=seed)
    functions = list(fam.choice_functions())
    rng = random.Random(resolve(seed, "seed"))
    limit = resolve(None, "exhaustive_limit")
    sample_size = resolve(None, "sample_size")
    report = CheckReport("los", statistics=pool.statistics())
    report.statistics.update({"choice_functions": len(functions), "ultra": F.is_ultra})
    for formula in pool:
        free = sorted(free_variables(formula))
        rows, sampled = _assignments(free, functions, limit, sample_size, rng)
        if sampled:
            report.statistics["assignments_sampled"] = True
        for assignment in rows:
            report.count("instances")
            classes = {v: up.class_of(f) for v, f in assignment.items()}
            left = evaluate(up.structure, formula, dict(classes))
            truth_set = pointwise_truth(fam, formula, assignment)
            right = F.contains(truth_set)
            if left != right:
                report.fail(
                    "product truth differs from filter membership",
                    formula=formula,
                    assignment=classes,
                    product=left,
                    pointwise=sorted(truth_set, key=str),
                    in_filter=right,
                )
                if len(report.counterexamples) >= max_counterexamples:
                    return report
    logger.info(f"Los check over {len(fam.index_set)} factors: {report.verdict}")
    return report


def check_congruence(up: Ultraproduct, seed: Optional[int] = None) -> CheckReport:
    """Equivalence of choice functions matches class names, and relations do not depend on representatives."""
    fam = up.family
    functions = list(fam.choice_functions())
    rng = random.Random(resolve(seed, "seed"))
    limit = resolve(None, "exhaustive_limit")
    sample_size = resolve(None, "sample_size")
    report = CheckReport("congruence", statistics={"choice_functions": len(functions)})
    pairs, _ = _assignments(["f", "g"], functions, limit, sample_size, rng)
    for row in pairs:
        f, g = row["f"], row["g"]
        report.count("pairs")
        if up.equivalent(f, g) != (up.class_of(f) == up.class_of(g)):
            report.fail("equivalence disagrees with class names", f=f, g=g)
    for name, arity in fam.language.relations.items():
        variables = [f"v{k}" for k in range(arity)]
        rows, _ = _assignments(variables, functions, limit, sample_size, rng)
        for row in rows:
            args = [row[v] for v in variables]
            classes = [up.class_of(f) for f in args]
            pointwise = frozenset(i for i in fam.index_set if fam[i].holds(name, [f[i] for f in args]))
            if up.structure.holds(name, classes) != up.filter.contains(pointwise):
                report.fail(f"relation {name} depends on the representatives", arguments=args)
    return report


def diagonal_embedding(
    A: Structure, index_set: Iterable[Index], U: Filter, depth: Optional[int] = None
) -> Tuple[Dict[Element, Element], CheckReport]:
    """``a ↦ c_a/U`` into the ultrapower, with its elementarity report."""
    fam = IndexedFamily.power(A, index_set)
    up = build_ultraproduct(fam, U)
    h = {a: up.class_of(fam.constant(a)) for a in A.universe}
    report = check_elementary_embedding(h, A, up.structure, depth)
    report.name = "diagonal-embedding"
    report.statistics["surjective"] = set(h.values()) == set(up.structure.universe)
    return h, report


def principal_collapse(fam: IndexedFamily, U: Ultrafilter) -> Tuple[Dict[Element, Element], CheckReport]:
    """``f/U ↦ f(i0)`` for the principal point ``i0``, checked to be an isomorphism."""
    up = build_ultraproduct(fam, U)
    point = U.as_ultrafilter().principal_point
    h = {c: rep[point] for c, rep in up.representatives.items()}
    report = CheckReport("principal-collapse", statistics={"point": point, "size": up.structure.size})
    if not is_isomorphism(h, up.structure, fam[point]):
        report.fail("collapse map is not an isomorphism", point=point, mapping=h)
    return h, report


def compactness_witness(
    sentences: Sequence[Formula], subset_models: Mapping[frozenset, Structure]
) -> Structure:
    """Ultraproduct over the nonempty subsets of ``sentences`` that models all of them.

    Raises:
        PreconditionError: If a subset has no model or a given model fails its subset
    """
    sigma = list(dict.fromkeys(sentences))
    if not sigma:
        raise PreconditionError("Need at least one sentence")
    for s in sigma:
        if free_variables(s):
            raise PreconditionError("Not a sentence", s)
    models = {frozenset(k): v for k, v in subset_models.items()}
    subsets: List[frozenset] = []
    for mask in range(1, 2 ** len(sigma)):
        subsets.append(frozenset(s for k, s in enumerate(sigma) if mask >> k & 1))
    subsets.sort(key=lambda sub: (len(sub), [sigma.index(s) for s in sigma if s in sub]))
    for sub in subsets:
        if sub not in models:
            raise PreconditionError("No model given for a subset", sorted(sigma.index(s) for s in sub))
        for s in sub:
            if not satisfies(models[sub], s, {}):
                raise PreconditionError("Claimed model fails a sentence of its subset", s)

    index_set = tuple(range(len(subsets)))
    fam = IndexedFamily(index_set, {i: models[sub] for i, sub in enumerate(subsets)})
    members = [frozenset(i for i, sub in enumerate(subsets) if s in sub) for s in sigma]
    U = extend_to_ultrafilter(SetFamily.of(index_set, members))
    up = build_ultraproduct(fam, U)
    failing = [s for s in sigma if not satisfies(up.structure, s, {})]
    if failing:
        raise UmtError(f"Ultraproduct fails {len(failing)} sentences")
    logger.info(f"Compactness witness over {len(subsets)} subsets, ultrafilter at {U.principal_point}")
    return up.structure
