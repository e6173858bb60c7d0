"""Transfer, the pointwise membership laws, and the star-algebra law suite."""

import logging
import random
from itertools import combinations, product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from umt.config import resolve
from umt.entities import EMPTY, Entity, HFSet, format_entity, members_of
from umt.errors import GuardError, PreconditionError
from umt.logic.builders import build_base
from umt.logic.syntax import EntityConst, free_variables, star_transform, substitute
from umt.reports import CheckReport
from umt.semantics.embeddings import check_bounded_submodel, check_elementary_embedding
from umt.semantics.structures import Element, Structure, epsilon_structure
from umt.semantics.enumeration import bounded_formula_pool
from umt.starmap.context import StarMapContext
from umt.superstructure import constructions as c
from umt.superstructure.encoding import encode_structure
from umt.superstructure.evaluation import eval_bounded
from umt.superstructure.levels import enumerate_vn, level_entity

logger = logging.getLogger(__name__)

TRANSFER_VARIABLES = ("x", "y", "z")


def _parameter_rows(
    params: List[Entity], width: int, seed: Optional[int]
) -> Tuple[List[Tuple[Entity, ...]], bool, int]:
    total = len(params) ** width
    if total <= resolve(None, "exhaustive_limit"):
        return list(product(params, repeat=width)), False, total
    rng = random.Random(resolve(seed, "seed"))
    rows = [tuple(rng.choice(params) for _ in range(width)) for _ in range(resolve(None, "sample_size"))]
    return rows, True, total


def check_transfer(
    ctx: StarMapContext,
    depth: Optional[int] = None,
    max_params: int = 2,
    max_counterexamples: int = 5,
    seed: Optional[int] = None,
) -> CheckReport:
    """``φ(ā)`` and ``φ*(*ā)`` agree for bounded formulas up to ``depth``.

    Parameters range over ``V_(rank_bound - 1)(X)``; each free variable is
    replaced by the parameter as an entity constant before the constants
    are starred.

    Raises:
        GuardError: If ``depth`` exceeds the cap or the parameter level cannot be materialized
    """
    depth = resolve(depth, "default_depth")
    if not 1 <= max_params <= len(TRANSFER_VARIABLES):
        raise PreconditionError("max_params must be between 1 and 3", max_params)
    variables = TRANSFER_VARIABLES[:max_params]
    pool = bounded_formula_pool(depth, variables, seed=seed)
    params = sorted(enumerate_vn(ctx.base, max(ctx.rank_bound - 1, 0)))
    report = CheckReport("transfer", statistics=pool.statistics())
    report.statistics["parameters"] = len(params)
    rows_by_width: Dict[int, List[Tuple[Entity, ...]]] = {}
    for formula in pool:
        free = sorted(free_variables(formula))
        if len(free) not in rows_by_width:
            rows, sampled, total = _parameter_rows(params, len(free), seed)
            rows_by_width[len(free)] = rows
            if sampled:
                report.statistics[f"tuples_sampled.{len(free)}"] = total
                report.statistics["seed"] = resolve(seed, "seed")
        for row in rows_by_width[len(free)]:
            report.count("instances")
            closed = substitute(formula, {v: EntityConst(p) for v, p in zip(free, row)})
            left = eval_bounded(closed, {})
            right = eval_bounded(star_transform(closed, ctx.star), {})
            if left != right:
                report.fail(
                    "transfer fails",
                    formula=formula,
                    parameters=dict(zip(free, row)),
                    stars={v: ctx.star(p) for v, p in zip(free, row)},
                    source=left,
                    image=right,
                )
                if len(report.counterexamples) >= max_counterexamples:
                    return report
    logger.info(f"Transfer check at depth {depth}: {report.verdict}")
    return report


def pointwise_functions(ctx: StarMapContext, values: Sequence[Entity], limit: Optional[int] = None) -> List[Dict]:
    """Functions from the index set into ``values``; seeded sample above ``limit``."""
    count = len(values) ** len(ctx.index_set)
    limit = resolve(limit, "exhaustive_limit")
    if count <= limit:
        return [dict(zip(ctx.index_set, row)) for row in product(values, repeat=len(ctx.index_set))]
    rng = random.Random(resolve(None, "seed"))
    return [{i: rng.choice(values) for i in ctx.index_set} for _ in range(resolve(None, "sample_size"))]


def check_step4_laws(ctx: StarMapContext, functions: Optional[Sequence[Dict]] = None) -> CheckReport:
    """``g ∈_U f ⟺ g/U ∈ f/U`` and ``g =_U f ⟺ g/U = f/U`` on arbitrary representatives."""
    if functions is None:
        values = sorted(enumerate_vn(ctx.base, max(ctx.rank_bound - 1, 0)))
        functions = pointwise_functions(ctx, values, limit=2_000)
    report = CheckReport("step4-laws", statistics={"functions": len(functions)})
    quotients = [ctx.quotient(f) for f in functions]
    for (f, qf), (g, qg) in product(zip(functions, quotients), repeat=2):
        report.count("pairs")
        if ctx.member_u(g, f) != (qg in members_of(qf)):
            report.fail("membership law fails", g=g, f=f)
        if ctx.equal_u(g, f) != (qg == qf):
            report.fail("equality law fails", g=g, f=f)
    return report


def check_star_invariants(ctx: StarMapContext) -> CheckReport:
    """Rank preservation, the base-set property of ``*X``, and ``σA = *A`` on tracked sets."""
    report = CheckReport("star-invariants", statistics={"tracked": len(ctx.tracked)})
    if ctx.star(EMPTY) != EMPTY:
        report.fail("star of the empty set is not empty", image=ctx.star(EMPTY))
    for u in sorted(ctx.tracked):
        if not ctx.in_bound(u):
            continue
        report.count("entities")
        image = ctx.star(u)
        if image.height != u.height:
            report.fail("rank not preserved", entity=u, image=image)
        if not u.is_atom and ctx.sigma_image(u) != image:
            report.fail("standard part differs from the star", entity=u, image=image)
    star_base = HFSet(ctx.image_base)
    if not eval_bounded(build_base(), {"x": star_base}):
        report.fail("image of the base set is not a base set", image=star_base)
    return report


def check_level_law(ctx: StarMapContext, n: int) -> CheckReport:
    """``*V_n(X) = {x ∈ V_n(*X) : x internal}``.

    Raises:
        GuardError: If ``V_n(X)`` exceeds the rank bound or the cap
    """
    if n + 1 > ctx.rank_bound:
        raise GuardError(f"V_{n}(X) has rank {n + 1}, above the rank bound {ctx.rank_bound}")
    starred = set(members_of(ctx.star(level_entity(ctx.base, n))))
    candidates = enumerate_vn(ctx.image_base, n)
    internal = {x for x in candidates if ctx.is_internal(x)}
    report = CheckReport("level-law", statistics={"level": n, "star": len(starred), "internal": len(internal)})
    for x in sorted(starred ^ internal):
        report.fail("level law fails", entity=x, in_star=x in starred, internal=x in internal)
    return report


# ============================================================================
# Star algebra
# ============================================================================


class _LawRecorder:
    def __init__(self, ctx: StarMapContext, report: CheckReport):
        self.ctx = ctx
        self.report = report

    def law(self, name: str, inputs: Iterable[Entity], left: Callable[[], Entity], right: Callable[[], Entity], **witness):
        """Compare both sides when every starred object is within the rank bound."""
        if not all(self.ctx.in_bound(e) for e in inputs):
            self.report.count(f"{name}.skipped")
            return
        self.report.count(f"{name}.instances")
        lhs, rhs = left(), right()
        if lhs != rhs:
            self.report.fail(f"law {name} fails", left=lhs, right=rhs, **witness)


def _track_in_bound(ctx: StarMapContext, e: Entity) -> None:
    if ctx.in_bound(e):
        ctx.track([e])


def _small_sets(ctx: StarMapContext, size: int = 2) -> List[Entity]:
    level = sorted(enumerate_vn(ctx.base, 1))
    return [s for s in level if not s.is_atom and len(members_of(s)) <= size]


def _internal_part(ctx: StarMapContext, family: Entity) -> HFSet:
    return HFSet(m for m in members_of(family) if ctx.is_internal(m))


def star_algebra_suite(ctx: StarMapContext, max_relations: int = 64) -> CheckReport:
    """Boolean, relational, functional, power set and product laws of the star map.

    Sets are drawn from ``V_1(X)``; laws whose objects exceed the rank bound
    are counted as skipped. Power sets, function spaces and choice products
    under test are registered with the context so their stars witness
    internality.
    """
    star = ctx.star
    report = CheckReport("star-algebra", statistics={"rank_bound": ctx.rank_bound})
    rec = _LawRecorder(ctx, report)
    sets = _small_sets(ctx)

    for A, B in product(sets, repeat=2):
        w = {"A": A, "B": B}
        rec.law("union", [A, B], lambda: star(c.union(A, B)), lambda: c.union(star(A), star(B)), **w)
        rec.law("intersection", [A, B], lambda: star(c.intersection(A, B)), lambda: c.intersection(star(A), star(B)), **w)
        rec.law("difference", [A, B], lambda: star(c.difference(A, B)), lambda: c.difference(star(A), star(B)), **w)
        rec.law("product", [c.product(A, B)], lambda: star(c.product(A, B)), lambda: c.product(star(A), star(B)), **w)
        space = c.function_space(A, B)
        _track_in_bound(ctx, space)
        rec.law(
            "function-space",
            [space],
            lambda: star(space),
            lambda: _internal_part(ctx, c.function_space(star(A), star(B))),
            **w,
        )

    for A in sets:
        rec.law("finite-set", [A], lambda: star(A), lambda: ctx.sigma_image(A), A=A)
        P = c.powerset(A)
        _track_in_bound(ctx, P)
        rec.law("powerset", [P], lambda: star(P), lambda: _internal_part(ctx, c.powerset(star(A))), A=A)

    families = [F for F in _families(sets) if members_of(F)]
    for F in families:
        rec.law("big-union", [F], lambda: star(c.big_union(F)), lambda: c.big_union(star(F)), family=F)
        prod = c.choice_product(F)
        _track_in_bound(ctx, prod)
        rec.law(
            "choice-product",
            [prod],
            lambda: star(prod),
            lambda: _internal_part(ctx, c.choice_product(star(F))),
            family=F,
        )

    relations = _relations(sets, max_relations)
    for R in relations:
        rec.law("domain", [R], lambda: star(c.domain(R)), lambda: c.domain(star(R)), R=R)
        rec.law("range", [R], lambda: star(c.range_of(R)), lambda: c.range_of(star(R)), R=R)
        rec.law("inverse", [R], lambda: star(c.inverse(R)), lambda: c.inverse(star(R)), R=R)
        for C in sets:
            rec.law("image", [R, C], lambda: star(c.image(R, C)), lambda: c.image(star(R), star(C)), R=R, C=C)
    for R, S in product(relations[:16], repeat=2):
        rec.law("composition", [R, S], lambda: star(c.compose(S, R)), lambda: c.compose(star(S), star(R)), R=R, S=S)

    for A, B in product(sets, repeat=2):
        for f in members_of(c.function_space(A, B)):
            if not ctx.in_bound(f):
                report.count("apply.skipped")
                continue
            report.count("apply.instances")
            image = star(f)
            if not c.is_function(image):
                report.fail("star of a function is not a function", f=f, image=image)
                continue
            for a in members_of(A):
                if star(c.apply(f, a)) != c.apply(image, star(a)):
                    report.fail("star does not commute with application", f=f, a=a)
            if c.is_injective(f) != c.is_injective(image):
                report.fail("injectivity not preserved", f=f)
            if c.is_surjective(f, B) != c.is_surjective(image, star(B)):
                report.fail("surjectivity not preserved", f=f)
    logger.info(f"Star algebra suite: {report.verdict} with {len(report.counterexamples)} failures")
    return report


def _families(sets: Sequence[Entity]) -> List[Entity]:
    nonempty = [s for s in sets if members_of(s)]
    return [HFSet(combo) for size in (1, 2) for combo in combinations(nonempty, size)]


def _relations(sets: Sequence[Entity], limit: int) -> List[Entity]:
    found = []
    seen = set()
    for A, B in product(sets, repeat=2):
        pairs = members_of(c.product(A, B))
        for size in range(len(pairs) + 1):
            for combo in combinations(pairs, size):
                R = HFSet(combo)
                if R not in seen:
                    seen.add(R)
                    found.append(R)
    return sorted(found)[:limit]


# ============================================================================
# Structures and embeddings
# ============================================================================


def membership_structure(entities: Iterable[Entity]) -> Tuple[Structure, Dict[Entity, Element]]:
    """``(M, ∈)`` as a structure over ``E``, elements named by their literals."""
    items = sorted(set(entities))
    names = {e: format_entity(e) for e in items}
    inside = set(items)
    edges = [(names[m], names[e]) for e in items for m in members_of(e) if m in inside]
    return epsilon_structure([names[e] for e in items], edges), names


def star_structure_embedding(
    ctx: StarMapContext,
    s: Structure,
    depth: Optional[int] = None,
    atom_map: Optional[Dict[Element, Entity]] = None,
) -> CheckReport:
    """Encode ``s``, star the encoding, decode it and check that ``*`` restricted to the universe is elementary.

    Raises:
        PreconditionError: If the base set is smaller than the universe
        GuardError: If the encoding exceeds the rank bound
    """
    if atom_map is None:
        if len(ctx.base) < s.size:
            raise PreconditionError("Base set is smaller than the structure's universe", s.size)
        atom_map = dict(zip(s.universe, ctx.atoms))
    encoding = encode_structure(s, atom_map)
    if not ctx.in_bound(encoding.entity):
        raise GuardError(f"Encoding has rank {encoding.entity.height}, above the rank bound {ctx.rank_bound}")
    starred = ctx.star(encoding.entity)
    width = max(2, len(encoding.relations) + 1)
    components = c.decode_tuple(starred, width)
    if components is None:
        raise PreconditionError("Star of the encoding is not a tuple of the expected length")
    universe_atoms = sorted(members_of(components[0]))
    names = {a: format_entity(a) for a in universe_atoms}
    relations = {}
    for name, component in zip(encoding.relations, components[1:]):
        arity = s.language.relations[name]
        rows = set()
        if arity == 0:
            if members_of(component):
                rows.add(())
        else:
            for member in members_of(component):
                decoded = c.decode_tuple(member, arity)
                if decoded is None or any(x not in names for x in decoded):
                    raise PreconditionError(f"Star of relation {name} is not a set of tuples", member)
                rows.add(tuple(names[x] for x in decoded))
        relations[name] = frozenset(rows)
    image = Structure(s.language, tuple(names[a] for a in universe_atoms), relations)
    h = {e: format_entity(ctx.star(encoding.atom_map[e])) for e in s.universe}
    report = check_elementary_embedding(h, s, image, depth)
    report.name = "star-structure-embedding"
    return report


def check_bounded_embeddings(ctx: StarMapContext, depth: Optional[int] = None, level: int = 1) -> CheckReport:
    """``*`` on ``(V_level(X), ∈)`` is elementary and its image sits boundedly in a larger ``∈``-model."""
    source_entities = enumerate_vn(ctx.base, level)
    source, source_names = membership_structure(source_entities)
    image_entities = {ctx.star(e) for e in source_entities}
    image, image_names = membership_structure(image_entities)
    h = {source_names[e]: image_names[ctx.star(e)] for e in source_entities}
    report = CheckReport("bounded-embeddings")
    report.merge(check_elementary_embedding(h, source, image, depth), "star")
    outer_entities = set(enumerate_vn(ctx.image_base, level)) | {level_entity(ctx.image_base, level), HFSet(ctx.image_base)}
    outer, _ = membership_structure(outer_entities | image_entities)
    report.merge(check_bounded_submodel(image, outer, depth), "inclusion")
    return report
