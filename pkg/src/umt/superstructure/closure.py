"""Constructive check of the thirteen closure facts over a materialized level."""

import logging
import random
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Optional

from umt.config import resolve
from umt.entities import Entity, EntityLike, HFSet, members_of
from umt.reports import CheckReport
from umt.superstructure import constructions as c
from umt.superstructure.levels import base_set, enumerate_vn

logger = logging.getLogger(__name__)

SMALL = 3

CLOSURE_ITEMS = {
    1: "singletons",
    2: "finite unions",
    3: "finite subsets of the universe",
    4: "subsets of members",
    5: "unions of subfamilies of members",
    6: "union of a member",
    7: "intersections of nonempty families",
    8: "ordered pairs and tuples",
    9: "relations between members",
    10: "domain, range, inverse and image",
    11: "functions and their images",
    12: "function spaces",
    13: "products of indexed families",
}


class _LevelOracle:
    """Membership in ``V_k(X)`` by materialized set up to ``n`` and by rank above."""

    def __init__(self, X: FrozenSet, n: int, cap: Optional[int]):
        self.X = X
        self.levels: Dict[int, FrozenSet[Entity]] = {k: enumerate_vn(X, k, cap) for k in range(n + 1)}

    def contains(self, k: int, e: Entity) -> bool:
        if k in self.levels:
            return e in self.levels[k]
        allowed = set(self.X)
        stack = [e]
        while stack:
            cur = stack.pop()
            if cur.is_atom and cur not in allowed:
                return False
            stack.extend(members_of(cur))
        return e.height <= k


def check_closure_properties(
    X: Iterable[EntityLike],
    n: int,
    cap: Optional[int] = None,
    seed: Optional[int] = None,
) -> CheckReport:
    """Build each closure object from members of ``V_n(X)`` and locate it in the right level.

    Heavy items (relations, function spaces, products) use members with at
    most three elements plus seeded random relations.

    Raises:
        GuardError: If ``V_n(X)`` cannot be materialized under ``cap``
    """
    atoms = base_set(X)
    oracle = _LevelOracle(atoms, n, cap)
    level = sorted(oracle.levels[n])
    sets = [e for e in level if not e.is_atom]
    small_sets = [s for s in sets if len(members_of(s)) <= SMALL]
    rng = random.Random(resolve(seed, "seed"))
    report = CheckReport("closure-properties", statistics={"level": n, "level_size": len(level)})

    def expect(item: int, obj: Entity, bound: int, **inputs) -> None:
        report.count(f"item{item}.instances")
        if not oracle.contains(bound, obj):
            report.fail(f"item {item} ({CLOSURE_ITEMS[item]}): object not in V_{bound}", item=item, object=obj, **inputs)

    for a in level:
        expect(1, HFSet([a]), n + 1, a=a)

    for A, B in product(sets, repeat=2):
        expect(2, c.union(A, B), n, A=A, B=B)
        expect(7, c.intersection(A, B), n, A=A, B=B)

    for size in range(SMALL + 1):
        for chosen in combinations(level, size):
            expect(3, HFSet(chosen), n + 1, members=list(chosen))

    for B in sets:
        for size in range(len(members_of(B)) + 1):
            for chosen in combinations(members_of(B), size):
                subset = HFSet(chosen)
                expect(4, subset, n, subset=subset, B=B)
                expect(5, c.big_union(subset), n, family=subset, B=B)
        expect(6, c.big_union(B), n, B=B)

    for a, b in product(level, repeat=2):
        expect(8, c.kuratowski(a, b), n + 2, a=a, b=b)
    for triple in combinations(level[:6], 3):
        expect(8, c.tuple_entity(list(triple)), n + 4, components=list(triple))

    relations: List[Entity] = []
    for A, B in product(small_sets, repeat=2):
        full = c.product(A, B)
        pairs = list(members_of(full))
        candidates = [full, HFSet()] + [HFSet([p]) for p in pairs]
        if pairs:
            candidates.append(HFSet(p for p in pairs if rng.random() < 0.5))
        for R in candidates:
            expect(9, R, n + 2, R=R, A=A, B=B)
            relations.append(R)

    level_relations = [R for R in sets if c.is_relation(R)]
    for R in sorted(set(relations) | set(level_relations)):
        expect(10, c.domain(R), n, R=R)
        expect(10, c.range_of(R), n, R=R)
        expect(10, c.inverse(R), n + 2, R=R)
        dom = members_of(c.domain(R))
        for size in range(len(dom) + 1):
            for chosen in combinations(dom, size):
                expect(10, c.image(R, HFSet(chosen)), n, R=R, C=HFSet(chosen))

    for A, B in product(small_sets, repeat=2):
        space = c.function_space(A, B, cap)
        expect(12, space, n + 3, A=A, B=B)
        for f in members_of(space):
            expect(11, f, n + 2, f=f, A=A, B=B)
            expect(11, c.image(f, A), n, f=f, A=A)
            expect(11, c.image(c.inverse(f), B), n, f=f, B=B)

    for family in small_sets:
        if any(m.is_atom or len(members_of(m)) > SMALL for m in members_of(family)):
            continue
        expect(13, c.choice_product(family, cap), n + 3, family=family)

    failed = sorted({cx.witness["item"] for cx in report.counterexamples})
    report.statistics["failed_items"] = failed
    logger.info(f"Closure check over V_{n}: {len(report.counterexamples)} failures")
    return report
