"""Set-theoretic constructions on entities: pairs, tuples, relations, functions."""

from itertools import combinations, product as cartesian
from typing import Iterable, List, Optional, Sequence, Tuple

from umt.config import resolve
from umt.entities import EMPTY, Entity, HFSet, members_of
from umt.errors import GuardError, PreconditionError


def kuratowski(a: Entity, b: Entity) -> HFSet:
    """``(a, b) = {{a}, {a, b}}``."""
    return HFSet([HFSet([a]), HFSet([a, b])])


def tuple_entity(components: Sequence[Entity]) -> Entity:
    """``(a1, ..., an) = ((a1, ..., a(n-1)), an)``; a 1-tuple is its component."""
    if not components:
        raise PreconditionError("A tuple needs at least one component")
    result = components[0]
    for item in components[1:]:
        result = kuratowski(result, item)
    return result


def decode_pair(e: Entity) -> Optional[Tuple[Entity, Entity]]:
    """Inverse of :func:`kuratowski`, or None when ``e`` is not a pair."""
    items = members_of(e)
    if not items or len(items) > 2 or any(m.is_atom for m in items):
        return None
    if len(items) == 1:
        only = members_of(items[0])
        if len(only) != 1:
            return None
        return only[0], only[0]
    small, large = sorted(items, key=lambda m: len(members_of(m)))
    small_members = members_of(small)
    large_members = members_of(large)
    if len(small_members) != 1 or len(large_members) != 2 or small_members[0] not in large_members:
        return None
    first = small_members[0]
    second = next(m for m in large_members if m != first)
    if kuratowski(first, second) != e:
        return None
    return first, second


def decode_tuple(e: Entity, n: int) -> Optional[Tuple[Entity, ...]]:
    if n < 1:
        return None
    if n == 1:
        return (e,)
    pair = decode_pair(e)
    if pair is None:
        return None
    head = decode_tuple(pair[0], n - 1)
    if head is None:
        return None
    return head + (pair[1],)


def decode_relation(e: Entity) -> Optional[List[Tuple[Entity, Entity]]]:
    """Pairs of a binary relation entity, or None if some member is not a pair."""
    pairs = []
    for m in members_of(e):
        pair = decode_pair(m)
        if pair is None:
            return None
        pairs.append(pair)
    return pairs


def _pairs(e: Entity) -> List[Tuple[Entity, Entity]]:
    pairs = decode_relation(e)
    if pairs is None:
        raise PreconditionError("Not a relation entity", e)
    return pairs


# ============================================================================
# Boolean algebra and products
# ============================================================================


def union(a: Entity, b: Entity) -> HFSet:
    return HFSet(members_of(a) + members_of(b))


def intersection(a: Entity, b: Entity) -> HFSet:
    right = set(members_of(b))
    return HFSet(m for m in members_of(a) if m in right)


def difference(a: Entity, b: Entity) -> HFSet:
    right = set(members_of(b))
    return HFSet(m for m in members_of(a) if m not in right)


def big_union(family: Entity) -> HFSet:
    return HFSet(m for member in members_of(family) for m in members_of(member))


def big_intersection(family: Entity) -> HFSet:
    """Intersection of the members of ``family`` (empty family gives the empty set)."""
    items = members_of(family)
    if not items:
        return EMPTY
    common = set(members_of(items[0]))
    for member in items[1:]:
        common &= set(members_of(member))
    return HFSet(common)


def is_subset(a: Entity, b: Entity) -> bool:
    right = set(members_of(b))
    return all(m in right for m in members_of(a))


def powerset(a: Entity, cap: Optional[int] = None) -> HFSet:
    items = members_of(a)
    if 2 ** len(items) > resolve(cap, "cap"):
        raise GuardError(f"Power set of a {len(items)}-element set exceeds the cap")
    subsets = []
    for size in range(len(items) + 1):
        subsets.extend(HFSet(c) for c in combinations(items, size))
    return HFSet(subsets)


def product(a: Entity, b: Entity) -> HFSet:
    return HFSet(kuratowski(x, y) for x in members_of(a) for y in members_of(b))


def function_space(a: Entity, b: Entity, cap: Optional[int] = None) -> HFSet:
    """``B^A``: all functions from ``a`` to ``b`` as sets of pairs."""
    domain_items = members_of(a)
    codomain_items = members_of(b)
    if len(codomain_items) ** len(domain_items) > resolve(cap, "cap"):
        raise GuardError("Function space exceeds the cap")
    return HFSet(
        HFSet(kuratowski(x, y) for x, y in zip(domain_items, values))
        for values in cartesian(codomain_items, repeat=len(domain_items))
    )


def choice_product(family: Entity, cap: Optional[int] = None) -> HFSet:
    """All choice functions ``f`` on ``family`` with ``f(A) in A``."""
    sets = members_of(family)
    size = 1
    for s in sets:
        size *= len(members_of(s))
    if size > resolve(cap, "cap"):
        raise GuardError("Choice product exceeds the cap")
    return HFSet(
        HFSet(kuratowski(s, v) for s, v in zip(sets, values))
        for values in cartesian(*(members_of(s) for s in sets))
    )


# ============================================================================
# Relations and functions
# ============================================================================


def is_relation(e: Entity) -> bool:
    return not e.is_atom and decode_relation(e) is not None


def domain(r: Entity) -> HFSet:
    return HFSet(x for x, _ in _pairs(r))


def range_of(r: Entity) -> HFSet:
    return HFSet(y for _, y in _pairs(r))


def inverse(r: Entity) -> HFSet:
    return HFSet(kuratowski(y, x) for x, y in _pairs(r))


def compose(s: Entity, r: Entity) -> HFSet:
    """``s ∘ r = {(x, z) : (x, y) in r and (y, z) in s}``."""
    right = _pairs(s)
    return HFSet(kuratowski(x, z) for x, y in _pairs(r) for y2, z in right if y == y2)


def image(r: Entity, a: Entity) -> HFSet:
    source = set(members_of(a))
    return HFSet(y for x, y in _pairs(r) if x in source)


def is_function(f: Entity, a: Optional[Entity] = None, b: Optional[Entity] = None) -> bool:
    """True iff ``f`` is a function (from ``a`` to ``b`` when given)."""
    pairs = decode_relation(f) if not f.is_atom else None
    if pairs is None:
        return False
    seen = {}
    for x, y in pairs:
        if x in seen and seen[x] != y:
            return False
        seen[x] = y
    if a is not None and set(seen) != set(members_of(a)):
        return False
    if b is not None and not set(seen.values()) <= set(members_of(b)):
        return False
    return True


def apply(f: Entity, x: Entity) -> Entity:
    """``f(x)`` for a function entity.

    Raises:
        PreconditionError: If ``x`` is outside the domain or ``f`` is not single-valued there
    """
    values = {y for a, y in _pairs(f) if a == x}
    if len(values) != 1:
        raise PreconditionError("Function application is undefined", x)
    return values.pop()


def is_injective(f: Entity) -> bool:
    pairs = _pairs(f)
    return len({y for _, y in pairs}) == len({x for x, _ in pairs})


def is_surjective(f: Entity, b: Entity) -> bool:
    return set(range_of(f)) == set(members_of(b))


def transitive_closure(e: Entity) -> HFSet:
    """Smallest transitive set containing every member of ``e``."""
    seen = set()
    stack = list(members_of(e))
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        stack.extend(members_of(cur))
    return HFSet(seen)


def members_union(entities: Iterable[Entity]) -> HFSet:
    return HFSet(m for e in entities for m in members_of(e))
