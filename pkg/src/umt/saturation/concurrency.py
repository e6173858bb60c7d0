"""Concurrent relations: every finite subset of the domain has a common successor."""

import logging
from itertools import combinations
from typing import Iterable, Optional, Tuple

from umt.config import resolve
from umt.entities import Entity, HFSet, members_of
from umt.errors import GuardError, PreconditionError
from umt.superstructure.constructions import decode_relation, kuratowski, powerset

logger = logging.getLogger(__name__)


def _pairs(R: Entity):
    pairs = decode_relation(R) if not R.is_atom else None
    if pairs is None:
        raise PreconditionError("Not a relation entity", R)
    return pairs


def common_bound(R: Entity, xs: Iterable[Entity]) -> Optional[Entity]:
    """First ``y`` of ``ran(R)`` with ``x R y`` for every ``x`` in ``xs``."""
    pairs = set(_pairs(R))
    xs = list(xs)
    for y in sorted({y for _, y in pairs}):
        if all((x, y) in pairs for x in xs):
            return y
    return None


def check_concurrent(R: Entity) -> Tuple[bool, Optional[HFSet]]:
    """Whether ``R`` is concurrent; otherwise a smallest subset of the domain without a common successor.

    Raises:
        PreconditionError: If ``R`` is not a set of pairs
        GuardError: If the domain has more subsets than ``cap``
    """
    pairs = _pairs(R)
    domain = sorted({x for x, _ in pairs})
    if not domain or common_bound(R, domain) is not None:
        return True, None
    if 2 ** len(domain) > resolve(None, "cap"):
        raise GuardError(f"Domain of {len(domain)} elements has too many subsets")
    for size in range(1, len(domain) + 1):
        for subset in combinations(domain, size):
            if common_bound(R, subset) is None:
                logger.debug(f"Relation blocked by a subset of size {size}")
                return False, HFSet(subset)
    return True, None


def finite_subset_relation(A: Entity) -> HFSet:
    """``{(a, F) : a ∈ F ⊆ A}``, the standard example of a concurrent relation."""
    return HFSet(kuratowski(a, F) for F in members_of(powerset(A)) for a in members_of(F))
