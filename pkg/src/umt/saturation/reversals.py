"""Order reversals on finite ground sets: supports, localization and the prefix construction.

A reversal maps every subset of a finite ground set to a subset of a finite
index set. Subsets are visited by size, then ground-set order.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from umt.errors import PreconditionError, UmtError
from umt.filters.core import Filter, Index
from umt.logic.syntax import Formula
from umt.ultraproduct.products import IndexedFamily
from umt.ultraproduct.types import type_order_reversal

logger = logging.getLogger(__name__)

Ground = Hashable
Support = Dict[Index, FrozenSet[Ground]]


def _subsets(ground: Sequence[Ground]) -> List[FrozenSet[Ground]]:
    return [frozenset(c) for size in range(len(ground) + 1) for c in combinations(ground, size)]


@dataclass(frozen=True)
class OrderReversal:
    """A map ``p`` from subsets of ``ground_set`` to subsets of ``index_set``.

    ``target_family``, when given, is the declared codomain family and every
    value must belong to it.
    """

    ground_set: Tuple[Ground, ...]
    index_set: Tuple[Index, ...]
    mapping: Dict[FrozenSet[Ground], FrozenSet[Index]] = field(hash=False)
    target_family: Optional[FrozenSet[FrozenSet[Index]]] = None

    def __post_init__(self):
        ground = tuple(dict.fromkeys(self.ground_set))
        index_set = tuple(dict.fromkeys(self.index_set))
        mapping = {frozenset(k): frozenset(v) for k, v in self.mapping.items()}
        missing = [s for s in _subsets(ground) if s not in mapping]
        if missing:
            raise PreconditionError("Reversal is not total on the subsets of the ground set", self._label(missing[0], ground))
        extra = [s for s in mapping if not s <= set(ground)]
        if extra:
            raise PreconditionError("Reversal is defined outside the ground set", sorted(extra[0], key=str))
        for s, value in mapping.items():
            if not value <= set(index_set):
                raise PreconditionError("Reversal value leaves the index set", self._label(s, ground))
            if self.target_family is not None and value not in self.target_family:
                raise PreconditionError("Reversal value is outside the target family", self._label(s, ground))
        object.__setattr__(self, "ground_set", ground)
        object.__setattr__(self, "index_set", index_set)
        object.__setattr__(self, "mapping", mapping)

    @staticmethod
    def _label(s: Iterable[Ground], ground: Sequence[Ground]) -> List[Ground]:
        chosen = set(s)
        return [x for x in ground if x in chosen]

    def __call__(self, s: Iterable[Ground]) -> FrozenSet[Index]:
        return self.mapping[frozenset(s)]

    def subsets(self) -> List[FrozenSet[Ground]]:
        return _subsets(self.ground_set)

    def label(self, s: Iterable[Ground]) -> List[Ground]:
        return self._label(s, self.ground_set)

    def leq(self, other: "OrderReversal") -> bool:
        """Pointwise inclusion ``p ≤ q``."""
        return all(self(s) <= other(s) for s in self.subsets())

    @classmethod
    def constant(cls, ground_set: Sequence[Ground], index_set: Sequence[Index], value=None) -> "OrderReversal":
        value = frozenset(index_set) if value is None else frozenset(value)
        return cls(tuple(ground_set), tuple(index_set), {s: value for s in _subsets(tuple(ground_set))})


def _pairs(p: OrderReversal):
    subsets = p.subsets()
    for i, s in enumerate(subsets):
        for t in subsets[i:]:
            yield s, t


def first_violation(p: OrderReversal, anti_additive: bool) -> Optional[Tuple[FrozenSet[Ground], FrozenSet[Ground]]]:
    """First pair ``(s, t)`` breaking the order-reversal (or anti-additivity) law."""
    for s, t in _pairs(p):
        joined = p(s | t)
        meet = p(s) & p(t)
        if (joined != meet) if anti_additive else not (joined <= meet):
            return s, t
    return None


def is_order_reversal(p: OrderReversal) -> bool:
    """``p(s ∪ t) ⊆ p(s) ∩ p(t)`` for all subsets."""
    return first_violation(p, anti_additive=False) is None


def is_anti_additive(p: OrderReversal) -> bool:
    """``p(s ∪ t) = p(s) ∩ p(t)`` for all subsets."""
    return first_violation(p, anti_additive=True) is None


def local_bounds(p: OrderReversal) -> Dict[Index, int]:
    """Per index, the largest ``|s|`` with the index in ``p(s)`` (-1 when there is none)."""
    bounds = {i: -1 for i in p.index_set}
    for s in p.subsets():
        for i in p(s):
            bounds[i] = max(bounds[i], len(s))
    return bounds


def is_locally_finite(p: OrderReversal) -> bool:
    """Always true over a finite ground set; the bound per index is ``local_bounds(p)``."""
    bounds = local_bounds(p)
    logger.debug(f"Local bounds: {bounds}")
    return all(b <= len(p.ground_set) for b in bounds.values())


# ============================================================================
# Supports
# ============================================================================


def reversal_from_support(phi: Mapping[Index, Iterable[Ground]], ground_set: Sequence[Ground]) -> OrderReversal:
    """``p_Φ(s) = {i : s ⊆ Φ_i}``.

    Raises:
        PreconditionError: If some ``Φ_i`` is not a subset of the ground set
    """
    ground = tuple(ground_set)
    support = {i: frozenset(v) for i, v in phi.items()}
    for i, v in support.items():
        if not v <= set(ground):
            raise PreconditionError(f"Support set at {i!r} leaves the ground set")
    mapping = {s: frozenset(i for i, v in support.items() if s <= v) for s in _subsets(ground)}
    return OrderReversal(ground, tuple(support), mapping)


def support_of(p: OrderReversal) -> Support:
    """``Φ_i = ⋃{s : i ∈ p(s)}``, checked to satisfy ``p_Φ = p``.

    Raises:
        PreconditionError: If ``p`` is not anti-additive (witness: the first
            violating pair) or ``p(∅)`` is not the whole index set
    """
    violation = first_violation(p, anti_additive=True)
    if violation is not None:
        raise PreconditionError("Reversal is not anti-additive", tuple(p.label(s) for s in violation))
    if p(frozenset()) != frozenset(p.index_set):
        raise PreconditionError("A supported reversal sends the empty set to the whole index set", sorted(p(frozenset()), key=str))
    support: Support = {i: frozenset() for i in p.index_set}
    for s in p.subsets():
        for i in p(s):
            support[i] = support[i] | s
    if reversal_from_support(support, p.ground_set).mapping != p.mapping:
        raise UmtError("Support does not reproduce the reversal")
    return support


def supports(p: OrderReversal, phi: Mapping[Index, Iterable[Ground]], U: Filter) -> bool:
    """``i ∈ p(Φ_i)`` for every index and ``{i : x ∈ Φ_i} ∈ U`` for every ground element."""
    sets = {i: frozenset(v) for i, v in phi.items()}
    if set(sets) != set(p.index_set):
        return False
    if any(i not in p(sets[i]) for i in p.index_set):
        return False
    return all(U.contains(frozenset(i for i in p.index_set if x in sets[i])) for x in p.ground_set)


# ============================================================================
# Derived reversals
# ============================================================================


def localize(p: OrderReversal, chain: Sequence[Iterable[Index]]) -> OrderReversal:
    """``Lp(s) = p(s) ∩ I_|s|`` for a descending chain ``I_0 ⊇ I_1 ⊇ ...``.

    Raises:
        PreconditionError: If the chain is not descending, is shorter than
            ``|X| + 1``, or leaves the index set
    """
    links = [frozenset(c) for c in chain]
    if len(links) < len(p.ground_set) + 1:
        raise PreconditionError(f"Chain needs at least {len(p.ground_set) + 1} members", len(links))
    if not links[0] <= set(p.index_set):
        raise PreconditionError("Chain leaves the index set")
    for n in range(1, len(links)):
        if not links[n] <= links[n - 1]:
            raise PreconditionError("Chain is not descending", n)
    if links[-1]:
        logger.info(f"Chain ends in a nonempty set of {len(links[-1])} indices")
    mapping = {s: p(s) & links[len(s)] for s in p.subsets()}
    return OrderReversal(p.ground_set, p.index_set, mapping)


def exit_levels(chain: Sequence[Iterable[Index]], index_set: Iterable[Index]) -> Dict[Index, Optional[int]]:
    """``N(i) = min{n : i ∉ I_n}``, or None when ``i`` stays in every link."""
    links = [frozenset(c) for c in chain]
    return {i: next((n for n, link in enumerate(links) if i not in link), None) for i in index_set}


def monotone_antiadditive(p: OrderReversal) -> OrderReversal:
    """``q(s) = p({0, ..., max s})`` and ``q(∅) = p(∅)`` over the ground set ``{0, ..., m}``.

    Raises:
        PreconditionError: If the ground set is not an initial segment of the naturals
    """
    if list(p.ground_set) != list(range(len(p.ground_set))):
        raise PreconditionError("Ground set must be 0..m in order", list(p.ground_set))
    mapping = {}
    for s in p.subsets():
        mapping[s] = p(s) if not s else p(frozenset(range(max(s) + 1)))
    return OrderReversal(p.ground_set, p.index_set, mapping)


def order_reversal_from_type(fam: IndexedFamily, sigma: Sequence[Formula], variable: str = "x") -> OrderReversal:
    """The reversal ``Θ ↦ {i : A_i ⊨ ∃x ⋀Θ}`` over the formulas of a finite type."""
    ground = tuple(dict.fromkeys(sigma))
    return OrderReversal(ground, fam.index_set, type_order_reversal(fam, ground, variable))
