"""Filters and ultrafilters over finite index sets.

Over a finite index set every filter is the family of supersets of one
nonempty core set, and every ultrafilter is principal. Both are stored by
their core; member lists are derived on demand.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from umt.errors import PreconditionError

logger = logging.getLogger(__name__)

Index = Hashable


def _ordered(index_set: Sequence[Index], subset: Iterable[Index]) -> Tuple[Index, ...]:
    chosen = set(subset)
    return tuple(i for i in index_set if i in chosen)


def subsets(index_set: Sequence[Index]) -> Iterator[frozenset]:
    """Every subset of ``index_set`` by size, then index order."""
    for size in range(len(index_set) + 1):
        for combo in combinations(index_set, size):
            yield frozenset(combo)


@dataclass(frozen=True)
class SetFamily:
    """A family of subsets of a finite, ordered index set."""

    index_set: Tuple[Index, ...]
    members: frozenset

    def __post_init__(self):
        index_set = tuple(dict.fromkeys(self.index_set))
        if not index_set:
            raise PreconditionError("Index set must be nonempty")
        members = frozenset(frozenset(m) for m in self.members)
        allowed = set(index_set)
        for m in members:
            if not m <= allowed:
                raise PreconditionError("Family member is not a subset of the index set", sorted(m - allowed, key=str))
        object.__setattr__(self, "index_set", index_set)
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, index_set: Iterable[Index], members: Iterable[Iterable[Index]]) -> "SetFamily":
        return cls(tuple(index_set), frozenset(frozenset(m) for m in members))

    def intersection(self) -> frozenset:
        """Intersection of all members; the whole index set for the empty family."""
        result = frozenset(self.index_set)
        for m in self.members:
            result &= m
        return result

    def ordered_members(self) -> List[Tuple[Index, ...]]:
        position = {i: k for k, i in enumerate(self.index_set)}
        rows = [_ordered(self.index_set, m) for m in self.members]
        return sorted(rows, key=lambda r: (len(r), [position[i] for i in r]))

    def with_member(self, extra: Iterable[Index]) -> "SetFamily":
        return SetFamily(self.index_set, self.members | {frozenset(extra)})

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: object) -> bool:
        return frozenset(item) in self.members  # type: ignore[arg-type]


@dataclass(frozen=True)
class Filter:
    """The filter of all supersets of ``core`` inside ``index_set``."""

    index_set: Tuple[Index, ...]
    core: frozenset

    def __post_init__(self):
        index_set = tuple(dict.fromkeys(self.index_set))
        core = frozenset(self.core)
        if not index_set:
            raise PreconditionError("Index set must be nonempty")
        if not core:
            raise PreconditionError("A filter cannot contain the empty set")
        if not core <= set(index_set):
            raise PreconditionError("Filter core is not a subset of the index set")
        object.__setattr__(self, "index_set", index_set)
        object.__setattr__(self, "core", core)

    def contains(self, subset: Iterable[Index]) -> bool:
        return self.core <= frozenset(subset)

    def __contains__(self, subset: object) -> bool:
        return self.contains(subset)  # type: ignore[arg-type]

    @property
    def members(self) -> frozenset:
        rest = [i for i in self.index_set if i not in self.core]
        return frozenset(self.core | s for s in subsets(rest))

    def family(self) -> SetFamily:
        return SetFamily(self.index_set, self.members)

    @property
    def is_ultra(self) -> bool:
        return len(self.core) == 1

    def ordered_core(self) -> Tuple[Index, ...]:
        return _ordered(self.index_set, self.core)

    def as_ultrafilter(self) -> "Ultrafilter":
        if not self.is_ultra:
            raise PreconditionError("Filter is not an ultrafilter", self.ordered_core())
        return Ultrafilter(self.index_set, self.core)


@dataclass(frozen=True)
class Ultrafilter(Filter):
    """A principal ultrafilter; every ultrafilter over a finite set is one."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.core) != 1:
            raise PreconditionError("Ultrafilters over finite index sets are principal", self.ordered_core())

    @property
    def principal_point(self) -> Index:
        return next(iter(self.core))


def principal(index_set: Iterable[Index], point: Index) -> Ultrafilter:
    """The ultrafilter of all sets containing ``point``."""
    index_set = tuple(index_set)
    if point not in index_set:
        raise PreconditionError("Principal point is not an index", point)
    return Ultrafilter(index_set, frozenset([point]))


# ============================================================================
# Operations on families
# ============================================================================


def has_fip(fam: SetFamily) -> bool:
    """Finite intersection property; over a finite family this is a nonempty total intersection."""
    return bool(fam.intersection())


def _require_fip(fam: SetFamily) -> frozenset:
    common = fam.intersection()
    if not common:
        raise PreconditionError("Family lacks the finite intersection property", fam.ordered_members())
    return common


def generate_filter(fam: SetFamily) -> Filter:
    """Smallest filter containing ``fam``.

    Raises:
        PreconditionError: If ``fam`` lacks the finite intersection property
    """
    return Filter(fam.index_set, _require_fip(fam))


def extend_to_ultrafilter(fam: SetFamily) -> Ultrafilter:
    """Principal ultrafilter at the first index (in index order) of the total intersection.

    Raises:
        PreconditionError: If ``fam`` lacks the finite intersection property
    """
    common = _require_fip(fam)
    point = next(i for i in fam.index_set if i in common)
    logger.debug(f"Extended family of {len(fam)} sets to the ultrafilter at {point!r}")
    return principal(fam.index_set, point)


def _as_family(fam) -> SetFamily:
    if isinstance(fam, Filter):
        return fam.family()
    return fam


def is_filter(fam) -> bool:
    """Nonempty, avoids the empty set, closed under intersections and supersets."""
    fam = _as_family(fam)
    if not fam.members or frozenset() in fam.members:
        return False
    members = list(fam.members)
    for a, b in combinations(members, 2):
        if a & b not in fam.members:
            return False
    index_set = frozenset(fam.index_set)
    for m in members:
        for extra in subsets([i for i in fam.index_set if i not in m]):
            if m | extra not in fam.members:
                return False
    return index_set in fam.members


def is_ultrafilter(fam) -> bool:
    """A filter containing exactly one of ``A`` and its complement for every ``A``."""
    fam = _as_family(fam)
    if not is_filter(fam):
        return False
    whole = frozenset(fam.index_set)
    return all((a in fam.members) != ((whole - a) in fam.members) for a in subsets(fam.index_set))


def is_maximal_filter(fam, candidates: Optional[Sequence[Filter]] = None) -> bool:
    """No filter over the same index set properly contains ``fam``."""
    fam = _as_family(fam)
    if not is_filter(fam):
        return False
    pool = candidates if candidates is not None else enumerate_filters(fam.index_set)
    return not any(fam.members < f.members for f in pool)


def is_countably_incomplete(f: Filter) -> Tuple[bool, str]:
    """Always false over a finite index set, with the reason."""
    reason = (
        f"index set has {len(f.index_set)} elements: a countable family of members repeats sets, "
        "so its intersection is a finite intersection and stays in the filter"
    )
    return False, reason


def enumerate_filters(index_set: Iterable[Index]) -> List[Filter]:
    """Every filter over ``index_set``, one per nonempty core, cores by size then index order."""
    index_set = tuple(index_set)
    return [Filter(index_set, core) for core in subsets(index_set) if core]


def enumerate_ultrafilters(index_set: Iterable[Index]) -> List[Ultrafilter]:
    index_set = tuple(index_set)
    return [principal(index_set, i) for i in index_set]


def partition_block(u: Ultrafilter, partition: Sequence[Iterable[Index]]) -> frozenset:
    """The unique block of a finite partition of the index set that lies in ``u``.

    Raises:
        PreconditionError: If ``partition`` is not a partition into nonempty blocks
    """
    blocks = [frozenset(b) for b in partition]
    if any(not b for b in blocks):
        raise PreconditionError("Partition blocks must be nonempty")
    seen: set = set()
    for b in blocks:
        if seen & b:
            raise PreconditionError("Partition blocks overlap", sorted(seen & b, key=str))
        seen |= b
    if seen != set(u.index_set):
        raise PreconditionError("Partition does not cover the index set", sorted(set(u.index_set) ^ seen, key=str))
    inside = [b for b in blocks if u.contains(b)]
    return inside[0]
