"""The ultrapower star map over a finite index set.

Every ultrafilter over a finite index set is principal, so a pointwise
function is determined up to ``=_U`` by its value at the principal point.
``quotient`` recurses through that value: the ``U``-members of ``f`` are the
functions whose value at the point is a member of ``f``'s value there.

In canonical mode atom classes are named by the atom itself, so the image
base set equals the base set and ``star`` is the identity. Otherwise the
class of an atom ``a`` is the fresh atom ``U_a``.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from umt.config import get_settings
from umt.entities import Atom, Entity, HFSet, members_of
from umt.errors import GuardError, PreconditionError
from umt.filters.core import Filter, Index, principal
from umt.superstructure.levels import BaseSet, base_set, check_atoms, enumerate_vn, level_entity

logger = logging.getLogger(__name__)

PointwiseFunction = Mapping[Index, Entity]

STANDARD = "standard"
INTERNAL = "internal"
EXTERNAL = "external"


@dataclass(frozen=True)
class Classification:
    """Standard, internal or external, with the witness that decided it."""

    kind: str
    witness: Any = None

    @property
    def is_internal(self) -> bool:
        return self.kind in (STANDARD, INTERNAL)


@dataclass
class StarMapContext:
    """Base set, rank bound and ultrafilter of a star map, with its caches.

    ``tracked`` holds the entities of the base universe registered for
    classification; ``overrides`` replaces chosen images of ``star``.
    """

    base: BaseSet
    rank_bound: int
    index_set: Tuple[Index, ...]
    ultrafilter: Filter
    canonicalize: bool = True
    overrides: Dict[Entity, Entity] = field(default_factory=dict)
    tracked: set = field(default_factory=set)
    _cache: Dict[Entity, Entity] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.base = base_set(self.base)
        if not self.base:
            raise PreconditionError("Base set must be nonempty")
        if self.rank_bound < 0:
            raise PreconditionError("Rank bound must be non-negative", self.rank_bound)
        self.index_set = tuple(dict.fromkeys(self.index_set))
        if set(self.ultrafilter.index_set) != set(self.index_set):
            raise PreconditionError("Ultrafilter is over another index set")
        if not self.ultrafilter.is_ultra:
            raise PreconditionError("Star maps need an ultrafilter", self.ultrafilter.ordered_core())

    @classmethod
    def create(
        cls,
        base: Iterable,
        rank_bound: int,
        index_set: Iterable[Index] = ("0",),
        point: Optional[Index] = None,
        canonicalize: Optional[bool] = None,
        track_levels: bool = True,
    ) -> "StarMapContext":
        """Context with the principal ultrafilter at ``point`` (default: first index)."""
        index_set = tuple(index_set)
        U = principal(index_set, index_set[0] if point is None else point)
        if canonicalize is None:
            canonicalize = get_settings().canonicalize
        ctx = cls(base_set(base), rank_bound, index_set, U, canonicalize)
        if track_levels:
            ctx.track_available_levels()
        return ctx

    @property
    def point(self) -> Index:
        return next(iter(self.ultrafilter.core))

    @property
    def atoms(self) -> List[Atom]:
        return sorted(self.base)

    # ------------------------------------------------------------------
    # Pointwise functions and their quotients
    # ------------------------------------------------------------------

    def constant(self, a: Entity) -> Dict[Index, Entity]:
        return {i: a for i in self.index_set}

    def _check_function(self, f: PointwiseFunction) -> Entity:
        missing = [i for i in self.index_set if i not in f]
        if missing:
            raise PreconditionError("Pointwise function is not total on the index set", missing)
        value = f[self.point]
        check_atoms(value, self.base)
        if value.height > self.rank_bound:
            raise GuardError(f"Rank {value.height} exceeds the rank bound {self.rank_bound}")
        return value

    def member_u(self, g: PointwiseFunction, f: PointwiseFunction) -> bool:
        """``g ∈_U f``: the set of indices where ``g(i) ∈ f(i)`` is in ``U``."""
        agree = frozenset(i for i in self.index_set if g[i] in members_of(f[i]))
        return self.ultrafilter.contains(agree)

    def equal_u(self, g: PointwiseFunction, f: PointwiseFunction) -> bool:
        agree = frozenset(i for i in self.index_set if g[i] == f[i])
        return self.ultrafilter.contains(agree)

    def quotient(self, f: PointwiseFunction) -> Entity:
        """``f/U``: an atom for rank-0 values, else the set of quotients of ``U``-members.

        Raises:
            GuardError: If the value at the principal point exceeds the rank bound
            ForeignAtomError: If that value mentions atoms outside the base set
        """
        return self._collapse(self._check_function(f))

    def _collapse(self, value: Entity) -> Entity:
        cached = self._cache.get(value)
        if cached is not None:
            return cached
        if value.is_atom:
            result: Entity = value if self.canonicalize else Atom(f"U_{value.key}")
        else:
            # U-members of a function with this value: one class per member at the point
            result = HFSet(self._collapse(m) for m in members_of(value))
        with self._lock:
            self._cache.setdefault(value, result)
        return result

    def cache_size(self) -> int:
        return len(self._cache)

    # ------------------------------------------------------------------
    # The star map
    # ------------------------------------------------------------------

    def star(self, a: Entity) -> Entity:
        """``*a = c_a/U``.

        Raises:
            GuardError: If ``rank(a)`` exceeds the rank bound
        """
        if a in self.overrides:
            return self.overrides[a]
        return self.quotient(self.constant(a))

    def in_bound(self, a: Entity) -> bool:
        return a.height <= self.rank_bound

    @property
    def image_base(self) -> FrozenSet[Atom]:
        return frozenset(self.star(a) for a in self.base)  # type: ignore[misc]

    def sigma_image(self, A: Entity) -> HFSet:
        """``σA = {*a : a ∈ A}``."""
        return HFSet(self.star(a) for a in members_of(A))

    def pullback(self, v: Entity) -> Entity:
        """The ``u`` with ``*u = v``.

        Raises:
            PreconditionError: If ``v`` is not in the image of ``star``
        """
        for u, image in self.overrides.items():
            if image == v:
                return u
        candidate = self._invert(v)
        if candidate is not None and self.in_bound(candidate) and self.star(candidate) == v:
            return candidate
        for u in sorted(self.tracked):
            if self.in_bound(u) and self.star(u) == v:
                return u
        raise PreconditionError("Entity is not a standard image", v)

    def _invert(self, v: Entity) -> Optional[Entity]:
        if v.is_atom:
            if self.canonicalize:
                return v if v in self.base else None
            name = v.key
            if not name.startswith("U_"):
                return None
            original = Atom(name[2:])
            return original if original in self.base else None
        members = []
        for m in members_of(v):
            inverse = self._invert(m)
            if inverse is None:
                return None
            members.append(inverse)
        return HFSet(members)

    # ------------------------------------------------------------------
    # Classification
    # ------------------------------------------------------------------

    def track(self, entities: Iterable[Entity]) -> None:
        for e in entities:
            check_atoms(e, self.base)
            self.tracked.add(e)

    def track_level(self, n: int) -> None:
        """Register the members of ``V_n(X)`` and, within the rank bound, ``V_n(X)`` itself.

        Raises:
            GuardError: If ``V_n(X)`` cannot be materialized
        """
        level = enumerate_vn(self.base, n)
        self.track(level)
        if n + 1 <= self.rank_bound:
            self.track([level_entity(self.base, n)])

    def track_available_levels(self) -> int:
        """Track ``V_n(X)`` for every ``n`` below the rank bound that fits under ``cap``."""
        tracked = -1
        for n in range(self.rank_bound):
            try:
                self.track_level(n)
            except GuardError:
                break
            tracked = n
        logger.debug(f"Tracked levels up to V_{tracked}: {len(self.tracked)} entities")
        return tracked

    def _tracked_sets(self) -> List[Entity]:
        return [u for u in sorted(self.tracked) if not u.is_atom and self.in_bound(u)]

    def internal_witness(self, v: Entity) -> Optional[Entity]:
        """A tracked set ``A`` with ``v ∈ *A``, if any."""
        for A in self._tracked_sets():
            if v in members_of(self.star(A)):
                return A
        return None

    def is_internal(self, v: Entity) -> bool:
        return self.internal_witness(v) is not None

    def classify(self, v: Entity) -> Classification:
        for u in sorted(self.tracked):
            if self.in_bound(u) and self.star(u) == v:
                return Classification(STANDARD, u)
        witness = self.internal_witness(v)
        if witness is not None:
            return Classification(INTERNAL, witness)
        return Classification(EXTERNAL, {"tracked_sets": len(self._tracked_sets())})


def corrupted(ctx: StarMapContext, overrides: Mapping[Entity, Entity]) -> StarMapContext:
    """A copy of ``ctx`` whose star map answers from ``overrides`` first."""
    clone = StarMapContext(
        ctx.base,
        ctx.rank_bound,
        ctx.index_set,
        ctx.ultrafilter,
        ctx.canonicalize,
        {**ctx.overrides, **dict(overrides)},
        set(ctx.tracked),
    )
    logger.info(f"Corrupted star map with {len(overrides)} overridden images")
    return clone
