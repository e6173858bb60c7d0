"""Ranks and the cumulative levels ``V_0(X) = X``, ``V_(n+1)(X) = V_n(X) ∪ P(V_n(X))``."""

import logging
from itertools import combinations
from typing import FrozenSet, Iterable, Optional

from umt.config import resolve
from umt.entities import Atom, Entity, EntityLike, HFSet, as_entity, atoms_of, members_of
from umt.errors import ForeignAtomError, GuardError, PreconditionError
from umt.superstructure.constructions import is_subset, powerset

logger = logging.getLogger(__name__)

BaseSet = FrozenSet[Atom]


def base_set(names: Iterable[EntityLike]) -> BaseSet:
    """Build a base set from atom names or atoms."""
    atoms = frozenset(as_entity(n) for n in names)
    for a in atoms:
        if not a.is_atom:
            raise PreconditionError("Base sets contain atoms only", a)
    return atoms  # type: ignore[return-value]


def check_atoms(e: Entity, X: Iterable[Atom]) -> None:
    """Raises ForeignAtomError if ``e`` mentions an atom outside ``X``."""
    allowed = set(X)
    foreign = sorted(a for a in atoms_of(e) if a not in allowed)
    if foreign:
        raise ForeignAtomError(f"Atoms {[a.name for a in foreign]} are not in the base set")


def rank(e: Entity, X: Optional[Iterable[Atom]] = None) -> int:
    """Least ``n`` with ``e`` in ``V_n(X)``.

    Raises:
        ForeignAtomError: If ``X`` is given and ``e`` uses an atom outside it
    """
    if X is not None:
        check_atoms(e, X)
    return e.height


def vn_size(base_size: int, n: int) -> int:
    """``|V_n|`` from the recurrence ``|V_(n+1)| = |X| + 2^|V_n|``."""
    size = base_size
    for _ in range(n):
        size = base_size + 2 ** size
    return size


def enumerate_vn(X: Iterable[EntityLike], n: int, cap: Optional[int] = None) -> FrozenSet[Entity]:
    """Materialize ``V_n(X)``.

    Raises:
        GuardError: If the predicted size exceeds ``cap``
    """
    limit = resolve(cap, "cap")
    atoms = base_set(X)
    level: FrozenSet[Entity] = frozenset(atoms)
    for step in range(n):
        predicted = len(atoms) + 2 ** len(level)
        if predicted > limit:
            raise GuardError(
                f"V_{step + 1} would hold {predicted} entities (cap {limit}); "
                "use rank or bounded evaluation instead of materializing"
            )
        items = sorted(level)
        subsets = [HFSet(c) for size in range(len(items) + 1) for c in combinations(items, size)]
        level = frozenset(atoms) | frozenset(subsets)
        logger.debug(f"V_{step + 1} materialized with {len(level)} entities")
    return level


def level_entity(X: Iterable[EntityLike], n: int, cap: Optional[int] = None) -> HFSet:
    """``V_n(X)`` as a single set entity."""
    return HFSet(enumerate_vn(X, n, cap))


def is_transitive(e: Entity) -> bool:
    """Members of members are members (atoms count as having no members)."""
    own = set(members_of(e))
    return all(m in own for member in members_of(e) for m in members_of(member))


def is_supertransitive(e: Entity) -> bool:
    """For every set member ``A``: ``A`` and all its subsets are members."""
    own = set(members_of(e))
    for member in members_of(e):
        if member.is_atom:
            continue
        if not is_subset(member, e):
            return False
        if any(s not in own for s in members_of(powerset(member))):
            return False
    return True


def build_supertransitive(S: Entity, cap: Optional[int] = None) -> HFSet:
    """``S ∪ P(S)`` for a transitive set ``S``.

    Raises:
        PreconditionError: If ``S`` is not transitive
    """
    if S.is_atom or not is_transitive(S):
        raise PreconditionError("Supertransitive closure needs a transitive set", S)
    return HFSet(members_of(S) + members_of(powerset(S, cap)))
