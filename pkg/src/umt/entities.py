"""Hereditarily finite entities: atoms and extensional sets, hash-consed.

Every entity is interned by its canonical key, so two entities are equal
exactly when they are the same object. Keys are the atom name for atoms and
``{k1,k2,...}`` over the sorted member keys for sets.
"""

import logging
import threading
from typing import Dict, FrozenSet, Iterable, Iterator, List, Tuple, Union

from umt.errors import FormulaSyntaxError

logger = logging.getLogger(__name__)

_POOL: Dict[str, "Entity"] = {}
_POOL_LOCK = threading.Lock()


class Entity:
    """Base class for atoms and sets.

    ``height`` is the intrinsic rank: 0 for atoms, 1 + max member height for
    sets, and 1 for the empty set.
    """

    __slots__ = ("key", "height", "_hash")

    is_atom = False

    def __lt__(self, other: "Entity") -> bool:
        return (self.height, self.key) < (other.height, other.key)

    def __le__(self, other: "Entity") -> bool:
        return (self.height, self.key) <= (other.height, other.key)

    def __gt__(self, other: "Entity") -> bool:
        return (self.height, self.key) > (other.height, other.key)

    def __ge__(self, other: "Entity") -> bool:
        return (self.height, self.key) >= (other.height, other.key)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Entity) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __copy__(self) -> "Entity":
        return self

    def __deepcopy__(self, memo) -> "Entity":
        return self

    def __repr__(self) -> str:
        return f"{type(self).__name__}({format_entity(self)})"

    def __str__(self) -> str:
        return format_entity(self)


class Atom(Entity):
    """A named individual with no members."""

    __slots__ = ("name",)

    is_atom = True

    def __new__(cls, name: str) -> "Atom":
        if not name or not all(ch.isalnum() or ch == "_" for ch in name):
            raise FormulaSyntaxError(f"Invalid atom name {name!r}")
        existing = _POOL.get(name)
        if existing is not None:
            return existing  # type: ignore[return-value]
        with _POOL_LOCK:
            existing = _POOL.get(name)
            if existing is not None:
                return existing  # type: ignore[return-value]
            obj = object.__new__(cls)
            obj.name = name
            obj.key = name
            obj.height = 0
            obj._hash = hash(("atom", name))
            _POOL[name] = obj
            return obj

    @property
    def members(self) -> FrozenSet[Entity]:
        return frozenset()

    def __reduce__(self):
        return (Atom, (self.name,))


class HFSet(Entity):
    """An extensional finite set of entities."""

    __slots__ = ("members", "_sorted")

    def __new__(cls, members: Iterable[Entity] = ()) -> "HFSet":
        frozen = frozenset(members)
        ordered = tuple(sorted(frozen))
        key = "{" + ",".join(m.key for m in ordered) + "}"
        existing = _POOL.get(key)
        if existing is not None:
            return existing  # type: ignore[return-value]
        with _POOL_LOCK:
            existing = _POOL.get(key)
            if existing is not None:
                return existing  # type: ignore[return-value]
            obj = object.__new__(cls)
            obj.members = frozen
            obj._sorted = ordered
            obj.key = key
            obj.height = 1 + max((m.height for m in ordered), default=0)
            obj._hash = hash(("set", key))
            _POOL[key] = obj
            return obj

    def __iter__(self) -> Iterator[Entity]:
        return iter(self._sorted)

    def __len__(self) -> int:
        return len(self._sorted)

    def __contains__(self, item: object) -> bool:
        return item in self.members

    def sorted_members(self) -> Tuple[Entity, ...]:
        return self._sorted

    def __reduce__(self):
        return (HFSet, (self._sorted,))


EMPTY = HFSet()

EntityLike = Union[Entity, str]


def atom(name: str) -> Atom:
    """Return the interned atom called ``name``."""
    return Atom(name)


def hfset(*members: EntityLike) -> HFSet:
    """Build a set from entities or atom names."""
    return HFSet(as_entity(m) for m in members)


def as_entity(value: EntityLike) -> Entity:
    """Coerce an atom name to an Atom; entities pass through."""
    if isinstance(value, Entity):
        return value
    return Atom(value)


def members_of(e: Entity) -> Tuple[Entity, ...]:
    """Members of ``e`` in canonical order (atoms have none)."""
    if isinstance(e, HFSet):
        return e.sorted_members()
    return ()


def is_set(e: Entity) -> bool:
    return isinstance(e, HFSet)


def pool_size() -> int:
    """Number of interned entities."""
    return len(_POOL)


def atoms_of(e: Entity) -> FrozenSet[Atom]:
    """All atoms occurring hereditarily in ``e`` (an atom supports itself)."""
    found = set()
    stack = [e]
    seen = set()
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        if isinstance(cur, Atom):
            found.add(cur)
        else:
            stack.extend(members_of(cur))
    return frozenset(found)


# ============================================================================
# Literal grammar
# ============================================================================


def format_entity(e: Entity) -> str:
    """Canonical literal: atom name, or ``{m1,m2,...}`` in sorted member order."""
    if isinstance(e, Atom):
        return e.name
    return "{" + ",".join(format_entity(m) for m in members_of(e)) + "}"


class _EntityReader:
    """Recursive descent over ``atom | {e,...} | (e,...)``."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> FormulaSyntaxError:
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        return FormulaSyntaxError(message, line, col)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"Expected {ch!r}")
        self.pos += 1

    def entity(self) -> Entity:
        ch = self.peek()
        if ch == "{":
            self.pos += 1
            items = self.items("}")
            return HFSet(items)
        if ch == "(":
            self.pos += 1
            items = self.items(")")
            if len(items) < 2:
                raise self.error("A tuple needs at least two components")
            from umt.superstructure.constructions import tuple_entity

            return tuple_entity(items)
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            raise self.error("Expected an atom, '{' or '('")
        return Atom(self.text[start:self.pos])

    def items(self, close: str) -> List[Entity]:
        items: List[Entity] = []
        if self.peek() == close:
            self.pos += 1
            return items
        while True:
            items.append(self.entity())
            ch = self.peek()
            if ch == ",":
                self.pos += 1
                continue
            if ch == close:
                self.pos += 1
                return items
            raise self.error(f"Expected ',' or {close!r}")


def parse_entity(text: str) -> Entity:
    """Parse an entity literal. ``(a,b)`` is sugar for the Kuratowski pair.

    Raises:
        FormulaSyntaxError: If the literal is malformed
    """
    reader = _EntityReader(text)
    value = reader.entity()
    if reader.peek():
        raise reader.error("Trailing characters after entity literal")
    return value
