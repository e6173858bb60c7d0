"""Languages, terms and formulas as immutable trees."""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple, Union

from umt.entities import Entity
from umt.errors import ArityError, PreconditionError, UnknownSymbolError


@dataclass(frozen=True)
class Language:
    """Relation and function symbols with their arities (arity 0 function = constant)."""

    relations: Dict[str, int] = field(default_factory=dict)
    functions: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "relations", dict(self.relations))
        object.__setattr__(self, "functions", dict(self.functions))
        clash = set(self.relations) & set(self.functions)
        if clash:
            raise PreconditionError("Symbol names must be unique across relations and functions", sorted(clash))
        for name, arity in {**self.relations, **self.functions}.items():
            if arity < 0:
                raise ArityError(f"Negative arity for {name}: {arity}")

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.relations.items())), tuple(sorted(self.functions.items()))))

    @property
    def constants(self) -> Tuple[str, ...]:
        return tuple(sorted(n for n, a in self.functions.items() if a == 0))

    def relation_arity(self, name: str) -> int:
        if name not in self.relations:
            raise UnknownSymbolError(f"Unknown relation symbol {name!r}")
        return self.relations[name]

    def function_arity(self, name: str) -> int:
        if name not in self.functions:
            raise UnknownSymbolError(f"Unknown function symbol {name!r}")
        return self.functions[name]

    def with_constants(self, names: Iterable[str]) -> "Language":
        return Language(self.relations, {**self.functions, **{n: 0 for n in names}})


EMPTY_LANGUAGE = Language()
EPSILON_LANGUAGE = Language({"E": 2})


# ============================================================================
# Terms
# ============================================================================


class Term:
    """Base class for terms."""

    __slots__ = ()


@dataclass(frozen=True)
class Variable(Term):
    name: str


@dataclass(frozen=True)
class Constant(Term):
    name: str


@dataclass(frozen=True)
class Apply(Term):
    function: str
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class EntityConst(Term):
    """The constant naming a fixed entity in membership-language formulas."""

    entity: Entity


TermLike = Union[Term, str]


def as_term(value: TermLike) -> Term:
    """Strings name variables."""
    return Variable(value) if isinstance(value, str) else value


# ============================================================================
# Formulas
# ============================================================================


class Formula:
    """Base class for formulas."""

    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Mem(Formula):
    element: Term
    container: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class BoundedForall(Formula):
    var: str
    bound: Term
    body: Formula

    def __post_init__(self):
        if self.var in term_variables(self.bound):
            raise PreconditionError("Bound variable occurs in its bound term", self.var)


@dataclass(frozen=True)
class BoundedExists(Formula):
    var: str
    bound: Term
    body: Formula

    def __post_init__(self):
        if self.var in term_variables(self.bound):
            raise PreconditionError("Bound variable occurs in its bound term", self.var)


BINARY = (And, Or, Implies, Iff)
ATOMIC = (Eq, Rel, Mem)
QUANTIFIERS = (Forall, Exists, BoundedForall, BoundedExists)
BOUNDED = (BoundedForall, BoundedExists)


def conjunction(parts: Iterable[Formula]) -> Formula:
    """Left-nested And.

    Raises:
        PreconditionError: If ``parts`` is empty
    """
    items = list(parts)
    if not items:
        raise PreconditionError("A conjunction needs at least one formula")
    result = items[0]
    for item in items[1:]:
        result = And(result, item)
    return result


def disjunction(parts: Iterable[Formula]) -> Formula:
    items = list(parts)
    if not items:
        raise PreconditionError("A disjunction needs at least one formula")
    result = items[0]
    for item in items[1:]:
        result = Or(result, item)
    return result


# ============================================================================
# Traversals
# ============================================================================


def term_variables(t: Term) -> FrozenSet[str]:
    if isinstance(t, Variable):
        return frozenset({t.name})
    if isinstance(t, Apply):
        out: FrozenSet[str] = frozenset()
        for arg in t.args:
            out |= term_variables(arg)
        return out
    return frozenset()


def free_variables(f: Formula) -> FrozenSet[str]:
    """Variables with at least one free occurrence.

    Variables of a bounded quantifier's bound term are free unless an
    enclosing quantifier captures them.
    """
    if isinstance(f, Eq):
        return term_variables(f.left) | term_variables(f.right)
    if isinstance(f, Mem):
        return term_variables(f.element) | term_variables(f.container)
    if isinstance(f, Rel):
        out: FrozenSet[str] = frozenset()
        for arg in f.args:
            out |= term_variables(arg)
        return out
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, BINARY):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body) - {f.var}
    if isinstance(f, BOUNDED):
        return term_variables(f.bound) | (free_variables(f.body) - {f.var})
    raise TypeError(f"Not a formula: {f!r}")


def all_variables(f: Formula) -> FrozenSet[str]:
    """Every variable name occurring anywhere, bound or free."""
    names = set(free_variables(f))
    for node in subformulas(f):
        if isinstance(node, QUANTIFIERS):
            names.add(node.var)
    return frozenset(names)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from subformulas(f.body)


def terms_of(f: Formula) -> Iterator[Term]:
    """Top-level terms of every atom and every bound term."""
    for node in subformulas(f):
        if isinstance(node, Eq):
            yield node.left
            yield node.right
        elif isinstance(node, Mem):
            yield node.element
            yield node.container
        elif isinstance(node, Rel):
            yield from node.args
        elif isinstance(node, BOUNDED):
            yield node.bound


def entity_constants(f: Formula) -> FrozenSet[Entity]:
    found = set()

    def visit(t: Term) -> None:
        if isinstance(t, EntityConst):
            found.add(t.entity)
        elif isinstance(t, Apply):
            for arg in t.args:
                visit(arg)

    for t in terms_of(f):
        visit(t)
    return frozenset(found)


def is_bounded(f: Formula) -> bool:
    """True iff every quantifier is bounded."""
    return not any(isinstance(node, (Forall, Exists)) for node in subformulas(f))


def is_membership_formula(f: Formula) -> bool:
    """True iff the formula only uses =, membership and no relation/function symbols."""
    for node in subformulas(f):
        if isinstance(node, Rel):
            return False
    return not any(isinstance(t, (Apply, Constant)) for t in terms_of(f))


# ============================================================================
# Rewriting
# ============================================================================


def map_terms(f: Formula, fn: Callable[[Term], Term]) -> Formula:
    """Apply ``fn`` bottom-up to every term, leaving the formula shape intact."""

    def on_term(t: Term) -> Term:
        if isinstance(t, Apply):
            t = Apply(t.function, tuple(on_term(a) for a in t.args))
        return fn(t)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Eq):
            return Eq(on_term(g.left), on_term(g.right))
        if isinstance(g, Mem):
            return Mem(on_term(g.element), on_term(g.container))
        if isinstance(g, Rel):
            return Rel(g.name, tuple(on_term(a) for a in g.args))
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, BINARY):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, walk(g.body))
        if isinstance(g, BOUNDED):
            return type(g)(g.var, on_term(g.bound), walk(g.body))
        raise TypeError(f"Not a formula: {g!r}")

    return walk(f)


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Replace free occurrences of variables by terms.

    The replacement terms must not mention variables bound at the
    substitution point; callers pass constants or fresh names.
    """
    if not mapping:
        return f

    def on_term(t: Term, active: Mapping[str, Term]) -> Term:
        if isinstance(t, Variable) and t.name in active:
            return active[t.name]
        if isinstance(t, Apply):
            return Apply(t.function, tuple(on_term(a, active) for a in t.args))
        return t

    def walk(g: Formula, active: Mapping[str, Term]) -> Formula:
        if not active:
            return g
        if isinstance(g, Eq):
            return Eq(on_term(g.left, active), on_term(g.right, active))
        if isinstance(g, Mem):
            return Mem(on_term(g.element, active), on_term(g.container, active))
        if isinstance(g, Rel):
            return Rel(g.name, tuple(on_term(a, active) for a in g.args))
        if isinstance(g, Not):
            return Not(walk(g.body, active))
        if isinstance(g, BINARY):
            return type(g)(walk(g.left, active), walk(g.right, active))
        inner = {k: v for k, v in active.items() if k != g.var}
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, walk(g.body, inner))
        if isinstance(g, BOUNDED):
            return type(g)(g.var, on_term(g.bound, active), walk(g.body, inner))
        raise TypeError(f"Not a formula: {g!r}")

    return walk(f, dict(mapping))


def rename_free(f: Formula, mapping: Mapping[str, str]) -> Formula:
    return substitute(f, {old: Variable(new) for old, new in mapping.items()})


def fresh_variable(avoid: Iterable[str], stem: str = "v") -> str:
    taken = set(avoid)
    index = 0
    while f"{stem}{index}" in taken:
        index += 1
    return f"{stem}{index}"


def star_transform(f: Formula, star: Union[Mapping[Entity, Entity], Callable[[Entity], Entity]]) -> Formula:
    """Replace every entity constant ``C_e`` by ``C_{star(e)}``.

    Raises:
        PreconditionError: If a constant is outside the map's domain
    """
    lookup = star if callable(star) else None

    def replace(t: Term) -> Term:
        if not isinstance(t, EntityConst):
            return t
        if lookup is not None:
            return EntityConst(lookup(t.entity))
        try:
            return EntityConst(star[t.entity])  # type: ignore[index]
        except KeyError:
            raise PreconditionError("Unmapped entity constant", t.entity) from None

    return map_terms(f, replace)


def reduce_connectives(f: Formula) -> Formula:
    """Rewrite into the core {Not, And, Forall, BoundedForall} plus atoms."""
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(reduce_connectives(f.body))
    if isinstance(f, And):
        return And(reduce_connectives(f.left), reduce_connectives(f.right))
    if isinstance(f, Or):
        return Not(And(Not(reduce_connectives(f.left)), Not(reduce_connectives(f.right))))
    if isinstance(f, Implies):
        return Not(And(reduce_connectives(f.left), Not(reduce_connectives(f.right))))
    if isinstance(f, Iff):
        left = reduce_connectives(f.left)
        right = reduce_connectives(f.right)
        return And(Not(And(left, Not(right))), Not(And(right, Not(left))))
    if isinstance(f, Forall):
        return Forall(f.var, reduce_connectives(f.body))
    if isinstance(f, Exists):
        return Not(Forall(f.var, Not(reduce_connectives(f.body))))
    if isinstance(f, BoundedForall):
        return BoundedForall(f.var, f.bound, reduce_connectives(f.body))
    if isinstance(f, BoundedExists):
        return Not(BoundedForall(f.var, f.bound, Not(reduce_connectives(f.body))))
    raise TypeError(f"Not a formula: {f!r}")


def formula_depth(f: Formula) -> int:
    """Nesting count of Not/And/Forall after reducing derived connectives."""

    def depth(g: Formula) -> int:
        if isinstance(g, ATOMIC):
            return 0
        if isinstance(g, Not):
            return 1 + depth(g.body)
        if isinstance(g, And):
            return 1 + max(depth(g.left), depth(g.right))
        return 1 + depth(g.body)

    return depth(reduce_connectives(f))


def relativize_membership(f: Formula, relation: str = "E") -> Formula:
    """Translate a bounded membership formula into first-order syntax over ``relation``.

    ``x in y`` becomes ``E(x, y)`` and ``forall x in t . phi`` becomes
    ``forall x . (E(x, t) -> phi)``.
    """
    for t in terms_of(f):
        if not isinstance(t, Variable):
            raise PreconditionError("Only variables can be relativized", t)
    if isinstance(f, Eq):
        return f
    if isinstance(f, Mem):
        return Rel(relation, (f.element, f.container))
    if isinstance(f, Rel):
        raise PreconditionError("Relation symbols cannot appear in a membership formula", f.name)
    if isinstance(f, Not):
        return Not(relativize_membership(f.body, relation))
    if isinstance(f, BINARY):
        return type(f)(relativize_membership(f.left, relation), relativize_membership(f.right, relation))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, relativize_membership(f.body, relation))
    if isinstance(f, BoundedForall):
        guard = Rel(relation, (Variable(f.var), f.bound))
        return Forall(f.var, Implies(guard, relativize_membership(f.body, relation)))
    if isinstance(f, BoundedExists):
        guard = Rel(relation, (Variable(f.var), f.bound))
        return Exists(f.var, And(guard, relativize_membership(f.body, relation)))
    raise TypeError(f"Not a formula: {f!r}")


def check_language(f: Formula, lang: Language, allow_membership: bool = False) -> None:
    """Validate symbols and arities against ``lang``.

    Raises:
        UnknownSymbolError: For undeclared symbols
        ArityError: For wrong argument counts
        PreconditionError: For membership syntax outside membership contexts
    """

    def check_term(t: Term) -> None:
        if isinstance(t, Constant):
            if lang.function_arity(t.name) != 0:
                raise ArityError(f"{t.name} expects {lang.functions[t.name]} arguments")
        elif isinstance(t, Apply):
            arity = lang.function_arity(t.function)
            if arity != len(t.args):
                raise ArityError(f"{t.function} expects {arity} arguments, got {len(t.args)}")
            for arg in t.args:
                check_term(arg)
        elif isinstance(t, EntityConst) and not allow_membership:
            raise PreconditionError("Entity constants only occur in membership formulas", t.entity)

    for node in subformulas(f):
        if isinstance(node, Rel):
            arity = lang.relation_arity(node.name)
            if arity != len(node.args):
                raise ArityError(f"{node.name} expects {arity} arguments, got {len(node.args)}")
        elif isinstance(node, (Mem,) + BOUNDED) and not allow_membership:
            raise PreconditionError("Membership syntax in a first-order context", node)
    for t in terms_of(f):
        check_term(t)


def unique_bounded_exists(var: str, bound: TermLike, body: Formula, avoid: Optional[Iterable[str]] = None) -> Formula:
    """``exists! var in bound . body`` expanded to its bounded definition."""
    bound_term = as_term(bound)
    taken = set(all_variables(body)) | set(term_variables(bound_term)) | {var} | set(avoid or ())
    other = fresh_variable(taken, "u")
    renamed = rename_free(body, {var: other})
    uniqueness = BoundedForall(other, bound_term, Implies(renamed, Eq(Variable(other), Variable(var))))
    return BoundedExists(var, bound_term, And(body, uniqueness))
