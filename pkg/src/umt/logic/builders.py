"""Named bounded formulas: emptiness, finite sets, tuples, products, functions, levels.

Every builder takes the names of its free variables and picks fresh names
for the variables it binds, so results can be nested without capture.
"""

from functools import lru_cache
from typing import Optional, Sequence

from umt.errors import PreconditionError
from umt.logic.syntax import (
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Formula,
    Iff,
    Implies,
    Mem,
    Not,
    Or,
    Variable,
    conjunction,
    disjunction,
    fresh_variable,
    unique_bounded_exists,
)

V = Variable


def _fresh(avoid: set, stem: str) -> str:
    name = fresh_variable(avoid, stem)
    avoid.add(name)
    return name


def phi_empty(x: str) -> Formula:
    """``x`` has no members: forall y in x . y != y."""
    y = _fresh({x}, "y")
    return BoundedForall(y, V(x), Not(Eq(V(y), V(y))))


def phi_finite_set(x: str, elements: Sequence[str]) -> Formula:
    """``x = {y1, ..., yn}``."""
    if not elements:
        return phi_empty(x)
    y = _fresh({x, *elements}, "y")
    memberships = [Mem(V(e), V(x)) for e in elements]
    exhaustive = BoundedForall(y, V(x), disjunction(Eq(V(y), V(e)) for e in elements))
    return And(conjunction(memberships), exhaustive)


def phi_pair(c: str, a: str, b: str) -> Formula:
    """``c = (a, b)``: exists x in c exists y in c (c = {x, y} and x = {a} and y = {a, b})."""
    avoid = {c, a, b}
    x = _fresh(avoid, "p")
    y = _fresh(avoid, "p")
    body = conjunction([phi_finite_set(c, [x, y]), phi_finite_set(x, [a]), phi_finite_set(y, [a, b])])
    return BoundedExists(x, V(c), BoundedExists(y, V(c), body))


def phi_tuple(c: str, components: Sequence[str]) -> Formula:
    """``c = (a1, ..., an)`` with ``(a1, ..., an) = ((a1, ..., a(n-1)), an)``."""
    n = len(components)
    if n == 0:
        raise PreconditionError("A tuple needs at least one component")
    if n == 1:
        return Eq(V(c), V(components[0]))
    if n == 2:
        return phi_pair(c, components[0], components[1])
    avoid = {c, *components}
    outer = _fresh(avoid, "q")
    head = _fresh(avoid, "q")
    inner = And(phi_tuple(head, components[:-1]), phi_pair(c, head, components[-1]))
    return BoundedExists(outer, V(c), BoundedExists(head, V(outer), inner))


def phi_subset(x: str, y: str) -> Formula:
    """``x`` is a subset of ``y``."""
    u = _fresh({x, y}, "u")
    return BoundedForall(u, V(x), Mem(V(u), V(y)))


def phi_product(x: str, y: str, z: str) -> Formula:
    """``x = y × z``."""
    avoid = {x, y, z}
    u = _fresh(avoid, "u")
    v = _fresh(avoid, "v")
    w = _fresh(avoid, "w")
    into = BoundedForall(u, V(x), BoundedExists(v, V(y), BoundedExists(w, V(z), phi_pair(u, v, w))))
    onto = BoundedForall(v, V(y), BoundedForall(w, V(z), BoundedExists(u, V(x), phi_pair(u, v, w))))
    return And(into, onto)


def phi_function(f: str, a: str, b: str) -> Formula:
    """``f`` is a function from ``a`` to ``b``."""
    avoid = {f, a, b}
    u = _fresh(avoid, "u")
    v = _fresh(avoid, "v")
    w = _fresh(avoid, "w")
    relation = BoundedForall(u, V(f), BoundedExists(v, V(a), BoundedExists(w, V(b), phi_pair(u, v, w))))
    graph = BoundedExists(u, V(f), phi_pair(u, v, w))
    total = BoundedForall(v, V(a), unique_bounded_exists(w, V(b), graph, avoid=avoid | {u}))
    return And(relation, total)


def phi_level_member(x: str, y: str, n: int) -> Formula:
    """``y`` lies in level ``n`` over the base set ``x``."""
    if n < 0:
        raise PreconditionError("Level index must be non-negative", n)
    if n == 0:
        return Mem(V(y), V(x))
    z = _fresh({x, y}, "z")
    return Or(Mem(V(y), V(x)), BoundedForall(z, V(y), phi_level_member(x, z, n - 1)))


def phi_level_set(x: str, y: str, n: int) -> Formula:
    """``y`` is a set in level ``n`` over ``x``."""
    return And(phi_level_member(x, y, n), Not(Mem(V(y), V(x))))


def nu(y: str, x: str, n: int) -> Formula:
    """``nu_0(y, x) = y in x``; ``nu_(n+1)(y, x) = nu_n(y, x) or forall z in y . nu_n(z, x)``."""
    if n < 0:
        raise PreconditionError("Level index must be non-negative", n)
    if n == 0:
        return Mem(V(y), V(x))
    z = _fresh({x, y}, "z")
    return Or(nu(y, x, n - 1), BoundedForall(z, V(y), nu(z, x, n - 1)))


def base_formula(x: str) -> Formula:
    """No member of ``x`` has members of its own."""
    avoid = {x}
    y = _fresh(avoid, "y")
    z = _fresh(avoid, "z")
    return BoundedForall(y, V(x), BoundedForall(z, V(y), Not(Eq(V(z), V(z)))))


# ============================================================================
# Named families with fixed free variables
# ============================================================================

PHI_KINDS = ("empty", "finite-set", "tuple", "subset", "product", "function", "vn-member", "vn-set")


@lru_cache(maxsize=None)
def build_phi(kind: str, n: Optional[int] = None) -> Formula:
    """Return a named bounded formula.

    Free variables: ``x`` first, then ``y1..yn`` for finite-set and tuple,
    ``y`` for subset and the level formulas, ``y, z`` for product and
    function (``x: y -> z``). The level formulas read ``x`` as the base set.

    Raises:
        PreconditionError: For an unknown kind or a missing/invalid ``n``
    """
    if kind == "empty":
        return phi_empty("x")
    if kind == "subset":
        return phi_subset("x", "y")
    if kind == "product":
        return phi_product("x", "y", "z")
    if kind == "function":
        return phi_function("x", "y", "z")
    if kind not in PHI_KINDS:
        raise PreconditionError("Unknown formula family", kind)
    if n is None:
        raise PreconditionError(f"Formula family {kind} needs an index")
    if kind == "finite-set":
        if n < 1:
            raise PreconditionError("Index must be at least 1", n)
        return phi_finite_set("x", [f"y{i}" for i in range(1, n + 1)])
    if kind == "tuple":
        if n < 1:
            raise PreconditionError("Index must be at least 1", n)
        return phi_tuple("x", [f"y{i}" for i in range(1, n + 1)])
    if kind == "vn-member":
        return phi_level_member("x", "y", n)
    return phi_level_set("x", "y", n)


@lru_cache(maxsize=None)
def build_nu(n: int) -> Formula:
    """``nu_n(y, x)``."""
    return nu("y", "x", n)


def build_base() -> Formula:
    """``BASE(x)``."""
    return base_formula("x")


def _pair_in(pair_components: Sequence[str], relation: str, avoid: set) -> Formula:
    """``(u, a) in f`` as ``exists w in f . w = (u, a)``."""
    w = _fresh(avoid | set(pair_components) | {relation}, "w")
    return BoundedExists(w, V(relation), phi_pair(w, pair_components[0], pair_components[1]))


@lru_cache(maxsize=None)
def build_psi_hyperfinite() -> Formula:
    """``Psi(A, f, n)``: ``f`` is a bijection from ``{0, ..., n-1}`` onto ``A``.

    The natural numbers enter as the free variables ``N`` (a finite prefix),
    ``PN`` (its power set) and ``LT`` (the strict order as a set of pairs).
    """
    names = {"A", "f", "n", "N", "PN", "LT"}
    U = _fresh(names, "U")
    m = _fresh(names, "m")
    x = _fresh(names, "x")
    u = _fresh(names, "u")
    v = _fresh(names, "u")
    a = _fresh(names, "a")
    b = _fresh(names, "a")

    def less(left: str, right: str) -> Formula:
        return _pair_in([left, right], "LT", names)

    def graph(left: str, right: str) -> Formula:
        return _pair_in([left, right], "f", names)

    initial_segment = And(
        phi_subset(U, "N"),
        BoundedForall(m, V("N"), Iff(less(m, "n"), Mem(V(m), V(U)))),
    )
    relation = BoundedForall(x, V("f"), BoundedExists(u, V(U), BoundedExists(a, V("A"), phi_pair(x, u, a))))
    total = BoundedForall(u, V(U), BoundedExists(a, V("A"), graph(u, a)))
    onto = BoundedForall(a, V("A"), BoundedExists(u, V(U), graph(u, a)))
    single_valued = BoundedForall(
        u, V(U), BoundedForall(a, V("A"), BoundedForall(b, V("A"), Implies(And(graph(u, a), graph(u, b)), Eq(V(a), V(b)))))
    )
    injective = BoundedForall(
        u,
        V(U),
        BoundedForall(v, V(U), Implies(BoundedExists(a, V("A"), And(graph(u, a), graph(v, a))), Eq(V(u), V(v)))),
    )
    psi = conjunction([initial_segment, relation, total, onto, single_valued, injective])
    return BoundedExists(U, V("PN"), psi)
