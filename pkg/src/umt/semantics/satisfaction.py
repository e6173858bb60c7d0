"""Recursive satisfaction for finite first-order structures."""

from typing import Dict, Mapping

from umt.errors import PreconditionError, UnboundVariableError
from umt.logic.syntax import (
    And,
    Apply,
    Constant,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Rel,
    Term,
    Variable,
    check_language,
    free_variables,
)
from umt.semantics.structures import Element, Structure

Assignment = Mapping[str, Element]


def eval_term(s: Structure, t: Term, a: Assignment) -> Element:
    """Value of ``t`` in ``s`` under ``a``.

    Raises:
        UnboundVariableError: If a variable of ``t`` is unassigned
    """
    if isinstance(t, Variable):
        try:
            return a[t.name]
        except KeyError:
            raise UnboundVariableError(f"Variable {t.name!r} has no value") from None
    if isinstance(t, Constant):
        return s.constant(t.name)
    if isinstance(t, Apply):
        return s.value(t.function, [eval_term(s, arg, a) for arg in t.args])
    raise PreconditionError("Entity constants have no value in a first-order structure", t)


def satisfies(s: Structure, f: Formula, a: Assignment) -> bool:
    """Whether ``s`` satisfies ``f`` under ``a``; quantifiers range over the whole universe.

    Raises:
        UnknownSymbolError: If ``f`` uses a symbol outside the structure's language
        PreconditionError: On membership syntax
        UnboundVariableError: If a free variable is unassigned
    """
    check_language(f, s.language)
    missing = free_variables(f) - set(a)
    if missing:
        raise UnboundVariableError(f"Unassigned free variables: {sorted(missing)}")
    return evaluate(s, f, dict(a))


def evaluate(s: Structure, f: Formula, scope: Dict[str, Element]) -> bool:
    """Unchecked recursive evaluation; ``scope`` is restored on return."""
    if isinstance(f, Rel):
        return s.holds(f.name, [eval_term(s, t, scope) for t in f.args])
    if isinstance(f, Eq):
        return eval_term(s, f.left, scope) == eval_term(s, f.right, scope)
    if isinstance(f, Not):
        return not evaluate(s, f.body, scope)
    if isinstance(f, And):
        return evaluate(s, f.left, scope) and evaluate(s, f.right, scope)
    if isinstance(f, Or):
        return evaluate(s, f.left, scope) or evaluate(s, f.right, scope)
    if isinstance(f, Implies):
        return (not evaluate(s, f.left, scope)) or evaluate(s, f.right, scope)
    if isinstance(f, Iff):
        return evaluate(s, f.left, scope) == evaluate(s, f.right, scope)
    if isinstance(f, (Forall, Exists)):
        universal = isinstance(f, Forall)
        missing = object()
        saved = scope.get(f.var, missing)
        try:
            for element in s.universe:
                scope[f.var] = element
                if evaluate(s, f.body, scope) != universal:
                    return not universal
            return universal
        finally:
            if saved is missing:
                scope.pop(f.var, None)
            else:
                scope[f.var] = saved  # type: ignore[assignment]
    raise PreconditionError("Membership syntax in a first-order context", f)
