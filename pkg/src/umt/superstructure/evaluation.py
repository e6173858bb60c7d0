"""Truth of bounded membership formulas over hereditarily finite entities.

Only the parameters' transitive closures matter for bounded formulas, so
evaluation never looks at an ambient universe.
"""

from typing import Dict, Mapping

from umt.entities import Entity, members_of
from umt.errors import PreconditionError, UnboundVariableError
from umt.logic.syntax import (
    And,
    BoundedExists,
    BoundedForall,
    EntityConst,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Mem,
    Not,
    Or,
    Rel,
    Term,
    Variable,
    is_bounded,
)

Environment = Mapping[str, Entity]


def eval_entity_term(t: Term, env: Mapping[str, Entity]) -> Entity:
    if isinstance(t, Variable):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariableError(f"Variable {t.name!r} has no value") from None
    if isinstance(t, EntityConst):
        return t.entity
    raise PreconditionError("Only variables and entity constants denote entities", t)


def eval_bounded(f: Formula, env: Environment) -> bool:
    """Evaluate a bounded formula under ``env``.

    Quantifiers over an atom or the empty set range over nothing.

    Raises:
        PreconditionError: On an unbounded quantifier or a relation symbol
        UnboundVariableError: On a free variable missing from ``env``
    """
    if not is_bounded(f):
        raise PreconditionError("Unbounded quantifier in bounded evaluation", f)
    scope: Dict[str, Entity] = dict(env)
    return _eval(f, scope)


def _eval(f: Formula, scope: Dict[str, Entity]) -> bool:
    if isinstance(f, Mem):
        container = eval_entity_term(f.container, scope)
        if container.is_atom:
            return False
        return eval_entity_term(f.element, scope) in container.members  # type: ignore[attr-defined]
    if isinstance(f, Eq):
        return eval_entity_term(f.left, scope) == eval_entity_term(f.right, scope)
    if isinstance(f, Not):
        return not _eval(f.body, scope)
    if isinstance(f, And):
        return _eval(f.left, scope) and _eval(f.right, scope)
    if isinstance(f, Or):
        return _eval(f.left, scope) or _eval(f.right, scope)
    if isinstance(f, Implies):
        return (not _eval(f.left, scope)) or _eval(f.right, scope)
    if isinstance(f, Iff):
        return _eval(f.left, scope) == _eval(f.right, scope)
    if isinstance(f, (BoundedForall, BoundedExists)):
        universal = isinstance(f, BoundedForall)
        bound = eval_entity_term(f.bound, scope)
        missing = object()
        saved = scope.get(f.var, missing)
        try:
            for member in members_of(bound):
                scope[f.var] = member
                if _eval(f.body, scope) != universal:
                    return not universal
            return universal
        finally:
            if saved is missing:
                scope.pop(f.var, None)
            else:
                scope[f.var] = saved  # type: ignore[assignment]
    if isinstance(f, (Forall, Exists)):
        raise PreconditionError("Unbounded quantifier in bounded evaluation", f.var)
    if isinstance(f, Rel):
        raise PreconditionError("Relation symbol in a membership formula", f.name)
    raise TypeError(f"Not a formula: {f!r}")
