"""Pretty printer producing text that parses back to the same tree."""

from typing import Union

from umt.entities import format_entity
from umt.logic.syntax import (
    And,
    Apply,
    BoundedExists,
    BoundedForall,
    Constant,
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
)

_QUANTIFIER, _IFF, _IMPLIES, _OR, _AND, _NOT, _ATOM = range(7)

_BINARY_SYMBOLS = {Iff: ("<->", _IFF), Implies: ("->", _IMPLIES), Or: ("or", _OR), And: ("and", _AND)}


def format_term(t: Term) -> str:
    if isinstance(t, (Variable, Constant)):
        return t.name
    if isinstance(t, Apply):
        return f"{t.function}(" + ", ".join(format_term(a) for a in t.args) + ")"
    if isinstance(t, EntityConst):
        return "C_{" + format_entity(t.entity) + "}"
    raise TypeError(f"Not a term: {t!r}")


def _precedence(f: Formula) -> int:
    if isinstance(f, (Forall, Exists, BoundedForall, BoundedExists)):
        return _QUANTIFIER
    for cls, (_, prec) in _BINARY_SYMBOLS.items():
        if isinstance(f, cls):
            return prec
    if isinstance(f, Not) and not isinstance(f.body, (Eq, Mem)):
        return _NOT
    return _ATOM


def _wrap(f: Formula, parenthesize: bool) -> str:
    text = _format(f)
    return f"({text})" if parenthesize else text


def _format(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Mem):
        return f"{format_term(f.element)} in {format_term(f.container)}"
    if isinstance(f, Rel):
        return f"{f.name}(" + ", ".join(format_term(a) for a in f.args) + ")"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{format_term(f.body.left)} != {format_term(f.body.right)}"
        if isinstance(f.body, Mem):
            return f"{format_term(f.body.element)} notin {format_term(f.body.container)}"
        return "not " + _wrap(f.body, _precedence(f.body) < _NOT)
    for cls, (symbol, prec) in _BINARY_SYMBOLS.items():
        if isinstance(f, cls):
            left = _wrap(f.left, _precedence(f.left) < prec)
            right = _wrap(f.right, _precedence(f.right) <= prec)
            return f"{left} {symbol} {right}"
    if isinstance(f, (Forall, Exists)):
        word = "forall" if isinstance(f, Forall) else "exists"
        return f"{word} {f.var} . {_format(f.body)}"
    if isinstance(f, (BoundedForall, BoundedExists)):
        word = "forall" if isinstance(f, BoundedForall) else "exists"
        return f"{word} {f.var} in {format_term(f.bound)} . {_format(f.body)}"
    raise TypeError(f"Not a formula: {f!r}")


def format_formula(f: Union[Formula, Term]) -> str:
    """Render a formula (or a term) in the surface grammar."""
    if isinstance(f, Term):
        return format_term(f)
    return _format(f)
