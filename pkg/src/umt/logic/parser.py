"""Recursive descent parser for the formula surface grammar.

Precedence, tightest first: ``not``, ``and``, ``or``, ``->``, ``<->``.
Binary connectives associate to the left and a quantifier body extends as
far to the right as possible.
"""

import logging
import re
from dataclasses import dataclass
from typing import List, Optional

from umt.entities import parse_entity
from umt.errors import ArityError, FormulaSyntaxError, UnknownSymbolError
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
    Language,
    Mem,
    Not,
    Or,
    Rel,
    Term,
    Variable,
)

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({"forall", "exists", "in", "notin", "not", "and", "or"})

_TOKEN_PATTERN = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<entity>C_\{)"
    r"|(?P<op><->|->|!=|=|\(|\)|,|\.)"
    r"|(?P<ident>[A-Za-z0-9_]+)"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def _position(text: str, offset: int) -> tuple:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens; entity constants are matched brace by brace."""
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_PATTERN.match(text, pos)
        if match is None:
            raise FormulaSyntaxError(f"Unexpected character {text[pos]!r}", *_position(text, pos))
        kind = match.lastgroup
        if kind == "space":
            pos = match.end()
            continue
        if kind == "entity":
            depth = 1
            cursor = match.end()
            while cursor < len(text) and depth:
                if text[cursor] == "{":
                    depth += 1
                elif text[cursor] == "}":
                    depth -= 1
                cursor += 1
            if depth:
                raise FormulaSyntaxError("Unterminated entity constant", *_position(text, pos))
            tokens.append(Token("entity", text[match.end():cursor - 1], pos))
            pos = cursor
            continue
        word = match.group(kind)
        if kind == "ident" and word in KEYWORDS:
            kind = "keyword"
        tokens.append(Token(kind, word, pos))
        pos = match.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class FormulaParser:
    """Parses one formula against a language."""

    def __init__(self, text: str, lang: Language):
        self.text = text
        self.lang = lang
        self.tokens = tokenize(text)
        self.index = 0

    # -- token helpers ---------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Optional[Token] = None) -> FormulaSyntaxError:
        tok = token or self.current
        return FormulaSyntaxError(message, *_position(self.text, tok.offset))

    def accept(self, text: str) -> bool:
        if self.current.text == text and self.current.kind in ("op", "keyword"):
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.current
        if not self.accept(text):
            shown = tok.text or "end of input"
            raise self.error(f"Expected {text!r}, found {shown!r}", tok)
        return tok

    # -- grammar ---------------------------------------------------------

    def parse(self) -> Formula:
        formula = self.formula()
        if self.current.kind != "eof":
            raise self.error(f"Unexpected {self.current.text!r}")
        return formula

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.implies()
        while self.accept("<->"):
            left = Iff(left, self.implies())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        while self.accept("->"):
            left = Implies(left, self.disjunction())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept("or"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.accept("and"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.accept("not"):
            return Not(self.unary())
        if self.current.kind == "keyword" and self.current.text in ("forall", "exists"):
            return self.quantifier()
        if self.accept("("):
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom()

    def quantifier(self) -> Formula:
        universal = self.current.text == "forall"
        self.index += 1
        var = self.variable_name()
        bound: Optional[Term] = None
        if self.accept("in"):
            bound = self.term()
        self.expect(".")
        body = self.formula()
        if bound is None:
            return Forall(var, body) if universal else Exists(var, body)
        return BoundedForall(var, bound, body) if universal else BoundedExists(var, bound, body)

    def variable_name(self) -> str:
        tok = self.current
        if tok.kind != "ident":
            raise self.error("Expected a variable name", tok)
        if tok.text in self.lang.relations or tok.text in self.lang.functions:
            raise self.error(f"{tok.text!r} is a declared symbol, not a variable", tok)
        self.index += 1
        return tok.text

    def atom(self) -> Formula:
        tok = self.current
        if tok.kind == "eof":
            raise self.error("Unexpected end of formula", tok)
        nxt = self.tokens[self.index + 1]
        if tok.kind == "ident" and nxt.text == "(" and tok.text not in self.lang.functions:
            if tok.text not in self.lang.relations:
                raise UnknownSymbolError(f"Unknown relation symbol {tok.text!r} at column {_position(self.text, tok.offset)[1]}")
            self.index += 1
            args = self.arguments()
            arity = self.lang.relations[tok.text]
            if arity != len(args):
                raise ArityError(f"{tok.text} expects {arity} arguments, got {len(args)}")
            return Rel(tok.text, tuple(args))
        if tok.kind == "ident" and tok.text in self.lang.relations:
            raise self.error(f"Relation {tok.text!r} must be applied to arguments", tok)
        left = self.term()
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Not(Eq(left, self.term()))
        if self.accept("in"):
            return Mem(left, self.term())
        if self.accept("notin"):
            return Not(Mem(left, self.term()))
        raise self.error("Expected '=', '!=', 'in' or 'notin'")

    def arguments(self) -> List[Term]:
        self.expect("(")
        args: List[Term] = []
        if self.accept(")"):
            return args
        args.append(self.term())
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return args

    def term(self) -> Term:
        tok = self.current
        if tok.kind == "entity":
            self.index += 1
            try:
                return EntityConst(parse_entity(tok.text))
            except FormulaSyntaxError as exc:
                raise self.error(f"Bad entity literal: {exc}", tok) from None
        if tok.kind != "ident":
            raise self.error("Expected a term", tok)
        self.index += 1
        if tok.text in self.lang.functions:
            arity = self.lang.functions[tok.text]
            if arity == 0:
                return Constant(tok.text)
            args = self.arguments()
            if arity != len(args):
                raise ArityError(f"{tok.text} expects {arity} arguments, got {len(args)}")
            return Apply(tok.text, tuple(args))
        if tok.text in self.lang.relations:
            raise self.error(f"Relation {tok.text!r} used as a term", tok)
        if self.current.text == "(":
            raise UnknownSymbolError(f"Unknown function symbol {tok.text!r}")
        return Variable(tok.text)


def parse_formula(text: str, lang: Optional[Language] = None) -> Formula:
    """Parse ``text`` into a formula over ``lang`` (the empty language by default).

    Raises:
        FormulaSyntaxError: With line and column of the offending token
        UnknownSymbolError: For an undeclared relation or function
        ArityError: For an argument count mismatch
    """
    formula = FormulaParser(text, lang or Language()).parse()
    logger.debug(f"Parsed formula {text!r}")
    return formula
