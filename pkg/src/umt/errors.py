"""Exception hierarchy shared by every umt module."""

from typing import Any, Optional


class UmtError(Exception):
    """Base class for input, guard and precondition errors."""


class FormulaSyntaxError(UmtError):
    """Raised when formula or entity text does not match the surface grammar."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class UnknownSymbolError(UmtError):
    """A relation or function symbol is not declared in the language."""


class ArityError(UmtError):
    """A symbol was applied to the wrong number of arguments."""


class UnboundVariableError(UmtError):
    """A free variable has no value in the assignment or environment."""


class ForeignAtomError(UmtError):
    """An entity mentions an atom outside the base set."""


class GuardError(UmtError):
    """A size, depth or rank guard refused the computation."""


class PreconditionError(UmtError):
    """An operation precondition failed; ``witness`` pinpoints the violation."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message}: {witness}")
