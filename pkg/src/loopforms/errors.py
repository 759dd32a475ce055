"""Exception types raised across the package."""

from __future__ import annotations


class LoopFormsError(Exception):
    """Base class for all package errors."""


class ContextError(LoopFormsError):
    """Operands live over different variable sets."""


class DivisionError(LoopFormsError, ZeroDivisionError):
    """Division by an identically zero polynomial or rational function."""


class SingularMatrixError(LoopFormsError):
    """A matrix (metric, Jacobian, ...) has identically vanishing determinant."""


class UnsupportedInputError(LoopFormsError):
    """Input lies outside the class an operation is defined on."""


class ModeError(LoopFormsError):
    """A bracket mode was requested whose preconditions the metric violates."""


class InputError(LoopFormsError):
    """Malformed structural input: dimensions, spec files, CLI arguments."""


class ParseError(LoopFormsError):
    """Syntax or semantic error in an expression, with its position."""

    def __init__(self, message: str, source: str = "", pos: int = 0):
        self.message = message
        self.source = source
        self.pos = pos
        before = source[:pos]
        self.line = before.count("\n") + 1
        self.column = pos - (before.rfind("\n") + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")


class SemanticError(ParseError):
    """Well-formed expression that violates a rule of the expression language."""
