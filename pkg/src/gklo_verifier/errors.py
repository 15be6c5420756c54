from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .quiver import Violation


class GkloError(Exception):
    """Base class for every domain error raised by gklo_verifier."""


class IndexOutOfRange(GkloError, IndexError):
    pass


class SubstitutionDegenerate(GkloError):
    """A denominator factor became the zero form under substitution."""


class RepeatedPole(GkloError):
    pass


class NonLinearPole(GkloError):
    pass


class NotAPole(GkloError):
    pass


class CoefficientNotPolynomial(GkloError):
    """A mode coefficient of H kept a denominator after reduction."""


class NoScalarRelation(GkloError):
    pass


class WrongCartanCase(GkloError):
    pass


class ConventionUnresolved(GkloError):
    pass


class ParseError(GkloError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class ValidationError(GkloError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = tuple(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"invalid quiver with involution:\n{lines}")
