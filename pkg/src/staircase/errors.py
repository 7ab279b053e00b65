"""Exception hierarchy shared by all staircase modules."""

from __future__ import annotations


class StaircaseError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(StaircaseError, ValueError):
    pass


class NotDownwardClosed(StaircaseError, ValueError):
    """Raised with a witness pair ``(p, p - e_i)`` where ``p - e_i`` is absent."""

    def __init__(self, point, lower):
        self.point = tuple(point)
        self.lower = tuple(lower)
        super().__init__(f"{self.point} present but {self.lower} missing")


class ParseError(StaircaseError, ValueError):
    def __init__(self, msg: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{msg} (line {line}, column {column})")


class InvalidDirection(StaircaseError, ValueError):
    pass


class NotOnSameLine(StaircaseError, ValueError):
    pass


class NotDisjoint(StaircaseError, ValueError):
    pass


class UnsupportedCase(StaircaseError, ValueError):
    pass


class NotFound(StaircaseError, LookupError):
    pass


class BadHypotheses(StaircaseError, ValueError):
    pass


class InternalContradiction(StaircaseError, AssertionError):
    """A proven statement failed on a concrete instance. Always a bug."""


class EmptyLine(StaircaseError, ValueError):
    pass


class SingularQ(StaircaseError, ArithmeticError):
    pass


class FieldTooSmall(StaircaseError, ValueError):
    pass


class DuplicatePoints(StaircaseError, ValueError):
    pass


class MatrixTooLarge(StaircaseError, ValueError):
    pass
