"""Exception hierarchy shared by every zetalab module."""


class ZetaLabError(Exception):
    """Base class for all errors raised by zetalab."""


class DomainError(ZetaLabError, ValueError):
    """Argument outside the documented domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole."""


class ConditioningError(ZetaLabError, ArithmeticError):
    """The requested quantity cannot be computed to useful accuracy at this point."""


class NearZeroError(ConditioningError):
    """|zeta| fell below the zero-proximity threshold, so a quotient is meaningless."""


class SingularityError(ConditioningError):
    """Point lies on top of a term's singularity (a zero or its reflection)."""


class ParseError(ZetaLabError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class OrderError(ParseError):
    """Zero ordinates not strictly increasing."""


class BoundError(ParseError):
    """Zero ordinate below the admissible lower bound for t_1."""


class RangeError(ZetaLabError, IndexError):
    """Index or count exceeds the available data."""


class NotFoundError(ZetaLabError, LookupError):
    """A search (zero lookup, balance point on a circle) came back empty."""


class InsufficientDataError(ZetaLabError, ValueError):
    """Too few usable samples for a fit."""
