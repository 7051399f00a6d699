"""Numerical checks of a claimed proof of the Riemann Hypothesis.

Special functions (specfun), zeta and its log-derivative (zeta), zero tables
and paired zero sums (zeros), the constructed functions and circle probes
(lemmas), and the claim ledger behind the command-line driver (claims, cli).
"""

from .core import ComplexPoint, Evaluation, Report
from .errors import (
    BoundError,
    ConditioningError,
    DomainError,
    InsufficientDataError,
    NearZeroError,
    NotFoundError,
    OrderError,
    ParseError,
    PoleError,
    RangeError,
    SingularityError,
    ZetaLabError,
)

__all__ = [
    "ComplexPoint",
    "Evaluation",
    "Report",
    "BoundError",
    "ConditioningError",
    "DomainError",
    "InsufficientDataError",
    "NearZeroError",
    "NotFoundError",
    "OrderError",
    "ParseError",
    "PoleError",
    "RangeError",
    "SingularityError",
    "ZetaLabError",
]
