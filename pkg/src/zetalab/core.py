"""Small value types used across the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .errors import DomainError


@dataclass(frozen=True)
class ComplexPoint:
    """A point s = re + i*im of the complex plane (finite components only)."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"non-finite point ({self.re}, {self.im})")

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def of(cls, z) -> "ComplexPoint":
        z = complex(z)
        return cls(z.real, z.imag)


def as_complex(z) -> complex:
    """Coerce a ComplexPoint / number to complex, rejecting NaN and infinities."""
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"non-finite argument {w!r}")
    return w


@dataclass(frozen=True)
class Evaluation:
    """Numeric result with an absolute error bound.

    ``abs_error`` is a bound on |value - true| (rigorous where the method allows,
    otherwise the documented heuristic of the producing routine).  ``converged``
    is False whenever the truncation criterion was not met within the term budget.
    """

    value: Any
    abs_error: float = 0.0
    terms_used: int = 0
    converged: bool = True

    def __post_init__(self):
        if not self.abs_error >= 0.0:
            raise DomainError(f"abs_error must be nonnegative, got {self.abs_error}")

    def __complex__(self):
        return complex(self.value)

    def __float__(self):
        return float(self.value)


@dataclass
class Report:
    """Pass/fail record of one verification claim."""

    claim_id: str
    passed: bool
    measured: dict[str, float] = field(default_factory=dict)
    tolerance: float = 0.0
    notes: str = ""
    inconclusive: bool = False

    def to_record(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "passed": bool(self.passed),
            "inconclusive": bool(self.inconclusive),
            "measured": {k: float(v) for k, v in self.measured.items()},
            "tolerance": float(self.tolerance),
            "notes": self.notes,
        }
