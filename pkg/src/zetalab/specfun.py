"""Complex log-gamma, digamma and trigamma plus the coth/tanh lattice sums.

All three gamma-family functions use the same scheme: shift the argument with
the recurrence until Re z >= ``_SHIFT_TO``, then apply the Stirling-type
asymptotic series with ten Bernoulli terms.  The remainder of those series is
bounded by the first omitted term times sec^(2K+2)(arg z / 2) <= 2^(K+1) for
Re z > 0, which is what the reported ``abs_error`` uses (plus rounding).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import Evaluation, as_complex
from .errors import DomainError, PoleError

EPS = 2.220446049250313e-16
EULER_GAMMA = 0.57721566490153286061
LN_PI = math.log(math.pi)
LN_2PI = math.log(2.0 * math.pi)

# B_2, B_4, ..., B_20 and the first omitted one, B_22.
BERNOULLI_2K = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)
_B22 = 854513.0 / 138.0
_K = len(BERNOULLI_2K)
_SHIFT_TO = 10.0


@dataclass(frozen=True)
class Constants:
    euler_gamma: float
    ln_pi: float
    ln_2sqrt_pi: float
    a_const: float
    rho_sum_const: float


def constants() -> Constants:
    ln_2sqrt_pi = math.log(2.0) + 0.5 * LN_PI
    return Constants(
        euler_gamma=EULER_GAMMA,
        ln_pi=LN_PI,
        ln_2sqrt_pi=ln_2sqrt_pi,
        a_const=ln_2sqrt_pi - EULER_GAMMA / 2.0 - 1.0,
        rho_sum_const=1.0 + EULER_GAMMA / 2.0 - ln_2sqrt_pi,
    )


CONSTANTS = constants()


def _check_pole(z: complex) -> None:
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"pole at nonpositive integer {z.real:g}")


def _stirling_factor(K: int) -> float:
    # sec^(2K+2)(arg/2) <= 2^(K+1) on Re z > 0
    return 2.0 ** (K + 1)


def log_gamma(z) -> Evaluation:
    """Principal branch of log Gamma(z) (continuation from the positive axis).

    On the negative real axis the upper side is taken, whatever the sign of a zero
    imaginary part.
    """
    z = as_complex(z)
    _check_pole(z)
    if z.imag == 0:
        z = complex(z.real, 0.0)
    shift = 0j
    w = z
    n = 0
    while w.real < _SHIFT_TO:
        shift += cmath.log(w)
        w += 1.0
        n += 1
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    p = inv
    for k, b in enumerate(BERNOULLI_2K, start=1):
        series += b / (2 * k * (2 * k - 1)) * p
        p *= inv2
    value = (w - 0.5) * cmath.log(w) - w + 0.5 * LN_2PI + series - shift
    rem = abs(_B22) / ((2 * _K + 2) * (2 * _K + 1)) * abs(p) * _stirling_factor(_K)
    rounding = 8 * EPS * (abs(w) * abs(cmath.log(w)) + abs(w) + abs(shift) + n + 1)
    return Evaluation(value, rem + rounding, terms_used=_K + n)


def digamma(z) -> Evaluation:
    """psi(z) = Gamma'(z)/Gamma(z)."""
    z = as_complex(z)
    _check_pole(z)
    acc = 0j
    acc_abs = 0.0
    w = z
    n = 0
    while w.real < _SHIFT_TO:
        r = 1.0 / w
        acc -= r
        acc_abs += abs(r)
        w += 1.0
        n += 1
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    p = inv2
    for k, b in enumerate(BERNOULLI_2K, start=1):
        series += b / (2 * k) * p
        p *= inv2
    value = cmath.log(w) - 0.5 * inv - series + acc
    rem = abs(_B22) / (2 * _K + 2) * abs(p) * _stirling_factor(_K)
    rounding = 8 * EPS * (abs(cmath.log(w)) + acc_abs + n + 1)
    return Evaluation(value, rem + rounding, terms_used=_K + n)


def trigamma(z) -> Evaluation:
    """psi'(z) = sum_{n>=0} 1/(n+z)^2."""
    z = as_complex(z)
    _check_pole(z)
    acc = 0j
    acc_abs = 0.0
    w = z
    n = 0
    while w.real < _SHIFT_TO:
        r = 1.0 / (w * w)
        acc += r
        acc_abs += abs(r)
        w += 1.0
        n += 1
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    p = inv2 * inv
    for b in BERNOULLI_2K:
        series += b * p
        p *= inv2
    value = inv + 0.5 * inv2 + series + acc
    rem = abs(_B22) * abs(p) * _stirling_factor(_K)
    rounding = 8 * EPS * (abs(inv) + acc_abs + n + 1)
    return Evaluation(value, rem + rounding, terms_used=_K + n)


# ---------------------------------------------------------------------------
# closed-form lattice sums


def _check_y(y: float) -> float:
    y = float(y)
    if not (math.isfinite(y) and y > 0.0):
        raise DomainError(f"y must be a positive finite real, got {y!r}")
    return y


def _coth(x: float) -> float:
    return 1.0 / math.tanh(x)


def sum_inv_n2_y2(y: float) -> Evaluation:
    """sum_{n>=1} 1/(n^2 + y^2) = -1/(2y^2) + (pi/(2y)) coth(pi y)."""
    y = _check_y(y)
    big = math.pi / (2.0 * y) * _coth(math.pi * y)
    value = big - 1.0 / (2.0 * y * y)
    return Evaluation(value, 4 * EPS * (abs(big) + 1.0 / (2.0 * y * y)))


def sum_inv_odd2_y2(y: float) -> Evaluation:
    """sum_{n>=1} 1/((2n-1)^2 + y^2) = (pi/(4y)) tanh(pi y / 2)."""
    y = _check_y(y)
    value = math.pi / (4.0 * y) * math.tanh(math.pi * y / 2.0)
    return Evaluation(value, 4 * EPS * abs(value))


def sum_inv_even2_y2(y: float) -> Evaluation:
    """sum_{n>=1} 1/((2n)^2 + y^2) = -1/(2y^2) + (pi/(4y)) coth(pi y / 2)."""
    y = _check_y(y)
    big = math.pi / (4.0 * y) * _coth(math.pi * y / 2.0)
    value = big - 1.0 / (2.0 * y * y)
    return Evaluation(value, 4 * EPS * (abs(big) + 1.0 / (2.0 * y * y)))
