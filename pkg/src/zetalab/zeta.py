"""zeta(s), zeta'(s) and zeta'/zeta on the critical strip.

zeta is obtained from the alternating Dirichlet eta series,
zeta(s) = eta(s) / (1 - 2^(1-s)), with eta accelerated by Borwein's
Chebyshev-weighted scheme::

    eta(s) ~= sum_{k<n} (-1)^k c_k (k+1)^(-s),   c_k = (d_n - d_k) / d_n

whose truncation error is bounded by
3 (1 + 2|t|) e^(pi|t|/2) / ((3 + sqrt 8)^n |1 - 2^(1-s)|).
The weights c_k live in [0, 1] and are built from normalized logarithms, so
n in the thousands does not overflow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .core import ComplexPoint, Evaluation, as_complex
from .errors import ConditioningError, NearZeroError, PoleError
from .specfun import EPS, LN_PI, digamma, log_gamma

LN2 = math.log(2.0)
_LN_RATE = math.log(3.0 + math.sqrt(8.0))
MAX_TERMS = 20000
ZERO_THRESHOLD = 1e-8
POLE_THRESHOLD = 1e-6
DEFAULT_TOL = 1e-12


@lru_cache(maxsize=64)
def borwein_weights(n: int) -> np.ndarray:
    """Signed weights (-1)^k c_k, k = 0..n-1 (read-only array)."""
    i = np.arange(n + 1, dtype=float)
    # log of n (n+i-1)! 4^i / ((n-i)! (2i)!), i = 0..n
    log_a = (
        math.log(n)
        + gammaln(n + i)
        + i * math.log(4.0)
        - gammaln(n - i + 1)
        - gammaln(2 * i + 1)
    )
    a = np.exp(log_a - log_a.max())
    # c_k = sum_{i>k} a_i / sum_i a_i
    suffix = np.cumsum(a[::-1])[::-1]
    c = suffix[1:] / suffix[0]
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    w = signs * c
    w.setflags(write=False)
    return w


def _log_trunc_bound(s: complex, n: int) -> float:
    """log of the eta-truncation bound divided by |1 - 2^(1-s)|.

    Left of Re s = 1/2 the terms k^(-s) grow, and the bound picks up a factor
    n^max(1/2 - Re s, -2 Re s); the exponent was fitted against 30-digit
    reference values on -1 < Re s < 1/2 and is tight near Re s = -1/2.
    """
    t = abs(s.imag)
    denom = abs(1.0 - cmath.exp((1.0 - s) * LN2))
    growth = max(0.0, 0.5 - s.real, -2.0 * s.real) * math.log(n)
    return (
        math.log(3.0) + math.log1p(2.0 * t) + math.pi * t / 2.0
        - n * _LN_RATE - math.log(denom) + growth
    )


def terms_needed(s: complex, tol: float) -> int:
    """Smallest n whose truncation bound is below tol (at least 8)."""
    n = max(math.ceil((_log_trunc_bound(s, 1) + _LN_RATE - math.log(tol)) / _LN_RATE), 8)
    while _log_trunc_bound(s, n) > math.log(tol):
        n += 1
    return n


def _eta_sums(s: np.ndarray, n: int, derivative: bool):
    """eta (and eta') for an array of s with a common term count n."""
    w = borwein_weights(n)
    logk = np.log(np.arange(1, n + 1, dtype=float))
    powers = np.exp(-np.outer(s, logk))  # (k+1)^(-s)
    eta = powers @ w
    if not derivative:
        return eta, None
    eta_p = -(powers * logk) @ w
    return eta, eta_p


def _check_domain(s: complex) -> complex:
    if abs(s - 1.0) < POLE_THRESHOLD:
        raise PoleError(f"s = {s} within {POLE_THRESHOLD:g} of the pole at 1")
    if abs(s.real - 1.0) < POLE_THRESHOLD and s.imag != 0.0:
        k = round(s.imag * LN2 / (2.0 * math.pi))
        if k != 0 and abs(s - complex(1.0, 2.0 * math.pi * k / LN2)) < POLE_THRESHOLD:
            raise ConditioningError(
                f"s = {s} within {POLE_THRESHOLD:g} of an eta-denominator zero"
            )
    return s


def _zeta_and_prime(s: complex, tol: float, derivative: bool):
    s = _check_domain(as_complex(s))
    n = terms_needed(s, tol)
    converged = n <= MAX_TERMS
    n = min(n, MAX_TERMS)
    eta, eta_p = _eta_sums(np.array([s]), n, derivative)
    eta = complex(eta[0])
    two = cmath.exp((1.0 - s) * LN2)  # 2^(1-s)
    denom = 1.0 - two
    z = eta / denom
    # truncation bound already includes 1/|denom|; add summation rounding
    rounding = 4 * EPS * math.sqrt(n) * n ** max(0.0, 1.0 - s.real) / abs(denom)
    trunc = math.exp(_log_trunc_bound(s, n))
    z_eval = Evaluation(z, trunc + rounding, terms_used=n, converged=converged)
    if not derivative:
        return z_eval, None
    eta_p = complex(eta_p[0])
    zp = eta_p / denom - eta * two * LN2 / (denom * denom)
    # heuristic: derivative error scales with log(n) times the eta error
    err_p = (trunc + rounding) * (1.0 + math.log(n)) * (1.0 + abs(two) / abs(denom))
    return z_eval, Evaluation(zp, err_p, terms_used=n, converged=converged)


def zeta(s, tol: float = DEFAULT_TOL) -> Evaluation:
    """Riemann zeta on the window -1 < Re s <= 2 (accuracy stated for |Im s| <= 200)."""
    return _zeta_and_prime(s, tol, derivative=False)[0]


def zeta_prime(s, tol: float = DEFAULT_TOL) -> Evaluation:
    return _zeta_and_prime(s, tol, derivative=True)[1]


def _log_deriv_from(z: Evaluation, zp: Evaluation, s, threshold: float) -> Evaluation:
    mag = abs(z.value)
    if mag <= threshold:
        raise NearZeroError(f"|zeta({s})| = {mag:.3g} below threshold {threshold:g}")
    q = zp.value / z.value
    err = (zp.abs_error + abs(q) * z.abs_error) / mag + 4 * EPS * abs(q)
    return Evaluation(
        q,
        err,
        terms_used=z.terms_used,
        converged=z.converged and zp.converged,
    )


def zeta_log_deriv(
    s, tol: float = DEFAULT_TOL, threshold: float = ZERO_THRESHOLD
) -> Evaluation:
    """zeta'(s)/zeta(s); NearZeroError when |zeta(s)| <= threshold."""
    z, zp = _zeta_and_prime(s, tol, derivative=True)
    return _log_deriv_from(z, zp, s, threshold)


def zeta_log_deriv_many(s, tol: float = DEFAULT_TOL) -> np.ndarray:
    """zeta'/zeta on an array of points sharing one term count (no error bounds).

    Meant for dense sampling; callers needing guarantees use zeta_log_deriv.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    for p in s:
        _check_domain(complex(p))
    n = min(max(terms_needed(complex(p), tol) for p in s), MAX_TERMS)
    eta, eta_p = _eta_sums(s, n, derivative=True)
    two = np.exp((1.0 - s) * LN2)
    denom = 1.0 - two
    z = eta / denom
    zp = eta_p / denom - eta * two * LN2 / (denom * denom)
    return zp / z


@dataclass(frozen=True)
class ZetaEval:
    s: ComplexPoint
    zeta: Evaluation
    zeta_prime: Evaluation
    log_deriv: Evaluation | None
    near_zero_flag: bool
    near_pole_flag: bool


def zeta_eval(s, tol: float = DEFAULT_TOL, threshold: float = ZERO_THRESHOLD) -> ZetaEval:
    """zeta, zeta' and (when conditioned) zeta'/zeta at one point, with flags."""
    sc = as_complex(s)
    near_pole = abs(sc - 1.0) < POLE_THRESHOLD
    if near_pole:
        raise PoleError(f"s = {sc} within {POLE_THRESHOLD:g} of the pole at 1")
    z, zp = _zeta_and_prime(sc, tol, derivative=True)
    near_zero = abs(z.value) <= threshold
    ld = None if near_zero else _log_deriv_from(z, zp, sc, threshold)
    return ZetaEval(ComplexPoint.of(sc), z, zp, ld, near_zero, near_pole)


def _log_prefactor(s: complex) -> complex:
    """log of Gamma(s/2) pi^(-s/2)."""
    return log_gamma(s / 2.0).value - s / 2.0 * LN_PI


def functional_eq_residual(s, tol: float = DEFAULT_TOL) -> float:
    """Relative residual of Gamma(s/2)pi^(-s/2)zeta(s) = Gamma((1-s)/2)pi^(-(1-s)/2)zeta(1-s)."""
    s = as_complex(s)
    la = _log_prefactor(s)
    lb = _log_prefactor(1.0 - s)
    za = zeta(s, tol).value
    zb = zeta(1.0 - s, tol).value
    # scale both sides by exp(-max real log) to stay in range
    m = max(la.real, lb.real)
    left = cmath.exp(la - m) * za
    right = cmath.exp(lb - m) * zb
    big = max(abs(left), abs(right))
    if big == 0.0:
        return 0.0
    return abs(left - right) / big


def sumdig_residual(s, tol: float = DEFAULT_TOL, threshold: float = ZERO_THRESHOLD) -> float:
    """|zeta'/zeta(s) + zeta'/zeta(1-s) + psi(s/2)/2 + psi((1-s)/2)/2 - ln pi|."""
    s = as_complex(s)
    a = zeta_log_deriv(s, tol, threshold).value
    b = zeta_log_deriv(1.0 - s, tol, threshold).value
    pa = digamma(s / 2.0).value
    pb = digamma((1.0 - s) / 2.0).value
    return abs(a + b + 0.5 * pa + 0.5 * pb - LN_PI)
