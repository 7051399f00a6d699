"""Vectorized Hardy Z(t) by the Riemann-Siegel formula, for table generation at large t.

Z(t) = 2 sum_{n<=N} n^(-1/2) cos(theta(t) - t ln n)
       + (-1)^(N-1) a^(-1/2) sum_{k=0}^{4} C_k(p) a^(-k),
a = sqrt(t / 2 pi), N = floor(a), p = a - N.

The C_k are the usual combinations of derivatives of
Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p), which is entire; its Taylor
series about p = 1/2 is built once in extended precision and differentiated
term by term.  Gabcke's bound for the k <= 4 remainder is 0.017 t^(-11/4) for
t >= 200.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np

from .specfun import BERNOULLI_2K, LN_PI

_DEGREE = 90


@lru_cache(maxsize=1)
def _psi_taylor() -> np.ndarray:
    """Coefficients c_j of Psi(1/2 + u) = sum c_j u^j (float64)."""
    with mpmath.workdps(60):
        two_pi = 2 * mpmath.pi
        deg = _DEGREE
        num = [mpmath.mpf(0)] * (deg + 1)
        den = [mpmath.mpf(0)] * (deg + 1)
        c5, s5 = mpmath.cos(5 * mpmath.pi / 8), mpmath.sin(5 * mpmath.pi / 8)
        # cos(2 pi u^2 - 5 pi/8) = cos(5pi/8) cos(2pi u^2) + sin(5pi/8) sin(2pi u^2)
        for j in range(deg // 2 + 1):
            term = two_pi**j / mpmath.factorial(j)
            power = 2 * j
            if power > deg:
                break
            if j % 4 == 0:
                num[power] += c5 * term
            elif j % 4 == 1:
                num[power] += s5 * term
            elif j % 4 == 2:
                num[power] -= c5 * term
            else:
                num[power] -= s5 * term
        for j in range(deg // 2 + 1):
            den[2 * j] = (-1) ** j * two_pi ** (2 * j) / mpmath.factorial(2 * j)
        # Psi = -num/den
        out = [mpmath.mpf(0)] * (deg + 1)
        for k in range(deg + 1):
            acc = num[k]
            for i in range(1, k + 1):
                acc -= den[i] * out[k - i]
            out[k] = acc / den[0]
        return np.array([-float(c) for c in out])


@lru_cache(maxsize=16)
def _derivative_coeffs(order: int) -> np.ndarray:
    c = _psi_taylor()
    poly = np.polynomial.Polynomial(c)
    return poly.deriv(order).coef if order else c


def _psi_derivative(order: int, u: np.ndarray) -> np.ndarray:
    coef = _derivative_coeffs(order)
    return np.polynomial.polynomial.polyval(u, coef)


def rs_coefficients(p: np.ndarray) -> list[np.ndarray]:
    """C_0..C_4 at fractional parts p."""
    u = np.asarray(p, dtype=float) - 0.5
    d = {k: _psi_derivative(k, u) for k in (0, 1, 2, 3, 4, 5, 6, 8, 9, 12)}
    pi2 = math.pi**2
    c0 = d[0]
    c1 = -d[3] / (96 * pi2)
    c2 = d[2] / (64 * pi2) + d[6] / (18432 * pi2**2)
    c3 = -d[1] / (64 * pi2) - d[5] / (3840 * pi2**2) - d[9] / (5308416 * pi2**3)
    c4 = (
        d[0] / (128 * pi2)
        + 19 * d[4] / (24576 * pi2**2)
        + 11 * d[8] / (5898240 * pi2**3)
        + d[12] / (2038431744 * pi2**4)
    )
    return [c0, c1, c2, c3, c4]


def theta(t: np.ndarray) -> np.ndarray:
    """Riemann-Siegel theta(t) = Im log Gamma(1/4 + it/2) - (t/2) ln pi, vectorized.

    Same shift-then-Stirling evaluation as ``specfun.log_gamma`` (shift by 10).
    """
    t = np.asarray(t, dtype=float)
    z = 0.25 + 0.5j * t
    shift = np.zeros_like(z)
    for k in range(10):
        shift += np.log(z + k)
    w = z + 10
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(z)
    p = inv
    for k, b in enumerate(BERNOULLI_2K, start=1):
        series += b / (2 * k * (2 * k - 1)) * p
        p = p * inv2
    lg = (w - 0.5) * np.log(w) - w + 0.5 * math.log(2 * math.pi) + series - shift
    return lg.imag - 0.5 * t * LN_PI


def hardy_z_rs(t: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Riemann-Siegel Z(t) for an array of t (intended for t >= 200)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    for start in range(0, t.size, chunk):
        tt = t[start : start + chunk]
        a = np.sqrt(tt / (2 * math.pi))
        N = np.floor(a).astype(int)
        p = a - N
        th = theta(tt)
        nmax = int(N.max())
        n = np.arange(1, nmax + 1, dtype=float)
        phase = th[:, None] - np.outer(tt, np.log(n))
        terms = np.cos(phase) / np.sqrt(n)
        terms[n[None, :] > N[:, None]] = 0.0
        main = 2.0 * terms.sum(axis=1)
        cs = rs_coefficients(p)
        inv_a = 1.0 / a
        corr = np.zeros_like(tt)
        for k, ck in enumerate(cs):
            corr += ck * inv_a**k
        sign = np.where(N % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
        out[start : start + chunk] = main + sign * corr / np.sqrt(a)
    return out


def rs_error_bound(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return 0.017 * t ** (-11.0 / 4.0)
