"""Gamma-family functions and the closed-form lattice sums.

Reference values come from mpmath at 30 digits (frozen below) or are computed
on the fly with mpmath as an independent implementation.
"""

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.core import ComplexPoint, Evaluation
from zetalab.errors import DomainError, PoleError
from zetalab.specfun import (
    CONSTANTS,
    EULER_GAMMA,
    LN_PI,
    digamma,
    log_gamma,
    sum_inv_even2_y2,
    sum_inv_n2_y2,
    sum_inv_odd2_y2,
    trigamma,
)

# log Gamma(0.25 + 7.067i): mpmath loggamma and a 2000-step shifted product
# (ln Gamma(z) = ln Gamma(z+n) - sum log(z+k), Stirling at z+n) agree to 1e-26.
LOGGAMMA_025_7067 = complex(-10.670581199255127, 6.360841984564994)

strip = st.builds(
    complex,
    st.floats(-2.0, 2.0, allow_nan=False),
    st.floats(-200.0, 200.0, allow_nan=False),
).filter(lambda z: abs(z.imag) > 0.05 or abs(z.real - round(z.real)) > 0.05)


def mp_complex(v) -> complex:
    return complex(float(v.real), float(v.imag))


class TestValueTypes:
    def test_complex_point_rejects_nan(self):
        with pytest.raises(DomainError):
            ComplexPoint(math.nan, 1.0)

    def test_complex_point_round_trip(self):
        assert complex(ComplexPoint.of(0.5 + 14j)) == 0.5 + 14j

    def test_evaluation_needs_nonnegative_error(self):
        with pytest.raises(DomainError):
            Evaluation(1.0, -1e-3)

    def test_nonfinite_argument_rejected(self):
        with pytest.raises(DomainError):
            digamma(complex(math.inf, 0))


class TestConstants:
    def test_a_plus_rho_sum_is_zero(self):
        assert abs(CONSTANTS.a_const + CONSTANTS.rho_sum_const) <= 1e-17

    def test_rho_sum_const_digits(self):
        assert round(CONSTANTS.rho_sum_const, 7) == 0.0230957

    def test_printed_ln_pi_and_gamma(self):
        assert round(LN_PI, 7) == 1.1447299
        assert round(EULER_GAMMA, 7) == 0.5772157

    def test_against_mpmath(self):
        with mpmath.workdps(30):
            ref = 1 + mpmath.euler / 2 - mpmath.log(2 * mpmath.sqrt(mpmath.pi))
        assert abs(CONSTANTS.rho_sum_const - float(ref)) < 1e-16


class TestLogGamma:
    def test_one(self):
        assert abs(log_gamma(1).value) < 1e-13

    def test_half(self):
        assert abs(log_gamma(0.5).value - 0.5 * LN_PI) < 1e-13

    def test_factorial(self):
        assert abs(log_gamma(11).value - math.log(math.factorial(10))) < 1e-13

    def test_frozen_strip_value(self):
        ev = log_gamma(0.25 + 7.067j)
        assert abs(ev.value - LOGGAMMA_025_7067) < 1e-12
        assert ev.abs_error <= 1e-12

    def test_poles(self):
        for z in (0, -1, -7):
            with pytest.raises(PoleError):
                log_gamma(z)

    @settings(max_examples=200, deadline=None)
    @given(strip.filter(lambda z: abs(z) >= 0.1))
    def test_matches_mpmath(self, z):
        ev = log_gamma(z)
        ref = mp_complex(mpmath.loggamma(z))
        assert abs(ev.value - ref) <= max(ev.abs_error, 1e-12) + 1e-13 * abs(ref)

    @settings(max_examples=100, deadline=None)
    @given(st.builds(complex, st.floats(0.1, 5.0), st.floats(-100.0, 100.0)))
    def test_recurrence_right_half_plane(self, z):
        lhs = log_gamma(z + 1).value
        rhs = log_gamma(z).value + cmath.log(z)
        assert abs(lhs - rhs) < 1e-11


class TestDigamma:
    def test_one_is_minus_gamma(self):
        assert abs(digamma(1).value + EULER_GAMMA) < 1e-15

    def test_half(self):
        assert abs(digamma(0.5).value - (-EULER_GAMMA - 2 * math.log(2))) < 1e-14

    def test_poles(self):
        with pytest.raises(PoleError):
            digamma(-3)

    @settings(max_examples=200, deadline=None)
    @given(strip)
    def test_matches_mpmath(self, z):
        ev = digamma(z)
        assert ev.abs_error <= 1e-11
        assert abs(ev.value - mp_complex(mpmath.digamma(z))) <= 1e-11

    @settings(max_examples=100, deadline=None)
    @given(strip)
    def test_recurrence(self, z):
        assert abs(digamma(z + 1).value - digamma(z).value - 1 / z) <= 1e-9

    @settings(max_examples=100, deadline=None)
    @given(strip.filter(lambda z: abs(z.imag) < 100))
    def test_reflection(self, z):
        lhs = digamma(1 - z).value - digamma(z).value
        rhs = math.pi / cmath.tan(math.pi * z)
        assert abs(lhs - rhs) <= 1e-9

    @settings(max_examples=100, deadline=None)
    @given(strip)
    def test_conjugation(self, z):
        assert abs(digamma(z.conjugate()).value - digamma(z).value.conjugate()) <= 1e-12


class TestTrigamma:
    def test_one(self):
        assert abs(trigamma(1).value - math.pi**2 / 6) < 1e-14

    @settings(max_examples=100, deadline=None)
    @given(strip)
    def test_matches_mpmath(self, z):
        ref = mp_complex(mpmath.psi(1, z))
        assert abs(trigamma(z).value - ref) <= 1e-11 + 1e-12 * abs(ref)

    @settings(max_examples=100, deadline=None)
    @given(strip)
    def test_finite_difference_of_digamma(self, z):
        h = 1e-5
        fd = (digamma(z + h).value - digamma(z - h).value) / (2 * h)
        tg = trigamma(z).value
        assert abs(fd - tg) / abs(tg) <= 1e-5


class TestLatticeSums:
    def test_coth_sum_at_four(self):
        ev = sum_inv_n2_y2(4.0)
        assert abs(ev.value - 0.3614490) < 1e-6
        assert abs(ev.value - 0.36144908170827583) < 1e-15

    def test_brute_force(self):
        n = np.arange(1, 1_000_001, dtype=float)
        for y in (0.5, 4.0, 17.0):
            brute = math.fsum(1 / (n * n + y * y))
            tail = 1 / 1_000_000  # sum_{n > 10^6} 1/n^2, to 1e-12
            assert abs(sum_inv_n2_y2(y).value - brute - tail) < 1e-11

    def test_odd_plus_even(self):
        for y in (0.3, 4.0, 30.0):
            total = sum_inv_odd2_y2(y).value + sum_inv_even2_y2(y).value
            assert abs(total - sum_inv_n2_y2(y).value) < 1e-15

    def test_odd_brute_force(self):
        n = np.arange(1, 400_001, dtype=float)
        brute = math.fsum(1 / ((2 * n - 1) ** 2 + 16))
        assert abs(sum_inv_odd2_y2(4.0).value - brute) < 1e-6

    def test_rejects_nonpositive_y(self):
        for y in (0.0, -1.0, math.nan):
            with pytest.raises(DomainError):
                sum_inv_n2_y2(y)
