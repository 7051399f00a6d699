"""zeta, zeta' and zeta'/zeta; identity residuals."""

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.errors import ConditioningError, NearZeroError, PoleError
from zetalab.zeta import (
    MAX_TERMS,
    functional_eq_residual,
    sumdig_residual,
    terms_needed,
    zeta,
    zeta_eval,
    zeta_log_deriv,
    zeta_log_deriv_many,
    zeta_prime,
)

# mpmath, 30 digits
ZETA_03_25 = complex(-0.28820166958746124, -0.12962518049689429)
ZETA_08_60 = complex(0.47659215621741744, 0.13328579740750517)
ZETAP_07_30 = complex(1.1454723571958229, 0.20392617553105636)
LOGDERIV_05_9 = complex(-0.17941599446799618, -0.09410637949842018)

# rounded so that the mpmath oracle never sees subnormal inputs (it mishandles them)
window = st.builds(
    complex,
    st.floats(-0.9, 2.0, allow_nan=False).map(lambda v: round(v, 6)),
    st.floats(-200.0, 200.0, allow_nan=False).map(lambda v: round(v, 6)),
).filter(lambda s: abs(s - 1) > 0.01)


class TestZeta:
    def test_two(self):
        assert abs(zeta(2).value - math.pi**2 / 6) < 1e-13

    def test_zero(self):
        assert abs(zeta(0).value + 0.5) < 1e-12

    def test_frozen_values(self):
        assert abs(zeta(0.3 + 25j).value - ZETA_03_25) < 1e-12
        assert abs(zeta(0.8 + 60j).value - ZETA_08_60) < 1e-12

    def test_near_first_zero_is_small(self):
        assert abs(zeta(0.5 + 14.134725141758j).value) < 1e-9

    def test_pole(self):
        with pytest.raises(PoleError):
            zeta(1 + 1e-7)

    def test_eta_denominator_zero(self):
        with pytest.raises(ConditioningError):
            zeta(complex(1, 2 * math.pi / math.log(2)) + 1e-8)

    def test_term_budget(self):
        assert terms_needed(complex(0.5, 200), 1e-12) <= MAX_TERMS
        ev = zeta(0.5 + 200j)
        assert ev.converged and ev.terms_used == terms_needed(0.5 + 200j, 1e-12)

    @settings(max_examples=100, deadline=None)
    @given(window)
    def test_matches_mpmath(self, s):
        ev = zeta(s)
        ref = complex(mpmath.zeta(s))
        assert abs(ev.value - ref) <= 1e-11 * max(1.0, abs(ref))
        assert abs(ev.value - ref) <= ev.abs_error + 1e-14 * abs(ref)

    def test_error_bound_left_of_half(self):
        # the truncation bound grows like n^(-2 Re s) on the negative real axis
        for x in np.linspace(-0.9, 0.45, 28):
            ev = zeta(complex(x, 0.0))
            ref = float(mpmath.zeta(x))
            assert abs(ev.value - ref) <= ev.abs_error

    @settings(max_examples=50, deadline=None)
    @given(window)
    def test_conjugate_symmetry(self, s):
        a = zeta(s.conjugate()).value
        b = zeta(s).value.conjugate()
        assert abs(a - b) <= 1e-15 * max(1.0, abs(b))


class TestZetaPrime:
    def test_at_zero(self):
        assert abs(zeta_prime(0).value + 0.5 * math.log(2 * math.pi)) < 1e-8

    def test_frozen_value(self):
        assert abs(zeta_prime(0.7 + 30j).value - ZETAP_07_30) < 1e-10

    def test_cauchy_circle(self):
        # zeta'(s) = (1/2 pi i) \oint zeta(w)/(w-s)^2 dw, trapezoid rule on |w-s| = 1e-3
        s, rad, m = 0.6 + 20j, 1e-3, 64
        th = 2 * math.pi * np.arange(m) / m
        vals = [zeta(s + rad * cmath.exp(1j * t)).value * cmath.exp(-1j * t) for t in th]
        oracle = sum(vals) / (m * rad)
        assert abs(zeta_prime(s).value - oracle) <= 1e-7

    def test_cauchy_circle_random(self):
        rng = np.random.default_rng(7)
        th = 2 * math.pi * np.arange(48) / 48
        for _ in range(50):
            s = complex(rng.uniform(0.2, 0.8), rng.uniform(5, 60))
            vals = [zeta(s + 1e-3 * cmath.exp(1j * t)).value * cmath.exp(-1j * t) for t in th]
            oracle = sum(vals) / (48 * 1e-3)
            assert abs(zeta_prime(s).value - oracle) <= 1e-7

    def test_conjugate_symmetry(self):
        s = 0.35 + 41.7j
        assert abs(zeta_prime(s.conjugate()).value - zeta_prime(s).value.conjugate()) < 1e-14


class TestLogDerivative:
    def test_dirichlet_series_at_two(self):
        n = np.arange(2, 2_000_001, dtype=float)
        partial = -math.fsum(np.log(n) / n**2)
        N = 2_000_000
        tail = -(math.log(N) + 1) / N  # -int_N^inf ln u / u^2 du
        oracle = (partial + tail) / (math.pi**2 / 6)
        assert abs(zeta_log_deriv(2).value - oracle) < 1e-8

    def test_frozen_value(self):
        assert abs(zeta_log_deriv(0.5 + 9j).value - LOGDERIV_05_9) < 1e-12

    def test_conjugate_symmetry(self):
        s = 0.7 + 30j
        a = zeta_log_deriv(s.conjugate()).value
        assert abs(a - zeta_log_deriv(s).value.conjugate()) < 1e-14

    def test_near_zero_guard(self):
        with pytest.raises(NearZeroError):
            zeta_log_deriv(0.5 + 14.134725141734694j + 1e-10)

    def test_many_agrees_with_scalar(self):
        pts = np.array([0.3 + 10j, 0.5 + 30j, 0.8 + 60j, 0.1 - 5j])
        many = zeta_log_deriv_many(pts)
        for p, v in zip(pts, many):
            assert abs(v - zeta_log_deriv(p).value) < 1e-12

    def test_zeta_eval_flags(self):
        ev = zeta_eval(0.5 + 14.134725141734694j)
        assert ev.near_zero_flag and ev.log_deriv is None
        ev = zeta_eval(0.5 + 10j)
        assert not ev.near_zero_flag and ev.log_deriv is not None


class TestIdentities:
    @pytest.mark.parametrize("s,tol", [(0.5 + 10j, 1e-9), (0.3 + 25j, 1e-9), (0.8 + 60j, 1e-8)])
    def test_functional_equation(self, s, tol):
        assert functional_eq_residual(s) <= tol

    @pytest.mark.parametrize("s,tol", [(0.5 + 9j, 1e-8), (0.25 + 16j, 1e-8), (0.9 + 40j, 1e-7)])
    def test_sum_of_digammas(self, s, tol):
        assert sumdig_residual(s) <= tol

    @settings(max_examples=60, deadline=None)
    @given(st.builds(complex, st.floats(0.05, 0.95), st.floats(2.0, 150.0)))
    def test_functional_equation_random(self, s):
        assert functional_eq_residual(s) <= 1e-8

    def test_residual_detects_wrong_side(self):
        # the same expression with zeta(1-s) replaced by zeta(s) is not an identity
        from zetalab.zeta import _log_prefactor

        s = 0.3 + 25j
        left = cmath.exp(_log_prefactor(s)) * zeta(s).value
        wrong = cmath.exp(_log_prefactor(1 - s)) * zeta(s).value
        assert abs(left - wrong) / abs(left) > 1e-2
