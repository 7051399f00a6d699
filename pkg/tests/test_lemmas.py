"""alpha, omega, g, the circle probes and the Lemma 2/3 machinery."""

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab.errors import DomainError, InsufficientDataError, NearZeroError
from zetalab.lemmas import (
    ProbeConfig,
    ProbeResult,
    alpha,
    alpha_dy_scan,
    alpha_negativity_scan,
    alpha_partial_x,
    alpha_partial_y,
    alpha_series,
    arc_response,
    balance_F,
    beta_scaling_fit,
    estimate_H1,
    find_m_r,
    g,
    g_arc_derivative,
    lemma2_check,
    lemma3_G,
    lemma3_S,
    lemma3_component_bound,
    lemma3_positive_part_bound,
    omega,
    probe,
    re_midl_check,
)
from zetalab.specfun import EULER_GAMMA, LN_PI, trigamma
from zetalab.zeros import Zero, bundled_table, generated_table
from zetalab.zeta import zeta_log_deriv

# mpmath at 30 digits
ALPHA_03_12 = -0.32343949509374045
S_03_4 = -0.0126902947043484526


@pytest.fixture(scope="module")
def table():
    return bundled_table()


@pytest.fixture(scope="module")
def cfg1(table):
    return ProbeConfig(q=table[0], table=table)


def mp_alpha(x, y):
    s = mpmath.mpc(x, y)
    v = 0.5 * mpmath.log(mpmath.pi) + 0.5 * mpmath.re(
        -0.5 * mpmath.digamma(s / 2) - 0.5 * mpmath.digamma((1 - s) / 2)
    )
    return float(v)


strip = st.tuples(st.floats(0.02, 0.98), st.floats(4.0, 80.0))


class TestAlpha:
    def test_frozen(self):
        assert abs(alpha(0.3 + 12j).value - ALPHA_03_12) < 1e-13

    def test_negative_at_eight(self):
        assert alpha(0.5 + 8j).value < 0
        assert alpha_series(0.5, 8).value < 0

    def test_series_at_first_zero(self):
        t = 14.134725
        assert abs(alpha(complex(0.5, t)).value - alpha_series(0.5, t).value) < 1e-8

    def test_series_at_03_12(self):
        assert abs(alpha_series(0.3, 12).value - ALPHA_03_12) < 1e-8

    def test_series_symmetry(self):
        assert abs(alpha_series(0.3, 12).value - alpha_series(0.7, 12).value) < 1e-12

    def test_series_domain(self):
        with pytest.raises(DomainError):
            alpha_series(1.0, 5)
        with pytest.raises(DomainError):
            alpha_series(0.5, 0)

    def test_grid_agreement(self):
        for x in np.linspace(0.05, 0.95, 10):
            for y in np.linspace(5, 60, 10):
                assert abs(alpha(complex(x, y)).value - alpha_series(x, y).value) <= 1e-8

    @settings(max_examples=60, deadline=None)
    @given(strip)
    def test_symmetry(self, p):
        x, y = p
        assert abs(alpha(complex(x, y)).value - alpha(complex(1 - x, y)).value) <= 1e-12

    @settings(max_examples=40, deadline=None)
    @given(strip)
    def test_matches_mpmath(self, p):
        x, y = p
        assert abs(alpha(complex(x, y)).value - mp_alpha(x, y)) <= 1e-12


class TestAlphaPartials:
    def test_dx_zero_on_line(self):
        for y in (8.0, 14.134725, 33.0, 60.0):
            assert abs(alpha_partial_x(complex(0.5, y)).value) < 1e-11

    def test_dy_negative(self):
        assert alpha_partial_y(0.3 + 10j).value < 0

    def test_finite_differences(self):
        s, h = 0.3 + 10j, 1e-5
        fx = (alpha(s + h).value - alpha(s - h).value) / (2 * h)
        fy = (alpha(s + 1j * h).value - alpha(s - 1j * h).value) / (2 * h)
        assert abs(alpha_partial_x(s).value - fx) / abs(fx) <= 1e-5
        assert abs(alpha_partial_y(s).value - fy) / abs(fy) <= 1e-5

    @settings(max_examples=40, deadline=None)
    @given(st.tuples(st.floats(0.05, 0.45), st.floats(5.0, 60.0)))
    def test_finite_differences_random(self, p):
        s, h = complex(*p), 1e-5
        fx = (alpha(s + h).value - alpha(s - h).value) / (2 * h)
        fy = (alpha(s + 1j * h).value - alpha(s - 1j * h).value) / (2 * h)
        assert abs(alpha_partial_x(s).value - fx) <= 1e-5 * abs(fx) + 1e-9
        assert abs(alpha_partial_y(s).value - fy) <= 1e-5 * abs(fy) + 1e-9

    @settings(max_examples=60, deadline=None)
    @given(st.tuples(st.floats(0.02, 0.5), st.floats(4.0, 50.0)))
    def test_connection_to_S(self, p):
        # -1/8 Re[psi'(s/2) - psi'((1-s)/2)] = -S/2
        x, y = p
        s = complex(x, y)
        lhs = -0.125 * (trigamma(s / 2).value - trigamma((1 - s) / 2).value).real
        assert abs(lhs + 0.5 * lemma3_S(x, y).value) <= 1e-9
        assert abs(alpha_partial_x(s).value + 0.5 * lemma3_S(x, y).value) <= 1e-9

    def test_dy_scan(self):
        rep = alpha_dy_scan([0.1, 0.3, 0.5], [8, 20, 40])
        assert rep.passed


class TestOmega:
    def test_finite_at_q(self, table):
        q = table[0]
        v = omega(q.point, q, table, 100).value
        assert math.isfinite(v) and abs(v) < 1e3

    def test_log_derivative_re_expression(self):
        big = generated_table(10_000)
        q = big[0]
        for a in (0.0, 2.0, 4.0):
            s = q.point + 0.1 * cmath.exp(1j * a)
            ev = omega(s, q, big, 10_000)
            lhs = ev.value + (q.multiplicity / (s - q.point)).real
            assert abs(lhs - zeta_log_deriv(s).value.real) <= max(1e-3, ev.abs_error)

    def test_smooth_at_q(self, table):
        q = table[0]
        h = 1e-5

        def w(s):
            return omega(s, q, table, 100).value

        sym = (w(q.point + h) - w(q.point - h)) / (2 * h)
        fwd = (w(q.point + 2 * h) - w(q.point)) / (2 * h)
        assert abs(sym - fwd) < 1e-4


class TestGAndBalance:
    def test_g_on_line(self):
        y = 20.0
        rl = zeta_log_deriv(complex(0.5, y)).value.real
        assert abs(g(0.5, y).value - rl * rl) < 1e-12
        assert g(0.5, y).value >= 0

    @settings(max_examples=30, deadline=None)
    @given(st.tuples(st.floats(0.1, 0.9), st.floats(8.0, 13.0)))
    def test_g_symmetry(self, p):
        x, y = p
        a, b = g(x, y).value, g(1 - x, y).value
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    def test_balance_on_line(self):
        for y in np.linspace(8, 60, 27):
            try:
                assert abs(balance_F(complex(0.5, y)).value) < 1e-10
            except NearZeroError:
                pass

    @settings(max_examples=30, deadline=None)
    @given(st.tuples(st.floats(0.1, 0.9), st.floats(8.0, 13.0)))
    def test_balance_antisymmetry(self, p):
        s = complex(*p)
        assert abs(balance_F(1 - s).value + balance_F(s).value) <= 1e-10

    def test_sign_change_on_lower_semicircle(self, table):
        q = table[0].point
        th = np.linspace(math.pi + 0.01, 2 * math.pi - 0.01, 64)
        F = [balance_F(q + 0.1 * cmath.exp(1j * t)).value for t in th]
        assert min(F) < 0 < max(F)

    def test_g_near_zero(self, table):
        with pytest.raises(NearZeroError):
            g(0.5, table[0].t)


class TestProbe:
    def test_first_zero_r02(self, cfg1):
        p = find_m_r(cfg1, 0.2)
        assert p.found and p.residual <= 1e-9
        m = complex(p.m)
        assert abs(abs(m - cfg1.q.point) - 0.2) < 1e-12
        assert m.imag <= cfg1.q.t

    def test_beta_shrinks(self, cfg1):
        # on the critical line the balance point is the circle bottom, so tan beta is 0 to rounding
        assert abs(find_m_r(cfg1, 0.05).beta_tan) <= abs(find_m_r(cfg1, 0.2).beta_tan) + 1e-15

    def test_radius_above_R(self, table):
        with pytest.raises(DomainError):
            ProbeConfig(q=table[0], R=0.5, radii=(0.6, 0.2), table=table)

    def test_radius_not_configured(self, cfg1):
        with pytest.raises(DomainError):
            find_m_r(cfg1, 0.3)

    def test_isolation(self, table):
        with pytest.raises(DomainError):
            ProbeConfig(q=table[0], R=7.0, radii=(0.4,), table=table)

    @pytest.mark.parametrize("k", range(3))
    def test_probes_first_zeros(self, table, k):
        cfg = ProbeConfig(q=table[k], table=table)
        for r in cfg.radii:
            p = find_m_r(cfg, r)
            m = complex(p.m)
            assert p.found
            assert abs(abs(m - cfg.q.point) - r) < 1e-12
            assert m.imag <= cfg.q.t
            assert re_midl_check(cfg, r, p).passed

    def test_re_midl_third_zero(self, table):
        cfg = ProbeConfig(q=table[2], table=table)
        assert re_midl_check(cfg, 0.2).passed

    def test_re_midl_unfound(self, cfg1):
        p = ProbeResult(r=0.1, m=None, beta_tan=math.nan, residual=math.nan, found=False)
        rep = re_midl_check(cfg1, 0.1, p)
        assert not rep.passed and rep.notes == "no m_r"

    def test_probe_reports_missing(self, cfg1, monkeypatch):
        import zetalab.lemmas as lm

        monkeypatch.setattr(lm, "_balance_many", lambda pts: np.ones(len(pts)))
        p = probe(cfg1, 0.1)
        assert not p.found and p.m is None


class TestBetaFit:
    def test_equal_radii(self, cfg1):
        res = [find_m_r(cfg1, 0.2)] * 5
        with pytest.raises(InsufficientDataError):
            beta_scaling_fit(cfg1, res)

    def test_slope_of_synthetic_probes(self, cfg1):
        res = [
            ProbeResult(r=r, m=None, beta_tan=0.3 * r, residual=0.0, found=True)
            for r in (0.4, 0.2, 0.1, 0.05, 0.025)
        ]
        rep = beta_scaling_fit(cfg1, res)
        assert rep.passed and abs(rep.measured["slope"] - 1.0) < 1e-12

    def test_degenerate_on_line(self, cfg1):
        rep = beta_scaling_fit(cfg1)
        assert "slope" not in rep.measured
        assert rep.measured["max_abs_beta_tan"] < 1e-12


class TestH1AndArcs:
    def test_H1_positive(self, cfg1):
        h1 = estimate_H1(cfg1).value
        assert math.isfinite(h1) and h1 > 0

    def test_H1_radius_consistency(self, cfg1):
        h1 = estimate_H1(cfg1).value
        r_max = 2 * cfg1.q.multiplicity / h1
        for r in cfg1.radii:
            if r < r_max:
                assert find_m_r(cfg1, r).found

    @pytest.mark.parametrize("k", range(3))
    def test_arc_response_increasing(self, table, k):
        cfg = ProbeConfig(q=table[k], radii=(0.05,), table=table, zero_budget=100)
        r = 0.05
        taus = np.linspace(-r / 2, r / 2, 35)[1:-1]
        assert arc_response(cfg, r, taus).passed

    def test_arc_response_tau_zero(self, table):
        cfg = ProbeConfig(q=table[0], radii=(0.05,), table=table, zero_budget=100)
        rep = arc_response(cfg, 0.05, [0.0])
        assert math.isfinite(rep.measured["h_first"])

    def test_arc_response_domain(self, cfg1):
        with pytest.raises(DomainError):
            arc_response(cfg1, 0.1, [0.0, 0.1])

    def test_g_arc_derivative_step(self, cfg1):
        with pytest.raises(DomainError):
            g_arc_derivative(cfg1, 0.05, step=0.06)

    def test_g_arc_derivative_finite(self, cfg1):
        for r in (0.2, 0.1, 0.05):
            assert math.isfinite(g_arc_derivative(cfg1, r).value)


class TestLemma2:
    @pytest.mark.parametrize("t", [14.134725, 21.022040])
    def test_on_line(self, t):
        rep = lemma2_check(Zero(t))
        assert rep.passed and rep.measured["diff"] < 1e-11

    def test_off_line(self):
        rep = lemma2_check(Zero(14.134725, 0.4))
        assert not rep.passed
        G = lemma3_G(0.4, 14.134725).value
        assert math.copysign(1, rep.measured["signed_diff"]) == math.copysign(1, (1 - 0.8) * G)
        assert abs(rep.measured["signed_diff"] - rep.measured["four_S"]) < 1e-12


class TestLemma3:
    def test_S_zero_on_line(self):
        assert abs(lemma3_S(0.5, 7.0).value) < 1e-12

    def test_S_frozen(self):
        assert abs(lemma3_S(0.3, 4).value - S_03_4) < 1e-12

    def test_S_factorization(self):
        assert abs(lemma3_S(0.3, 4).value - 0.4 * lemma3_G(0.3, 4).value) < 1e-10

    def test_G_negative_at_four(self):
        for x in np.arange(1, 11) * 0.05:
            assert lemma3_G(x, 4).value < 0

    def test_G_grid(self):
        for x in np.linspace(0.025, 0.5, 20):
            for y in np.linspace(4, 50, 20):
                S, G = lemma3_S(x, y).value, lemma3_G(x, y).value
                assert G < 0
                assert abs(S - (1 - 2 * x) * G) <= 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            lemma3_S(0.3, 3.0)
        with pytest.raises(DomainError):
            lemma3_G(0.6, 5.0)

    def test_positive_part(self):
        assert lemma3_positive_part_bound(4).value < 0.2594088
        assert lemma3_component_bound(4) < 0.0002754
        assert lemma3_positive_part_bound(8).value < lemma3_positive_part_bound(4).value

    def test_positive_part_domain(self):
        with pytest.raises(DomainError):
            lemma3_positive_part_bound(3.9)


class TestNegativityScan:
    def test_grid(self):
        sig = np.arange(1, 11) * 0.05
        ts = np.arange(8, 62, 2)
        rep = alpha_negativity_scan(sig, ts)
        assert rep.passed and rep.measured["points"] == 270

    def test_chain_constants(self):
        assert round(LN_PI, 7) == 1.1447299
        assert round(EULER_GAMMA, 7) == 0.5772157
        assert 1 / 64 == 0.015625

    def test_partial_sum_bound(self):
        assert math.fsum(16 / (n * (n * n + 16)) for n in range(1, 10)) > 1.8873330

    def test_domain(self):
        with pytest.raises(DomainError):
            alpha_negativity_scan([0.6], [10])
