"""The constructed functions alpha, omega, g and the circle probes around a zero.

Conventions (s = x + iy):

    alpha(s) = 1/2 ln pi - 1/4 Re[psi(s/2) + psi((1-s)/2)]
    d alpha/dx = -1/8 Re[psi'(s/2) - psi'((1-s)/2)]
    d alpha/dy =  1/8 Im[psi'(s/2) - psi'((1-s)/2)]

Expanding psi' as sum 1/(n+z)^2 gives
Re[psi'(s/2) - psi'((1-s)/2)] = 4 S(x, y) with S the Lemma 3 series, so
d alpha/dx = -S/2 exactly.  S factors as (1 - 2x) G(x, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .core import ComplexPoint, Evaluation, Report, as_complex
from .errors import (
    ConditioningError,
    DomainError,
    InsufficientDataError,
    NotFoundError,
)
from .specfun import EPS, EULER_GAMMA, LN_PI, digamma, trigamma
from .zeros import I_P_excl, StripRegion, Zero, ZeroTable, default_table
from .zeta import zeta_log_deriv, zeta_log_deriv_many

N_SAMPLES_ARC = 256
N_SAMPLES_H1 = 512
FD_STEP = 1e-5


# ---------------------------------------------------------------------------
# alpha and its partials


def alpha(s) -> Evaluation:
    s = as_complex(s)
    a = digamma(s / 2.0)
    b = digamma((1.0 - s) / 2.0)
    val = 0.5 * LN_PI - 0.25 * (a.value + b.value).real
    return Evaluation(val, 0.25 * (a.abs_error + b.abs_error) + 4 * EPS * abs(val))


def _check_strip(x: float, y: float) -> None:
    if not (0.0 < x < 1.0 and y > 0.0 and math.isfinite(y)):
        raise DomainError(f"need 0 < x < 1 and y > 0, got ({x}, {y})")


def alpha_series(x: float, y: float, terms: int = 1000) -> Evaluation:
    """alpha from its explicit real series, summed to ``terms`` then closed off.

    The combined summand h(n) = (2n+x)/((2n+x)^2+y^2) + (2n+1-x)/((2n+1-x)^2+y^2) - 1/n
    has the elementary antiderivative 1/4 ln(...) + 1/4 ln(...) - ln u, so the tail
    past N is the integral plus Euler-Maclaurin corrections.
    """
    x, y = float(x), float(y)
    _check_strip(x, y)
    N = max(int(terms), 10)
    n = np.arange(1, N + 1, dtype=float)
    a = 2 * n + x
    b = 2 * n + 1 - x
    body = math.fsum(a / (a * a + y * y) + b / (b * b + y * y) - 1.0 / n)

    def h(u):
        p, q = 2 * u + x, 2 * u + 1 - x
        return p / (p * p + y * y) + q / (q * q + y * y) - 1.0 / u

    def dh(u):
        p, q = 2 * u + x, 2 * u + 1 - x
        return (
            2 * (y * y - p * p) / (p * p + y * y) ** 2
            + 2 * (y * y - q * q) / (q * q + y * y) ** 2
            + 1.0 / (u * u)
        )

    P, Q = 2 * N + x, 2 * N + 1 - x
    integral = math.log(2.0) - 0.25 * math.log(P * P + y * y) - 0.25 * math.log(Q * Q + y * y) + math.log(N)
    # sum_{n>N} h(n) = int_N^inf h - h(N)/2 - h'(N)/12 + O(h'''(N))
    tail = integral - 0.5 * h(N) - dh(N) / 12.0
    head = x / (x * x + y * y) + (1 - x) / ((1 - x) ** 2 + y * y)
    val = 0.5 * (LN_PI + EULER_GAMMA + head + body + tail)
    err = 1.0 / N**4 + 8 * EPS * (N + abs(integral))
    return Evaluation(val, err, terms_used=N)


def _trigamma_pair(s: complex) -> tuple[complex, float]:
    a = trigamma(s / 2.0)
    b = trigamma((1.0 - s) / 2.0)
    return a.value - b.value, a.abs_error + b.abs_error


def alpha_partial_x(s) -> Evaluation:
    d, e = _trigamma_pair(as_complex(s))
    return Evaluation(-0.125 * d.real, 0.125 * e + 4 * EPS * abs(d))


def alpha_partial_y(s) -> Evaluation:
    d, e = _trigamma_pair(as_complex(s))
    return Evaluation(0.125 * d.imag, 0.125 * e + 4 * EPS * abs(d))


# ---------------------------------------------------------------------------
# omega, g, balance


def omega(s, q: Zero, table: ZeroTable, N: int) -> Evaluation:
    """1/2 ln pi + Re(-psi(s/2)/2 + I_P(s) without the point q); finite at s = q."""
    s = as_complex(s)
    ip = I_P_excl(s, q, table, N)
    ps = digamma(s / 2.0)
    val = 0.5 * LN_PI + (-0.5 * ps.value + ip.value).real
    return Evaluation(val, ip.abs_error + 0.5 * ps.abs_error, terms_used=ip.terms_used)


def _re_log_deriv(s: complex) -> Evaluation:
    ld = zeta_log_deriv(s)
    return Evaluation(ld.value.real, ld.abs_error, ld.terms_used, ld.converged)


def g(x: float, y: float) -> Evaluation:
    """Re zeta'/zeta(s) * Re zeta'/zeta(1-s) at s = x + iy."""
    s = complex(x, y)
    a = _re_log_deriv(s)
    b = _re_log_deriv(1.0 - s)
    val = a.value * b.value
    return Evaluation(val, abs(a.value) * b.abs_error + abs(b.value) * a.abs_error + 2 * EPS * abs(val))


def balance_F(s) -> Evaluation:
    """Re zeta'/zeta(s) - Re zeta'/zeta(1-s)."""
    s = as_complex(s)
    a = _re_log_deriv(s)
    b = _re_log_deriv(1.0 - s)
    return Evaluation(a.value - b.value, a.abs_error + b.abs_error)


def _balance_many(pts: np.ndarray) -> np.ndarray:
    ld = zeta_log_deriv_many(np.concatenate([pts, 1.0 - pts]))
    k = pts.size
    return ld[:k].real - ld[k:].real


# ---------------------------------------------------------------------------
# circle probes


@dataclass(frozen=True)
class ProbeConfig:
    q: Zero
    R: float = 0.5
    radii: tuple[float, ...] = (0.4, 0.2, 0.1, 0.05)
    zero_budget: int = 10_000
    tol_root: float = 1e-9
    table: ZeroTable | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not self.tol_root > 0:
            raise DomainError("tol_root must be positive")
        for r in radii:
            if not 0 < r <= self.R:
                raise DomainError(f"radius {r} outside (0, R = {self.R}]")
        if any(b > a for a, b in zip(radii, radii[1:])):
            raise DomainError("radii must be descending")
        if self.table is not None:
            StripRegion(ComplexPoint.of(self.q.point), self.R, self.table)

    def zeros(self) -> ZeroTable:
        """The zero table for omega evaluations (the default is generated and cached)."""
        if self.table is None:
            table = default_table(self.zero_budget)
            StripRegion(ComplexPoint.of(self.q.point), self.R, table)
            object.__setattr__(self, "table", table)
        return self.table


@dataclass(frozen=True)
class ProbeResult:
    r: float
    m: ComplexPoint | None
    beta_tan: float
    residual: float
    found: bool
    theta: float = math.nan
    note: str = ""


def _circle(q: complex, r: float, theta) -> np.ndarray:
    return q + r * np.exp(1j * np.asarray(theta, dtype=float))


def find_m_r(cfg: ProbeConfig, r: float) -> ProbeResult:
    """Balance point of Re zeta'/zeta(s) = Re zeta'/zeta(1-s) on the lower semicircle.

    Samples 256 angles in (pi, 2 pi), takes the sign change nearest 3 pi / 2 and
    bisects until the angle bracket cannot shrink further.
    """
    if r not in cfg.radii:
        raise DomainError(f"radius {r} not in the configured radii {cfg.radii}")
    q = cfg.q.point
    theta = math.pi + math.pi * (np.arange(N_SAMPLES_ARC) + 0.5) / N_SAMPLES_ARC
    F = _balance_many(_circle(q, r, theta))
    if not np.isfinite(F).any():
        raise ConditioningError(f"no conditioned sample on the circle of radius {r}")
    cands = [(theta[j], theta[j]) for j in np.nonzero(F == 0.0)[0]]
    flips = np.nonzero(np.sign(F[:-1]) * np.sign(F[1:]) < 0)[0]
    cands += [(theta[j], theta[j + 1]) for j in flips]
    if not cands:
        raise NotFoundError(f"balance_F has no sign change on the lower semicircle r = {r}")
    a, b = min(cands, key=lambda ab: abs(0.5 * (ab[0] + ab[1]) - 1.5 * math.pi))

    def F_at(th):
        return balance_F(complex(_circle(q, r, th))).value

    fa = F_at(a)
    best, best_f = a, fa
    if a != b:
        fb = F_at(b)
        if abs(fb) < abs(best_f):
            best, best_f = b, fb
        while fa != 0.0:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            fm = F_at(mid)
            if abs(fm) <= abs(best_f):
                best, best_f = mid, fm
            if fm == 0.0:
                break
            if math.copysign(1.0, fm) == math.copysign(1.0, fa):
                a, fa = mid, fm
            else:
                b = mid
    m = complex(_circle(q, r, best))
    dy = cfg.q.t - m.imag
    beta_tan = (m.real - cfg.q.sigma) / dy if dy != 0 else math.inf
    return ProbeResult(
        r=r,
        m=ComplexPoint.of(m),
        beta_tan=beta_tan,
        residual=abs(best_f),
        found=abs(best_f) <= cfg.tol_root,
        theta=best,
    )


def probe(cfg: ProbeConfig, r: float) -> ProbeResult:
    """find_m_r that records a missing sign change instead of raising."""
    try:
        return find_m_r(cfg, r)
    except NotFoundError as exc:
        return ProbeResult(r=r, m=None, beta_tan=math.nan, residual=math.nan, found=False, note=str(exc))


def beta_scaling_fit(cfg: ProbeConfig, results: Sequence[ProbeResult] | None = None) -> Report:
    """Least-squares slope of log|tan beta| against log r over the found probes."""
    if results is None:
        results = [probe(cfg, r) for r in cfg.radii]
    found = [p for p in results if p.found]
    radii = sorted({p.r for p in found})
    if len(radii) < 4:
        raise InsufficientDataError(f"need >= 4 distinct found radii, have {radii}")
    usable = [p for p in found if math.isfinite(p.beta_tan) and p.beta_tan != 0.0]
    worst = max(abs(p.beta_tan) for p in found)
    measured = {"probes_found": float(len(found)), "max_abs_beta_tan": worst}
    claim = f"beta_scaling_t{cfg.q.t:.6f}"
    if len(usable) < 4:
        return Report(
            claim, False, measured, 0.2,
            notes=f"tan beta vanishes at {len(found) - len(usable)} of {len(found)} radii; "
                  "log-log slope undefined",
        )
    lr = np.log([p.r for p in usable])
    lb = np.log([abs(p.beta_tan) for p in usable])
    slope = float(np.polyfit(lr, lb, 1)[0])
    measured["slope"] = slope
    return Report(claim, 0.8 <= slope <= 1.2, measured, 0.2, notes="slope window [0.8, 1.2]")


def re_midl_check(cfg: ProbeConfig, r: float, result: ProbeResult | None = None) -> Report:
    """|Re zeta'/zeta(m_r) - alpha(m_r)| <= 1e-6 + propagated error."""
    result = result if result is not None else probe(cfg, r)
    claim = f"re_midl_t{cfg.q.t:.6f}_r{r:g}"
    if not result.found:
        return Report(claim, False, {"r": r}, 1e-6, notes="no m_r")
    m = complex(result.m)
    ld = _re_log_deriv(m)
    a = alpha(m)
    diff = abs(ld.value - a.value)
    tol = 1e-6 + ld.abs_error + a.abs_error
    return Report(claim, diff <= tol, {"r": r, "diff": diff, "alpha": a.value}, tol)


def estimate_H1(cfg: ProbeConfig) -> Evaluation:
    """Max over 512 points of |s - q| = R of |balance_F(s) - Re(2k/(s - q))| (a sampled lower estimate)."""
    q = cfg.q.point
    theta = 2 * math.pi * (np.arange(N_SAMPLES_H1) + 0.5) / N_SAMPLES_H1
    pts = _circle(q, cfg.R, theta)
    F = _balance_many(pts)
    sing = (2.0 * cfg.q.multiplicity / (pts - q)).real
    return Evaluation(float(np.max(np.abs(F - sing))), 0.0, terms_used=N_SAMPLES_H1)


def arc_response(cfg: ProbeConfig, r: float, tau_values: Sequence[float], result: ProbeResult | None = None) -> Report:
    """h(tau) = k(sigma_q + tau - x_m)/r^2 - omega(m) + omega(sigma_q + tau + i(t_q - sqrt(r^2 - tau^2)));
    passes when strictly increasing along the given tau order."""
    taus = [float(t) for t in tau_values]
    if any(not abs(t) < r for t in taus):
        raise DomainError(f"every tau must satisfy |tau| < r = {r}")
    result = result if result is not None else probe(cfg, r)
    claim = f"arc_response_t{cfg.q.t:.6f}_r{r:g}"
    if not result.found:
        return Report(claim, False, {"r": r}, 0.0, notes="no m_r")
    q, k = cfg.q, cfg.q.multiplicity
    table = cfg.zeros()
    N = min(cfg.zero_budget, table.count)
    m = complex(result.m)
    om = omega(m, q, table, N).value
    vals = np.array([
        k * (q.sigma + t - m.real) / r**2 - om
        + omega(complex(q.sigma + t, q.t - math.sqrt(r * r - t * t)), q, table, N).value
        for t in taus
    ])
    steps = np.diff(vals)
    min_step = float(steps.min()) if steps.size else math.inf
    return Report(
        claim, bool(np.all(steps > 0)),
        {"r": r, "points": float(len(taus)), "min_increment": min_step,
         "h_first": float(vals[0]), "h_last": float(vals[-1])},
        0.0, notes="strict increase required",
    )


def g_arc_derivative(cfg: ProbeConfig, r: float, step: float | None = None, result: ProbeResult | None = None) -> Evaluation:
    """Central difference of x -> g(x, f_r(x)) at x = x_m, f_r(x) = t_q - sqrt(r^2 - (sigma_q - x)^2)."""
    h = min(FD_STEP, r / 100.0) if step is None else float(step)
    if not 0 < h < r:
        raise DomainError(f"step {h} must lie in (0, r = {r})")
    result = result if result is not None else probe(cfg, r)
    if not result.found:
        raise NotFoundError(f"no m_r at r = {r}")
    q = cfg.q
    xm = complex(result.m).real
    if not (q.sigma - r < xm - h and xm + h < q.sigma + r):
        raise DomainError("x_m too close to the end of the arc for the step")

    def f_r(x):
        return q.t - math.sqrt(r * r - (q.sigma - x) ** 2)

    gp = g(xm + h, f_r(xm + h))
    gm = g(xm - h, f_r(xm - h))
    d = (gp.value - gm.value) / (2 * h)
    return Evaluation(d, (gp.abs_error + gm.abs_error) / (2 * h))


def lemma2_check(q: Zero, tol: float = 1e-10) -> Report:
    """|Re psi'(q/2) - Re psi'((1-q)/2)|; equal to 4|(1 - 2 sigma) G(sigma, t)|."""
    s = q.point
    d, e = _trigamma_pair(s)
    diff = abs(d.real)
    measured = {"sigma": q.sigma, "t": q.t, "diff": diff, "signed_diff": d.real}
    if q.t >= 4.0 and 0 < q.sigma <= 0.5:
        measured["four_S"] = 4 * lemma3_S(q.sigma, q.t).value
    return Report(f"lemma2_t{q.t:.6f}_sigma{q.sigma:g}", diff <= tol + e, measured, tol)


# ---------------------------------------------------------------------------
# Lemma 3 series


def _em_tail(h, N: int) -> tuple[float, float]:
    """sum_{n>=N} h(n) by int_N^inf h + h(N)/2 - h'(N)/12, with an error estimate."""
    integral, qerr = quad(h, N, math.inf, epsabs=1e-16, epsrel=1e-12, limit=200)
    dx = 1e-3 * N
    d1 = (h(N + dx) - h(N - dx)) / (2 * dx)
    val = integral + 0.5 * h(N) - d1 / 12.0
    return val, qerr + abs(d1) / N**2 + 1e-16


def _lemma3_range(x: float, y: float) -> None:
    if not (0.0 < x <= 0.5):
        raise DomainError(f"need 0 < x <= 1/2, got {x}")
    if not y >= 4.0:
        raise DomainError(f"need y >= 4, got {y}")


def _terms_for(y: float) -> int:
    return 64 + 8 * int(math.ceil(y))


def lemma3_S(x: float, y: float) -> Evaluation:
    """S = sum_{n>=0} [((2n+x)^2 - y^2)/((2n+x)^2 + y^2)^2 - ((2n+1-x)^2 - y^2)/((2n+1-x)^2 + y^2)^2]."""
    x, y = float(x), float(y)
    _lemma3_range(x, y)
    y2 = y * y

    def h(u):
        a, b = 2 * u + x, 2 * u + 1 - x
        return (a * a - y2) / (a * a + y2) ** 2 - (b * b - y2) / (b * b + y2) ** 2

    N = _terms_for(y)
    n = np.arange(N, dtype=float)
    body = math.fsum(h(n))
    if x == 0.5:
        return Evaluation(body, 0.0, terms_used=N)
    tail, err = _em_tail(h, N)
    return Evaluation(body + tail, err + 8 * EPS * N / y2, terms_used=N)


def lemma3_G(x: float, y: float) -> Evaluation:
    """The bracket G with S = (1 - 2x) G, summed from its own two-series form.

    With a = 2n+x, b = 2n+1-x, A = a^2+y^2, B = b^2+y^2:
    G = sum (4n+1)/(AB) - 2y^2 sum (4n+1)(A+B)/(A^2 B^2).
    """
    x, y = float(x), float(y)
    _lemma3_range(x, y)
    y2 = y * y

    def h(u):
        a, b = 2 * u + x, 2 * u + 1 - x
        A, B = a * a + y2, b * b + y2
        return (4 * u + 1) / (A * B) - 2 * y2 * (4 * u + 1) * (A + B) / (A * A * B * B)

    N = _terms_for(y)
    n = np.arange(N, dtype=float)
    body = math.fsum(h(n))
    tail, err = _em_tail(h, N)
    return Evaluation(body + tail, err + 8 * EPS * N / y2, terms_used=N)


def lemma3_component_bound(y: float) -> float:
    """(pi^2/8) y^2 / cosh^2(pi y / 2)."""
    return math.pi**2 / 8 * y * y / math.cosh(math.pi * y / 2) ** 2


def lemma3_positive_part_bound(y: float) -> Evaluation:
    """Sum of the positive bracket terms bounding G from above (y >= 4)."""
    y = float(y)
    if not y >= 4.0:
        raise DomainError(f"need y >= 4, got {y}")
    h = math.pi * y / 2
    ch2, sh2, th = math.cosh(h) ** 2, math.sinh(h) ** 2, math.tanh(h)
    val = (
        lemma3_component_bound(y)
        + math.pi**2 / 8 * y * y / sh2
        + math.pi / (4 * y) * th
        + 1.0 / (y * y)
        + math.pi**2 / (8 * y * ch2) * (1.5 / y + math.pi / 2 * th)
    )
    return Evaluation(val, 16 * EPS * val)


# ---------------------------------------------------------------------------
# scans


def alpha_negativity_scan(sigma_grid: Sequence[float], t_grid: Sequence[float]) -> Report:
    """alpha_series(sigma, t) < 0 at every grid point; reports the largest value."""
    worst, where = -math.inf, (math.nan, math.nan)
    count = 0
    for sg in sigma_grid:
        if not 0 < sg <= 0.5:
            raise DomainError(f"sigma {sg} outside (0, 1/2]")
        for t in t_grid:
            if t < 8:
                raise DomainError(f"t {t} below 8")
            v = alpha_series(sg, t).value
            count += 1
            if v > worst:
                worst, where = v, (sg, t)
    return Report(
        "alpha_negativity", worst < 0,
        {"max_alpha": worst, "at_sigma": where[0], "at_t": where[1], "points": float(count)},
        0.0, notes="alpha_series < 0 required at every point",
    )


def alpha_dy_scan(sigma_grid: Sequence[float], t_grid: Sequence[float]) -> Report:
    """d alpha/dy < 0 at every grid point; reports the largest value."""
    worst, where = -math.inf, (math.nan, math.nan)
    count = 0
    for sg in sigma_grid:
        for t in t_grid:
            v = alpha_partial_y(complex(sg, t)).value
            count += 1
            if v > worst:
                worst, where = v, (sg, t)
    return Report(
        "alpha_dy_negativity", worst < 0,
        {"max_dy_alpha": worst, "at_sigma": where[0], "at_t": where[1], "points": float(count)},
        0.0,
    )
