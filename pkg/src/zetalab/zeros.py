"""Nontrivial zeros: tables, the Hardy-Z zero finder, paired zero sums and I_P.

Tables store one entry per orbit in the upper half-plane.  An entry
sigma + it stands for the distinct points of {rho, conj(rho), 1-rho, 1-conj(rho)}:
two points when sigma = 1/2, four otherwise, each with the entry's multiplicity.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy.integrate import quad

from . import _riemann_siegel as rs
from .core import ComplexPoint, Evaluation, as_complex
from .errors import (
    BoundError,
    DomainError,
    NotFoundError,
    OrderError,
    ParseError,
    RangeError,
    SingularityError,
)
from .specfun import EPS, CONSTANTS
from .zeta import LN2, borwein_weights, terms_needed

T1_PRINTED = 9.2518015
T1_SUM_CEILING = 0.0230958
SCAN_STEP = 0.05
RS_CROSSOVER = 200.0
T_MAX = 12000.0
SINGULAR_DISTANCE = 1e-9
TAIL_SAFETY = 2.0
ORDINATE_FORMAT = "{:.10f}"


@dataclass(frozen=True)
class Zero:
    t: float
    sigma: float = 0.5
    multiplicity: int = 1

    def __post_init__(self):
        if not math.isfinite(self.t) or self.t < T1_PRINTED:
            raise BoundError(f"ordinate {self.t} below the t_1 bound {T1_PRINTED}")
        if not 0.0 < self.sigma < 1.0:
            raise DomainError(f"sigma must lie in (0, 1), got {self.sigma}")
        if self.multiplicity < 1:
            raise DomainError("multiplicity must be >= 1")

    @property
    def point(self) -> complex:
        return complex(self.sigma, self.t)

    @property
    def on_line(self) -> bool:
        return self.sigma == 0.5

    @property
    def partition(self) -> str:
        """Which of P1 (sigma < 1/2), P2 (sigma = 1/2), P3 (sigma > 1/2)."""
        if self.sigma < 0.5:
            return "P1"
        return "P2" if self.sigma == 0.5 else "P3"

    def orbit(self) -> tuple[complex, ...]:
        s, t = self.sigma, self.t
        if self.on_line:
            return (complex(s, t), complex(s, -t))
        return (complex(s, t), complex(s, -t), complex(1 - s, -t), complex(1 - s, t))


@dataclass(frozen=True)
class ZeroTable:
    zeros: tuple[Zero, ...]
    source: str = ""
    count: int = field(init=False)

    def __post_init__(self):
        zs = tuple(self.zeros)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "count", len(zs))
        for i in range(1, len(zs)):
            if not zs[i].t > zs[i - 1].t:
                raise OrderError(
                    f"ordinate {zs[i].t} not above {zs[i - 1].t}", line=i + 1
                )

    def __len__(self):
        return self.count

    def __getitem__(self, i):
        return self.zeros[i]

    def ordinates(self) -> np.ndarray:
        return np.array([z.t for z in self.zeros], dtype=float)

    def head(self, n: int) -> "ZeroTable":
        if n > self.count:
            raise RangeError(f"requested {n} zeros, table has {self.count}")
        return ZeroTable(self.zeros[:n], source=self.source)

    @cached_property
    def _orbits(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        pts, mult, ends = [], [], [0]
        for z in self.zeros:
            o = z.orbit()
            pts.extend(o)
            mult.extend([z.multiplicity] * len(o))
            ends.append(len(pts))
        return np.array(pts, dtype=complex), np.array(mult, dtype=float), np.array(ends)

    def orbit_points(self, n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """All orbit points of the first n entries and their multiplicities."""
        n = self.count if n is None else n
        if n > self.count or n < 0:
            raise RangeError(f"requested {n} zeros, table has {self.count}")
        pts, mult, ends = self._orbits
        return pts[: ends[n]], mult[: ends[n]]

    def index_of(self, q: Zero, n: int | None = None) -> int:
        n = self.count if n is None else min(n, self.count)
        for i, z in enumerate(self.zeros[:n]):
            if abs(z.t - q.t) <= 1e-9 * max(1.0, q.t) and z.sigma == q.sigma:
                return i
        raise NotFoundError(f"zero {q.point} not among the first {n} table entries")


@dataclass(frozen=True)
class StripRegion:
    """Closed disk {s : |s - q| <= R} that must hold no other tabulated zero."""

    q: ComplexPoint
    R: float
    table: ZeroTable | None = None

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError("R must be positive")
        if self.table is None:
            return
        qc = complex(self.q)
        pts, _ = self.table.orbit_points()
        if pts.size == 0:
            return
        d = np.abs(pts - qc)
        others = d[d > 1e-9]
        if others.size and others.min() <= self.R:
            raise DomainError(
                f"disk of radius {self.R} around {qc} contains another zero "
                f"(distance {others.min():.6g})"
            )


# ---------------------------------------------------------------------------
# table files


def parse_zero_table(lines: Iterable[str], limit: int | None = None, source: str = "") -> ZeroTable:
    zeros: list[Zero] = []
    prev = -math.inf
    for lineno, raw in enumerate(lines, start=1):
        if limit is not None and len(zeros) >= limit:
            break
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            t = float(line)
        except ValueError:
            raise ParseError(f"not a decimal ordinate: {line!r}", line=lineno) from None
        if not math.isfinite(t) or "," in line:
            raise ParseError(f"not a decimal ordinate: {line!r}", line=lineno)
        if t < T1_PRINTED:
            raise BoundError(f"ordinate {t} below the t_1 bound {T1_PRINTED}", line=lineno)
        if not t > prev:
            raise OrderError(f"ordinate {t} not above previous {prev}", line=lineno)
        prev = t
        zeros.append(Zero(t))
    return ZeroTable(tuple(zeros), source=source)


def load_zero_table(path, limit: int | None = None) -> ZeroTable:
    """Read a UTF-8 table: one ordinate per line, '#' comments, ascending."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_zero_table(fh, limit=limit, source=str(path))


def format_zero_table(table: ZeroTable, header: str | None = None) -> str:
    out = []
    if header:
        out.extend(f"# {h}" for h in header.splitlines())
    out.extend(ORDINATE_FORMAT.format(z.t) for z in table.zeros)
    return "\n".join(out) + "\n"


def write_zero_table(table: ZeroTable, path, header: str | None = None) -> None:
    Path(path).write_text(format_zero_table(table, header), encoding="utf-8")


def bundled_table(limit: int | None = None) -> ZeroTable:
    """The packaged table of the first 100 ordinates (generated by find_zeros)."""
    ref = resources.files("zetalab").joinpath("data/zeros_100.txt")
    with ref.open(encoding="utf-8") as fh:
        return parse_zero_table(fh, limit=limit, source="zetalab:data/zeros_100.txt")


# ---------------------------------------------------------------------------
# Hardy Z and the zero finder


def _hardy_z_eta(t: np.ndarray, chunk: int = 512) -> np.ndarray:
    out = np.empty_like(t)
    for start in range(0, t.size, chunk):
        tt = t[start : start + chunk]
        s = 0.5 + 1j * tt
        n = max(terms_needed(complex(0.5, float(tt.max())), 1e-13), 8)
        w = borwein_weights(n)
        logk = np.log(np.arange(1, n + 1, dtype=float))
        eta = np.exp(-np.outer(s, logk)) @ w
        zeta = eta / (1.0 - np.exp((1.0 - s) * LN2))
        out[start : start + chunk] = (np.exp(1j * rs.theta(tt)) * zeta).real
    return out


def hardy_z(t) -> np.ndarray:
    """Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t.

    Uses the accelerated eta series up to t = 200 and the Riemann-Siegel
    expansion above it.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    low = t <= RS_CROSSOVER
    if low.any():
        out[low] = _hardy_z_eta(t[low])
    if (~low).any():
        out[~low] = rs.hardy_z_rs(t[~low])
    return out


def _bisect(a: np.ndarray, b: np.ndarray, za: np.ndarray, tol: float) -> np.ndarray:
    a, b, za = a.copy(), b.copy(), za.copy()
    while True:
        width = np.max(b - a) if a.size else 0.0
        if width <= tol:
            break
        m = 0.5 * (a + b)
        zm = hardy_z(m)
        left = np.sign(zm) == np.sign(za)
        a = np.where(left, m, a)
        za = np.where(left, zm, za)
        b = np.where(left, b, m)
        if np.all(zm == 0.0):
            break
    return 0.5 * (a + b)


def _rescue_close_pairs(grid: np.ndarray, z: np.ndarray, fine: int = 64) -> list[tuple[float, float]]:
    """Brackets for zero pairs hidden between two grid points of equal sign.

    Looks at local minima of |Z| with no sign change around them and resamples
    the neighbourhood finely.
    """
    brackets = []
    az = np.abs(z)
    idx = np.nonzero(
        (az[1:-1] < az[:-2]) & (az[1:-1] < az[2:])
        & (np.sign(z[:-2]) == np.sign(z[1:-1])) & (np.sign(z[1:-1]) == np.sign(z[2:]))
    )[0] + 1
    # a real double zero pair needs |Z| small relative to its neighbours
    idx = idx[az[idx] < 0.25 * np.minimum(az[idx - 1], az[idx + 1])]
    for i in idx:
        tt = np.linspace(grid[i - 1], grid[i + 1], fine + 1)
        zz = hardy_z(tt)
        flips = np.nonzero(np.sign(zz[:-1]) != np.sign(zz[1:]))[0]
        brackets.extend((tt[j], tt[j + 1]) for j in flips)
    return brackets


def find_zeros(t_lo: float, t_hi: float, tol: float = 1e-10, step: float = SCAN_STEP) -> ZeroTable:
    """Critical-line zeros with t_lo <= t <= t_hi from sign changes of Z, bisected to tol."""
    if not (9.5 <= t_lo < t_hi <= T_MAX):
        raise DomainError(f"need 9.5 <= t_lo < t_hi <= {T_MAX:g}, got [{t_lo}, {t_hi}]")
    n = int(math.ceil((t_hi - t_lo) / step))
    grid = np.linspace(t_lo, t_hi, n + 1)
    z = hardy_z(grid)
    exact = grid[z == 0.0]
    flips = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
    a, b, za = grid[flips], grid[flips + 1], z[flips]
    roots = list(_bisect(a, b, za, tol)) if flips.size else []
    rescued = _rescue_close_pairs(grid, z)
    if rescued:
        ra = np.array([p[0] for p in rescued])
        rb = np.array([p[1] for p in rescued])
        roots.extend(_bisect(ra, rb, hardy_z(ra), tol))
    roots.extend(exact)
    roots = sorted(float(r) for r in roots)
    source = f"find_zeros({t_lo:g}, {t_hi:g}, tol={tol:g}, step={step:g})"
    return ZeroTable(tuple(Zero(r) for r in roots), source=source)


def smooth_zero_count(T: float) -> float:
    """theta(T)/pi + 1, the Riemann-von Mangoldt main term of N(T)."""
    return float(rs.theta(np.array([T]))[0] / math.pi + 1.0)


def _height_for_count(count: int) -> float:
    lo, hi = 14.0, 20.0
    while smooth_zero_count(hi) < count:
        hi *= 2
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if smooth_zero_count(mid) < count:
            lo = mid
        else:
            hi = mid
    return hi


@lru_cache(maxsize=8)
def generated_table(count: int, tol: float = 1e-10) -> ZeroTable:
    """The first ``count`` zeros, produced by find_zeros (cached per process)."""
    if count < 1:
        return ZeroTable((), source="generated(0)")
    t_hi = min(_height_for_count(count) + 5.0, T_MAX)
    table = find_zeros(9.5, t_hi, tol=tol)
    while table.count < count and t_hi < T_MAX:
        t_hi = min(t_hi + 10.0, T_MAX)
        table = find_zeros(9.5, t_hi, tol=tol)
    if table.count < count:
        raise RangeError(f"only {table.count} zeros below t = {T_MAX:g}")
    return ZeroTable(table.zeros[:count], source=f"generated({count}) via {table.source}")


def default_table(count: int, path=None) -> ZeroTable:
    """Zero table from a file (argument, then $ZETA_LAB_ZEROS) or else generated."""
    path = path or os.environ.get("ZETA_LAB_ZEROS")
    if path:
        table = load_zero_table(path, limit=count)
        if table.count < count:
            raise RangeError(f"{path} holds {table.count} zeros, {count} requested")
        return table
    if count <= 100:
        return bundled_table(count)
    return generated_table(count)


# ---------------------------------------------------------------------------
# paired sums


def _orbit_re_inverse(z: Zero) -> float:
    """sum of Re(1/rho) over the entry's orbit, times multiplicity."""
    s, t = z.sigma, z.t
    if z.on_line:
        val = 2 * s / (s * s + t * t)
    else:
        val = 2 * s / (s * s + t * t) + 2 * (1 - s) / ((1 - s) ** 2 + t * t)
    return z.multiplicity * val


def tail_bound(T: float) -> float:
    """Safety factor 2 times int_T^inf (1/(1/4+t^2)) (1/2pi) ln(t/2pi) dt."""
    if not T >= 14.0:
        raise DomainError(f"tail_bound needs T >= 14, got {T}")

    def density(t):
        return math.log(t / (2 * math.pi)) / (2 * math.pi) / (0.25 + t * t)

    val, _ = quad(density, T, math.inf, epsabs=1e-15, epsrel=1e-10, limit=200)
    return TAIL_SAFETY * val


def rho_sum_partial(table: ZeroTable, N: int) -> Evaluation:
    """sum over the first N entries' orbits of Re(1/rho); abs_error = tail_bound(t_N)."""
    if N > table.count:
        raise RangeError(f"N = {N} exceeds table size {table.count}")
    if N < 0:
        raise RangeError("N must be nonnegative")
    total = math.fsum(_orbit_re_inverse(z) for z in table.zeros[:N])
    T = table.zeros[N - 1].t if N else 14.0
    return Evaluation(total, tail_bound(max(T, 14.0)), terms_used=N)


def t1_min_bound(ceiling: float = T1_SUM_CEILING) -> float:
    """Solve 2/(1+t^2) = ceiling for t."""
    return math.sqrt(2.0 / ceiling - 1.0)


# ---------------------------------------------------------------------------
# I_P kernels


def _ip_tail(s: complex, T: float) -> float:
    """Bound on the omitted orbit sums for critical-line zeros above height T.

    Each omitted pair contributes 2(s-1/2)/((s-1/2)^2 + g^2); with the zero
    density (1/2pi) ln(g/2pi) this integrates in closed form.
    """
    w = abs(s - 0.5)
    T = max(T, 14.0)
    if w >= 0.5 * T:
        return math.inf
    integral = (math.log(T / (2 * math.pi)) + 1.0) / (2 * math.pi * T)
    return TAIL_SAFETY * 2 * w * integral / (1.0 - (w / T) ** 2)


def _kernel(s: complex, pts: np.ndarray, mult: np.ndarray) -> complex:
    if abs(s) < SINGULAR_DISTANCE or abs(1.0 - s) < SINGULAR_DISTANCE:
        raise SingularityError(f"s = {s} on a pole of -1/s + 1/(1-s)")
    if pts.size:
        d = s - pts
        if np.min(np.abs(d)) < SINGULAR_DISTANCE:
            raise SingularityError(f"s = {s} within {SINGULAR_DISTANCE:g} of a zero")
        body = complex(np.sum(mult / d))
    else:
        body = 0j
    return -1.0 / s + 1.0 / (1.0 - s) + body


def I_P(s, table: ZeroTable, N: int) -> Evaluation:
    """-1/s + 1/(1-s) + sum over the first N orbits of k/(s - rho)."""
    s = as_complex(s)
    pts, mult = table.orbit_points(N)
    val = _kernel(s, pts, mult)
    T = table.zeros[N - 1].t if N else 14.0
    err = _ip_tail(s, T) + 8 * EPS * (1.0 + pts.size) * max(1.0, abs(val))
    return Evaluation(val, err, terms_used=int(pts.size))


def I_P_excl(s, q: Zero, table: ZeroTable, N: int) -> Evaluation:
    """I_P(s) with q and its reflections (weight k(q) each) removed."""
    s = as_complex(s)
    table.index_of(q, N)
    pts, mult = table.orbit_points(N)
    tol = 1e-9 * max(1.0, q.t)
    keep = np.ones(pts.shape, dtype=bool)
    for p in q.orbit():
        keep &= np.abs(pts - p) > tol
    val = _kernel(s, pts[keep], mult[keep])
    T = table.zeros[N - 1].t if N else 14.0
    err = _ip_tail(s, T) + 8 * EPS * (1.0 + pts.size) * max(1.0, abs(val))
    return Evaluation(val, err, terms_used=int(keep.sum()))


def rho_sum_const() -> float:
    return CONSTANTS.rho_sum_const
