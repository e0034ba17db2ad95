"""Exact counts of Piatetski-Shapiro primes, main terms and error reports."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy import integrate

from . import sieve
from .arith import (
    GammaExponent,
    GammaPair,
    ceil_pow,
    floor_root_pow_array,
    member_witnesses,
    pow_diff_array,
    psi_neg_pow_array,
)
from .errors import ArgumentError, DomainError, NumericError
from .summation import parallel_map

GammaList = Union[GammaPair, Sequence[GammaExponent]]

CSV_COLUMNS = [
    "x",
    "gamma1",
    "gamma2",
    "exact_count",
    "main_term",
    "leitmann_term",
    "abs_error",
    "rel_error",
    "fitted_exponent",
]


def _as_list(gammas: GammaList) -> List[GammaExponent]:
    if isinstance(gammas, GammaPair):
        return [gammas.gamma1, gammas.gamma2]
    if isinstance(gammas, GammaExponent):
        return [gammas]
    return list(gammas)


def _check_gamma(gamma: GammaExponent) -> None:
    if not Fraction(1, 2) < gamma.fraction < 1:
        raise DomainError(f"gamma must lie in (1/2, 1), got {gamma}")


def _check_x(x: int) -> None:
    if not isinstance(x, (int, np.integer)) or isinstance(x, bool):
        raise DomainError(f"counting paths take integer x, got {x!r}")
    if x < 2:
        raise DomainError(f"need x >= 2, got {x}")


# ---------------------------------------------------------------------------
# Exact counters


def _segment_members(bounds, gammas, segment_size):
    a, b = bounds
    p = a + np.flatnonzero(sieve.prime_mask(a, b, segment_size)).astype(np.int64)
    keep = np.ones(p.size, dtype=bool)
    for g in gammas:
        keep &= member_witnesses(p, g) != 0
    return p[keep]


def member_primes(
    x: int,
    gammas: GammaList,
    workers: int = 1,
    segment_size: int = sieve.SEGMENT_SIZE,
) -> np.ndarray:
    """Primes p <= x lying in every listed F_gamma, ascending."""
    gl = _as_list(gammas)
    _check_x(x)
    for g in gl:
        _check_gamma(g)
    sieve.base_primes(math.isqrt(x))
    parts = parallel_map(
        lambda ab: _segment_members(ab, gl, segment_size),
        sieve.segments(2, x + 1, segment_size),
        workers,
    )
    return np.concatenate(parts)


def pi_gamma(x: int, gamma: GammaExponent, workers: int = 1, segment_size: int = sieve.SEGMENT_SIZE) -> int:
    """Number of primes p <= x with ``p = floor(n**(1/gamma))`` for some n."""
    return int(member_primes(x, [gamma], workers, segment_size).size)


def pi_intersect(
    x: int,
    gammas: GammaList,
    workers: int = 1,
    segment_size: int = sieve.SEGMENT_SIZE,
) -> int:
    """Number of primes p <= x lying in F_gamma for every listed gamma.

    A single exponent is accepted (it reduces to :func:`pi_gamma`); repeated
    exponents are rejected.
    """
    gl = _as_list(gammas)
    if not gl:
        raise ArgumentError("at least one gamma is required")
    if len({g.fraction for g in gl}) != len(gl):
        raise ArgumentError("duplicate gamma in intersection")
    return int(member_primes(x, gl, workers, segment_size).size)


def _prime_bitmap(x: int) -> np.ndarray:
    bitmap = np.zeros(x + 1, dtype=bool)
    bitmap[sieve.simple_sieve(x)] = True
    return bitmap


def _dual_members(x: int, gamma: GammaExponent, bitmap: np.ndarray, chunk: int = 1 << 20) -> np.ndarray:
    _check_gamma(gamma)
    # floor(n**(1/gamma)) <= x  iff  n < (x+1)**gamma
    n_max = ceil_pow(x + 1, gamma) - 1
    found = []
    for a in range(1, n_max + 1, chunk):
        n = np.arange(a, min(a + chunk, n_max + 1), dtype=np.int64)
        p = floor_root_pow_array(n, gamma)
        p = p[(p >= 2) & (p <= x)]
        found.append(p[bitmap[p]])
    if not found:
        return np.array([], dtype=np.int64)
    return np.unique(np.concatenate(found))


def pi_gamma_dual(x: int, gamma: GammaExponent) -> int:
    """Independent count: walk n upward and test ``floor(n**(1/gamma))`` for primality."""
    _check_x(x)
    return int(_dual_members(x, gamma, _prime_bitmap(x)).size)


def pi_intersect_dual(x: int, gammas: GammaList) -> int:
    """Intersection count built from the n-enumeration of each set."""
    _check_x(x)
    gl = _as_list(gammas)
    if len({g.fraction for g in gl}) != len(gl):
        raise ArgumentError("duplicate gamma in intersection")
    bitmap = _prime_bitmap(x)
    common = None
    for g in gl:
        members = _dual_members(x, g, bitmap)
        common = members if common is None else np.intersect1d(common, members, assume_unique=True)
    return int(common.size)


# ---------------------------------------------------------------------------
# Analytic terms


def _weight_and_exponent(gammas: GammaList):
    gl = _as_list(gammas)
    weight = math.prod(g.float_value for g in gl)
    # integrand t**(sum - k) / log t; after t = e**u it is e**(c*u)/u
    c = float(sum(g.fraction for g in gl) - len(gl) + 1)
    return weight, c


def main_term(x: float, gammas: GammaList, rtol: float = 1e-10, limit: int = 500) -> float:
    """``prod(gamma) * integral_2^x t**(sum(gamma)-k) / log t dt`` by adaptive quadrature.

    For a pair this is the main term ``gamma1*gamma2 * int_2^x t^(g1+g2-2)/log t dt``.
    """
    if not x >= 2:
        raise DomainError(f"main_term needs x >= 2, got {x}")
    if x == 2:
        return 0.0
    weight, c = _weight_and_exponent(gammas)
    a, b = math.log(2.0), math.log(x)
    # integrate in log-space; split so each piece has a bounded dynamic range
    edges = [a]
    while edges[-1] + 4.0 < b:
        edges.append(edges[-1] + 4.0)
    edges.append(b)
    pieces = []
    for lo, hi in zip(edges, edges[1:]):
        val, err = integrate.quad(lambda u: math.exp(c * u) / u, lo, hi, epsabs=0.0, epsrel=rtol, limit=limit)
        if not err <= max(rtol * abs(val), 1e-300) * 10:
            raise NumericError(f"quadrature did not reach rtol={rtol} on [{lo}, {hi}] (err={err})")
        pieces.append(val)
    return weight * math.fsum(pieces)


def leitmann_term(x: float, gammas: GammaList) -> float:
    """Closed form ``prod(gamma)/(s-k+1) * x**(s-k+1) / log x`` with s = sum(gamma)."""
    if not x > 2:
        raise DomainError(f"leitmann_term needs x > 2, got {x}")
    weight, c = _weight_and_exponent(gammas)
    if c <= 0:
        raise DomainError("exponent sum too small: sum(gamma) - k + 1 must be positive")
    return weight / c * x**c / math.log(x)


# ---------------------------------------------------------------------------
# F1..F4 decomposition


@dataclass(frozen=True)
class FDecomposition:
    x: int
    f1: float
    f2: float
    f3: float
    f4: float
    exact_count: int

    @property
    def total(self) -> float:
        return math.fsum([self.f1, self.f2, self.f3, self.f4])


def _segment_f(bounds, pair: GammaPair, segment_size: int):
    a, b = bounds
    p = a + np.flatnonzero(sieve.prime_mask(a, b, segment_size)).astype(np.int64)
    g1, g2 = pair.gamma1, pair.gamma2
    d1 = pow_diff_array(p, g1.float_value)
    d2 = pow_diff_array(p, g2.float_value)
    s1 = psi_neg_pow_array(p + 1, g1) - psi_neg_pow_array(p, g1)
    s2 = psi_neg_pow_array(p + 1, g2) - psi_neg_pow_array(p, g2)
    both = (member_witnesses(p, g1) != 0) & (member_witnesses(p, g2) != 0)
    return (
        math.fsum((d1 * d2).tolist()),
        math.fsum((d1 * s2).tolist()),
        math.fsum((s1 * d2).tolist()),
        math.fsum((s1 * s2).tolist()),
        int(np.count_nonzero(both)),
    )


def f_decomposition(
    x: int,
    pair: GammaPair,
    workers: int = 1,
    segment_size: int = sieve.SEGMENT_SIZE,
) -> FDecomposition:
    """Evaluate F1..F4 by direct summation over primes p <= x.

    Per prime, ``floor(-p**g) - floor(-(p+1)**g)`` splits as the smooth
    difference ``(p+1)**g - p**g`` plus ``psi(-(p+1)**g) - psi(-p**g)``;
    multiplying the two splits gives the four sums.
    """
    _check_x(x)
    sieve.base_primes(math.isqrt(x))
    parts = parallel_map(
        lambda ab: _segment_f(ab, pair, segment_size),
        sieve.segments(2, x + 1, segment_size),
        workers,
    )
    cols = list(zip(*parts))
    return FDecomposition(
        x=x,
        f1=math.fsum(cols[0]),
        f2=math.fsum(cols[1]),
        f3=math.fsum(cols[2]),
        f4=math.fsum(cols[3]),
        exact_count=sum(cols[4]),
    )


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class CountReport:
    x: int
    gammas: tuple
    exact_count: int
    main_term: float
    leitmann_term: float
    abs_error: float
    rel_error: float


def count_report(x: int, gammas: GammaList, workers: int = 1, segment_size: int = sieve.SEGMENT_SIZE) -> CountReport:
    gl = _as_list(gammas)
    exact = pi_intersect(x, gl, workers, segment_size)
    main = main_term(float(x), gl)
    leit = leitmann_term(float(x), gl)
    abs_err = abs(exact - main)
    rel_err = abs_err / main if main > 0 else math.nan
    return CountReport(x, tuple(gl), exact, main, leit, abs_err, rel_err)


@dataclass(frozen=True)
class TheoremReport:
    pair: GammaPair
    rows: List[CountReport]
    fitted_exponent: Optional[float]
    note: str = ""
    target_exponent: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "target_exponent", float(self.pair.total) - 1.0)


def fit_exponent(xs: Sequence[float], errors: Sequence[float]) -> Optional[float]:
    """Least-squares slope of log(error) against log(x); None below two usable points."""
    pts = [(math.log(x), math.log(e)) for x, e in zip(xs, errors) if e > 0]
    if len(pts) < 2:
        return None
    lx = np.array([p[0] for p in pts])
    le = np.array([p[1] for p in pts])
    slope, _ = np.polyfit(lx, le, 1)
    return float(slope)


def theorem_report(
    pair: GammaPair,
    x_grid: Sequence[int],
    workers: int = 1,
    segment_size: int = sieve.SEGMENT_SIZE,
) -> TheoremReport:
    """Count, compare with the main term, and fit the error exponent along x_grid."""
    pair.require_theorem_range()
    grid = list(x_grid)
    if not grid:
        raise ArgumentError("empty x grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ArgumentError("x grid must be strictly ascending")
    if grid[0] < 100:
        raise ArgumentError("x grid points must be >= 100")
    rows = [count_report(x, pair, workers, segment_size) for x in grid]
    slope = fit_exponent([r.x for r in rows], [r.abs_error for r in rows])
    note = "" if slope is not None else "insufficient points"
    return TheoremReport(pair, rows, slope, note)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_rows(rows: Sequence[CountReport], fitted: Optional[float] = None, note: str = "") -> List[List[str]]:
    """CSV cells for report rows; the fitted exponent (or note) sits on the last row."""
    out = []
    for i, r in enumerate(rows):
        g = list(r.gammas)
        last = i == len(rows) - 1
        if last and fitted is not None:
            fit_cell = _fmt(fitted)
        elif last:
            fit_cell = note
        else:
            fit_cell = ""
        out.append(
            [
                str(r.x),
                str(g[0]),
                ";".join(str(v) for v in g[1:]),
                str(r.exact_count),
                _fmt(r.main_term),
                _fmt(r.leitmann_term),
                _fmt(r.abs_error),
                _fmt(r.rel_error),
                fit_cell,
            ]
        )
    return out


def reports_to_csv(rows: Sequence[CountReport], fitted: Optional[float] = None, note: str = "") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(report_rows(rows, fitted, note))
    return buf.getvalue()


def report_dicts(rows: Sequence[CountReport], fitted: Optional[float] = None, note: str = "") -> List[dict]:
    cells = report_rows(rows, fitted, note)
    out = []
    for r, c in zip(rows, cells):
        d = dict(zip(CSV_COLUMNS, c))
        for key in ("x", "exact_count"):
            d[key] = int(d[key])
        for key in ("main_term", "leitmann_term", "abs_error", "rel_error"):
            d[key] = getattr(r, key)
        fit = d["fitted_exponent"]
        d["fitted_exponent"] = fitted if (fit and fitted is not None) else (fit or None)
        out.append(d)
    return out
