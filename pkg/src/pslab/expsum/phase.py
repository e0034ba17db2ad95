"""Phases and direct exponential-sum kernels.

Every kernel reduces phases modulo 1 before exponentiating and accumulates
over fixed chunks with ``math.fsum``, so results do not depend on how many
workers were used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .. import sieve
from ..arith import GammaPair
from ..errors import ArgumentError, DomainError
from ..summation import DEFAULT_CHUNK, chunk_bounds, parallel_map

TWO_PI = 2.0 * math.pi


def falling(alpha: float, r: int) -> float:
    """``alpha (alpha-1) ... (alpha-r+1)``; 1 for r = 0."""
    out = 1.0
    for i in range(r):
        out *= alpha - i
    return out


def unit_exp(phase: np.ndarray) -> np.ndarray:
    """``e(phase)`` with exact reduction of each float phase to [-1/2, 1/2)."""
    r = phase - np.floor(phase + 0.5)
    return np.exp(1j * TWO_PI * r)


@dataclass(frozen=True)
class PhaseSpec:
    """``f(m) = sum_j a_j (m + u_j)**alpha_j``."""

    terms: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self):
        terms = tuple((float(a), float(al), float(u)) for a, al, u in self.terms)
        if not terms:
            raise DomainError("a phase needs at least one term")
        for a, _, u in terms:
            if a == 0:
                raise DomainError("phase coefficients must be nonzero")
            if not 0.0 <= u <= 1.0:
                raise DomainError(f"shift u={u} outside [0, 1]")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def monomial(cls, a: float, alpha: float, u: float = 0.0) -> "PhaseSpec":
        return cls(((a, alpha, u),))

    @property
    def k(self) -> int:
        return len(self.terms)

    def require_zhai_shape(self) -> None:
        alphas = [al for _, al, _ in self.terms]
        if len(set(alphas)) != len(alphas):
            raise DomainError("exponents must be pairwise distinct")
        if any(float(al).is_integer() for al in alphas):
            raise DomainError("exponents must be non-integer")

    def value(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=np.float64)
        out = np.zeros_like(m)
        for a, al, u in self.terms:
            out = out + a * np.power(m + u, al)
        return out

    def derivative(self, m, order: int) -> np.ndarray:
        m = np.asarray(m, dtype=np.float64)
        out = np.zeros_like(m)
        for a, al, u in self.terms:
            out = out + a * falling(al, order) * np.power(m + u, al - order)
        return out

    def scale(self, M: float) -> float:
        """``R = sum |a_j| M**alpha_j``."""
        return math.fsum(abs(a) * M**al for a, al, _ in self.terms)


def int_range(M: float, M1: float) -> Tuple[int, int]:
    """Integers m with M < m <= M1 as a half-open [lo, hi)."""
    return math.floor(M) + 1, math.floor(M1) + 1


def weighted_sum(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: int,
    hi: int,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> complex:
    """``sum_{lo <= n < hi} fn(n)`` with fixed chunking and compensated accumulation."""

    def work(bounds):
        a, b = bounds
        z = fn(np.arange(a, b, dtype=np.int64))
        return math.fsum(z.real.tolist()), math.fsum(z.imag.tolist())

    parts = parallel_map(work, chunk_bounds(lo, hi, chunk), workers)
    if not parts:
        return 0j
    re, im = zip(*parts)
    return complex(math.fsum(re), math.fsum(im))


def exp_sum(
    phase: PhaseSpec,
    M: float,
    M1: float,
    workers: int = 1,
    weight: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    chunk: int = DEFAULT_CHUNK,
) -> complex:
    """``S = sum_{M < m <= M1} g(m) e(f(m))`` evaluated directly (g = 1 by default)."""
    if M1 <= M:
        return 0j
    lo, hi = int_range(M, M1)
    if lo < 1 and any(al < 0 for _, al, u in phase.terms if u == 0):
        raise DomainError("phase is singular at m = 0")

    def fn(m):
        z = unit_exp(phase.value(m))
        return z if weight is None else z * weight(m)

    return weighted_sum(fn, lo, hi, workers, chunk)


# ---------------------------------------------------------------------------
# Coefficient generators for bilinear sums


def _splitmix64(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    with np.errstate(over="ignore"):
        x = x + np.uint64(0x9E3779B97F4A7C15)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
    return x


def unit_coeffs(n: np.ndarray) -> np.ndarray:
    return np.ones(np.shape(n), dtype=np.complex128)


def mobius_coeffs(n: np.ndarray) -> np.ndarray:
    """mu(n) as complex coefficients."""
    n = np.asarray(n, dtype=np.int64)
    lo, hi = int(n.min()), int(n.max()) + 1
    mu = np.zeros(hi - lo, dtype=np.float64)
    if hi > 2:
        a = max(lo, 2)
        seg = sieve.sieve_segment(a, hi, segment_size=max(sieve.SEGMENT_SIZE, hi - a))
        mu[a - lo :] = seg.mu
    if lo <= 1 < hi:
        mu[1 - lo] = 1.0
    return mu[n - lo].astype(np.complex128)


def random_unimodular(seed: int) -> Callable[[np.ndarray], np.ndarray]:
    """Deterministic unimodular coefficients keyed on (seed, n), independent of chunking."""
    key = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)

    def coeffs(n: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            h = _splitmix64(np.asarray(n, dtype=np.uint64) ^ _splitmix64(np.array([key]))[0])
        angle = (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)
        return np.exp(1j * TWO_PI * angle)

    return coeffs


# ---------------------------------------------------------------------------
# Bilinear sums


@dataclass(frozen=True)
class RNorm:
    """``R = |h1| X**gamma1 + |h2| X**gamma2``."""

    value: float

    @classmethod
    def of(cls, X: float, h1: int, h2: int, pair: GammaPair) -> "RNorm":
        return cls(abs(h1) * X**pair.gamma1.float_value + abs(h2) * X**pair.gamma2.float_value)


@dataclass(frozen=True)
class BilinearSpec:
    M: int
    N: int
    h1: int
    h2: int
    pair: GammaPair
    a_coeffs: Callable[[np.ndarray], np.ndarray] = mobius_coeffs
    b_coeffs: Callable[[np.ndarray], np.ndarray] = unit_coeffs
    epsilon: float = 0.01

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise DomainError("M and N must be positive")
        if self.h1 == 0 or self.h2 == 0:
            raise DomainError("frequencies h1, h2 must be nonzero")

    @property
    def X(self) -> int:
        return self.M * self.N

    @property
    def R(self) -> RNorm:
        return RNorm.of(self.X, self.h1, self.h2, self.pair)

    def frequency_warnings(self) -> list:
        X, eps = self.X, self.epsilon
        out = []
        if abs(self.h1) > X ** (1 - self.pair.gamma1.float_value + eps):
            out.append("|h1| above X^(1-gamma1+eps)")
        if abs(self.h2) > X ** (1 - self.pair.gamma2.float_value + eps):
            out.append("|h2| above X^(1-gamma2+eps)")
        return out

    def type_ii_window(self) -> Tuple[float, float]:
        """N-window ``X^(2/11+8eps) <= N <= X^(16/11-24eps) / R`` (implied constants 1)."""
        X, eps = float(self.X), self.epsilon
        return X ** (2 / 11 + 8 * eps), X ** (16 / 11 - 24 * eps) / self.R.value

    def type_i_bound(self) -> float:
        """Largest M allowed for the type I estimate: ``X^(17/11-21eps) / R``."""
        X, eps = float(self.X), self.epsilon
        return X ** (17 / 11 - 21 * eps) / self.R.value

    def in_type_i_window(self) -> bool:
        return self.M <= self.type_i_bound()

    def in_type_ii_window(self) -> bool:
        lo, hi = self.type_ii_window()
        return lo <= self.N <= hi

    def envelope(self) -> float:
        """``X**(gamma1+gamma2-1-4 eps)``."""
        return float(self.X) ** (float(self.pair.total) - 1 - 4 * self.epsilon)


def _bilinear(spec: BilinearSpec, use_b: bool, workers: int, block: int) -> complex:
    g1, g2 = spec.pair.gamma1.float_value, spec.pair.gamma2.float_value
    n = np.arange(spec.N + 1, 2 * spec.N + 1, dtype=np.int64)
    b = spec.b_coeffs(n) if use_b else None
    rows = max(1, block // max(1, n.size))

    def work(bounds):
        lo, hi = bounds
        m = np.arange(lo, hi, dtype=np.int64)
        mn = np.outer(m, n).astype(np.float64)
        z = unit_exp(spec.h1 * np.power(mn, g1) + spec.h2 * np.power(mn, g2))
        if b is not None:
            z = z * b[None, :]
        inner = z.sum(axis=1)
        tot = inner * spec.a_coeffs(m)
        return math.fsum(tot.real.tolist()), math.fsum(tot.imag.tolist())

    parts = parallel_map(work, chunk_bounds(spec.M + 1, 2 * spec.M + 1, rows), workers)
    re, im = zip(*parts)
    return complex(math.fsum(re), math.fsum(im))


def type_i_sum(spec: BilinearSpec, workers: int = 1, block: int = 1 << 18) -> complex:
    """``sum_{m~M} a(m) sum_{n~N} e(h1 (mn)^g1 + h2 (mn)^g2)``."""
    return _bilinear(spec, False, workers, block)


def type_ii_sum(spec: BilinearSpec, workers: int = 1, block: int = 1 << 18) -> complex:
    """``sum_{m~M} a(m) sum_{n~N} b(n) e(h1 (mn)^g1 + h2 (mn)^g2)``."""
    return _bilinear(spec, True, workers, block)


def prime_exp_sum(
    X: float,
    X1: float,
    h1: int,
    h2: int,
    pair: GammaPair,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> complex:
    """``T* = sum_{X < n <= X1} Lambda(n) e(h1 n^g1 + h2 n^g2)``."""
    if not X < X1 <= 2 * X:
        raise ArgumentError(f"need X < X1 <= 2X, got X={X}, X1={X1}")
    lo, hi = int_range(X, X1)
    lo = max(lo, 2)
    if hi <= lo:
        return 0j
    ns, lam = sieve.mangoldt_range(lo, hi)
    return lambda_weighted_sum(ns, lam, h1, h2, pair, workers, chunk)


def lambda_weighted_sum(ns, weights, h1, h2, pair: GammaPair, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> complex:
    g1, g2 = pair.gamma1.float_value, pair.gamma2.float_value
    nf = ns.astype(np.float64)

    def work(bounds):
        a, b = bounds
        v = nf[a:b]
        z = weights[a:b] * unit_exp(h1 * np.power(v, g1) + h2 * np.power(v, g2))
        return math.fsum(z.real.tolist()), math.fsum(z.imag.tolist())

    parts = parallel_map(work, chunk_bounds(0, ns.size, chunk), workers)
    if not parts:
        return 0j
    re, im = zip(*parts)
    return complex(math.fsum(re), math.fsum(im))


def chebyshev_psi_range(X: float, X1: float) -> float:
    """``sum_{X < n <= X1} Lambda(n)``, the trivial bound for ``|T*|``."""
    lo, hi = int_range(X, X1)
    lo = max(lo, 2)
    if hi <= lo:
        return 0.0
    _, lam = sieve.mangoldt_range(lo, hi)
    return math.fsum(lam.tolist())
