"""Segmented sieve for primes, von Mangoldt's function and the Moebius function."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from .errors import CapacityError, DomainError
from .summation import parallel_map

SEGMENT_SIZE = 1 << 22

_base_lock = threading.Lock()
_base_primes = np.array([2, 3, 5, 7], dtype=np.int64)
_base_limit = 10


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit (plain Eratosthenes, for the base-prime table)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def base_primes(limit: int) -> np.ndarray:
    """Cached primes <= limit; the table only ever grows."""
    global _base_primes, _base_limit
    with _base_lock:
        if limit > _base_limit:
            new_limit = max(limit, 2 * _base_limit)
            _base_primes = simple_sieve(new_limit)
            _base_limit = new_limit
        primes = _base_primes
    return primes[: np.searchsorted(primes, limit, side="right")]


def _check_range(lo: int, hi: int, segment_size: int) -> None:
    if lo < 2 or hi <= lo:
        raise DomainError(f"need 2 <= lo < hi, got lo={lo}, hi={hi}")
    if hi - lo > segment_size:
        raise CapacityError(f"segment [{lo}, {hi}) exceeds capacity {segment_size}")


def _first_multiple(p: int, lo: int) -> int:
    return -(-lo // p) * p


def prime_mask(lo: int, hi: int, segment_size: int = SEGMENT_SIZE) -> np.ndarray:
    """Primality bits for [lo, hi); entry i refers to lo + i."""
    _check_range(lo, hi, segment_size)
    mask = np.ones(hi - lo, dtype=bool)
    for p in base_primes(math.isqrt(hi - 1)).tolist():
        start = max(p * p, _first_multiple(p, lo))
        if start < hi:
            mask[start - lo :: p] = False
    return mask


@dataclass(frozen=True)
class SieveSegment:
    """Primality, Lambda and mu over the half-open range [lo, hi)."""

    lo: int
    hi: int
    is_prime: np.ndarray
    lam: np.ndarray
    mu: np.ndarray

    def __len__(self) -> int:
        return self.hi - self.lo

    def primes(self) -> np.ndarray:
        return self.lo + np.flatnonzero(self.is_prime).astype(np.int64)

    def numbers(self) -> np.ndarray:
        return np.arange(self.lo, self.hi, dtype=np.int64)


def sieve_segment(lo: int, hi: int, segment_size: int = SEGMENT_SIZE) -> SieveSegment:
    """Build a fully populated :class:`SieveSegment` for [lo, hi)."""
    _check_range(lo, hi, segment_size)
    size = hi - lo
    n = np.arange(lo, hi, dtype=np.int64)
    is_prime = np.ones(size, dtype=bool)
    mu = np.ones(size, dtype=np.int8)
    radical = np.ones(size, dtype=np.int64)  # product of distinct small primes found
    lam = np.zeros(size, dtype=np.float64)

    for p in base_primes(math.isqrt(hi - 1)).tolist():
        p2 = p * p
        first = _first_multiple(p, lo)
        if first < hi:
            sl = slice(first - lo, None, p)
            mu[sl] *= -1
            radical[sl] *= p
            start = max(p2, first)
            if start < hi:
                is_prime[start - lo :: p] = False
        first2 = _first_multiple(p2, lo)
        if first2 < hi:
            mu[first2 - lo :: p2] = 0
        # proper prime powers p^k, k >= 2
        q = p2
        logp = math.log(p)
        while q < hi:
            if q >= lo:
                lam[q - lo] = logp
            q *= p

    # at most one prime factor exceeds sqrt(hi); it accounts for radical < n
    big = radical != n
    mu[big] = -mu[big]
    lam[is_prime] = np.log(n[is_prime].astype(np.float64))
    for arr in (is_prime, lam, mu):
        arr.flags.writeable = False
    return SieveSegment(lo, hi, is_prime, lam, mu)


def segments(lo: int, hi: int, segment_size: int = SEGMENT_SIZE) -> list:
    """Boundaries of fixed-size segments covering [lo, hi)."""
    return [(a, min(a + segment_size, hi)) for a in range(lo, hi, segment_size)]


def primes_array(x: int, workers: int = 1, segment_size: int = SEGMENT_SIZE) -> np.ndarray:
    """All primes <= x as an ascending int64 array."""
    if x < 2:
        return np.array([], dtype=np.int64)
    base_primes(math.isqrt(x))

    def work(bounds):
        a, b = bounds
        return a + np.flatnonzero(prime_mask(a, b, segment_size)).astype(np.int64)

    parts = parallel_map(work, segments(2, x + 1, segment_size), workers)
    return np.concatenate(parts)


def primes_up_to(x: int, segment_size: int = SEGMENT_SIZE) -> Iterator[int]:
    """Stream every prime <= x once, ascending."""
    if x < 2:
        raise DomainError(f"primes_up_to needs x >= 2, got {x}")
    for a, b in segments(2, x + 1, segment_size):
        yield from (a + np.flatnonzero(prime_mask(a, b, segment_size))).tolist()


def prime_count(x: int, workers: int = 1, segment_size: int = SEGMENT_SIZE) -> int:
    if x < 2:
        return 0
    base_primes(math.isqrt(x))
    counts = parallel_map(
        lambda ab: int(np.count_nonzero(prime_mask(ab[0], ab[1], segment_size))),
        segments(2, x + 1, segment_size),
        workers,
    )
    return sum(counts)


def mangoldt_range(lo: int, hi: int, segment_size: int = SEGMENT_SIZE) -> Tuple[np.ndarray, np.ndarray]:
    """``(n, Lambda(n))`` for lo <= n < hi with Lambda(n) != 0, ascending in n."""
    if lo < 2 or hi <= lo:
        raise DomainError(f"need 2 <= lo < hi, got lo={lo}, hi={hi}")
    ns, lams = [], []
    for a, b in segments(lo, hi, segment_size):
        seg = sieve_segment(a, b, segment_size)
        idx = np.flatnonzero(seg.lam)
        ns.append(a + idx.astype(np.int64))
        lams.append(seg.lam[idx])
    return np.concatenate(ns), np.concatenate(lams)


def mobius_upto(n: int) -> np.ndarray:
    """mu(0..n) with mu(0) set to 0, for short ranges used by identity checks."""
    out = np.zeros(n + 1, dtype=np.int64)
    if n >= 1:
        out[1] = 1
    if n >= 2:
        out[2:] = sieve_segment(2, n + 1, segment_size=max(SEGMENT_SIZE, n)).mu
    return out


def mangoldt_upto(n: int) -> np.ndarray:
    """Lambda(0..n), zero at 0 and 1."""
    out = np.zeros(n + 1, dtype=np.float64)
    if n >= 2:
        out[2:] = sieve_segment(2, n + 1, segment_size=max(SEGMENT_SIZE, n)).lam
    return out
