import math

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from pslab import sieve
from pslab.errors import CapacityError, DomainError

# classical values of pi(10^k); reproduced below by the sieve and, at small
# scale, by trial division
PI_POWERS = {1: 4, 2: 25, 3: 168, 4: 1229, 5: 9592, 6: 78498, 7: 664579}


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def mobius_brute(n: int) -> int:
    f = sympy.factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def mangoldt_brute(n: int) -> float:
    f = sympy.factorint(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def test_small_segment_examples():
    seg = sieve.sieve_segment(2, 12)
    assert seg.primes().tolist() == [2, 3, 5, 7, 11]
    lam = dict(zip(seg.numbers().tolist(), seg.lam.tolist()))
    assert lam[8] == math.log(2) and lam[9] == math.log(3) and lam[6] == 0
    mu = dict(zip(seg.numbers().tolist(), seg.mu.tolist()))
    assert (mu[6], mu[4], mu[10], mu[7]) == (1, 0, 1, -1)


def test_segment_arrays_read_only():
    seg = sieve.sieve_segment(100, 200)
    with pytest.raises(ValueError):
        seg.mu[0] = 5
    assert len(seg) == 100


@pytest.mark.parametrize("lo,hi", [(1, 10), (10, 10), (10, 5)])
def test_bad_ranges(lo, hi):
    with pytest.raises(DomainError):
        sieve.sieve_segment(lo, hi)


def test_capacity():
    with pytest.raises(CapacityError):
        sieve.sieve_segment(2, 1000, segment_size=100)
    with pytest.raises(CapacityError):
        sieve.prime_mask(2, 1000, segment_size=100)


def test_primes_up_to():
    assert list(sieve.primes_up_to(10)) == [2, 3, 5, 7]
    assert list(sieve.primes_up_to(2)) == [2]
    with pytest.raises(DomainError):
        list(sieve.primes_up_to(1))


def test_prime_counts_against_trial_division():
    for x in (2, 3, 10, 97, 100, 1000, 5000):
        assert sieve.prime_count(x) == sum(trial_division_is_prime(n) for n in range(x + 1))


@pytest.mark.parametrize("k", sorted(PI_POWERS))
def test_classical_prime_counts(k):
    assert sieve.prime_count(10**k) == PI_POWERS[k]


def test_prime_count_independent_of_segmentation_and_workers():
    x = 10**6
    base = sieve.prime_count(x)
    for seg in (1000, 65536, 1 << 20):
        for w in (1, 2, 8):
            assert sieve.prime_count(x, workers=w, segment_size=seg) == base


def test_primes_array_stitching():
    a = sieve.primes_array(200000, segment_size=777)
    b = np.array(list(sympy.primerange(2, 200001)))
    assert np.array_equal(a, b)


def test_mobius_against_factorisation():
    mu = sieve.mobius_upto(20000)
    assert mu[0] == 0 and mu[1] == 1
    assert all(mu[n] == mobius_brute(n) for n in range(2, 20001))


def test_mobius_high_segment():
    lo = 10**6 - 3000
    seg = sieve.sieve_segment(lo, 10**6 + 1)
    assert all(seg.mu[i] == mobius_brute(lo + i) for i in range(len(seg)))


def test_mangoldt_against_factorisation():
    lam = sieve.mangoldt_upto(5000)
    assert lam[0] == 0 and lam[1] == 0
    assert all(lam[n] == mangoldt_brute(n) for n in range(2, 5001))


def test_mangoldt_range_examples():
    ns, lams = sieve.mangoldt_range(2, 10)
    assert ns.tolist() == [2, 3, 4, 5, 7, 8, 9]
    assert lams.tolist() == [math.log(p) for p in (2, 3, 2, 5, 7, 2, 3)]
    ns, lams = sieve.mangoldt_range(14, 17)
    assert ns.tolist() == [16] and lams.tolist() == [math.log(2)]


def test_chebyshev_psi_100():
    # direct summation over prime powers <= 100
    want = math.fsum(math.log(p) * math.floor(math.log(100, p) + 1e-12) for p in sympy.primerange(2, 101))
    got = math.fsum(sieve.mangoldt_upto(100))
    assert got == pytest.approx(want, rel=1e-14)
    assert round(got, 3) == 94.045


@given(st.integers(2, 10**7), st.integers(1, 5000))
def test_segment_matches_sympy_isprime(lo, width):
    seg = sieve.sieve_segment(lo, lo + width)
    idx = np.flatnonzero(seg.is_prime)
    want = [i for i in range(width) if sympy.isprime(lo + i)]
    assert idx.tolist() == want
