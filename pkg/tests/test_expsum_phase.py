import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslab import sieve
from pslab.arith import GammaPair
from pslab.errors import ArgumentError, DomainError
from pslab.expsum.phase import (
    BilinearSpec,
    PhaseSpec,
    RNorm,
    chebyshev_psi_range,
    exp_sum,
    falling,
    mobius_coeffs,
    prime_exp_sum,
    random_unimodular,
    type_i_sum,
    type_ii_sum,
    unit_exp,
)

PAIR = GammaPair.parse("49/50", "97/100")


def direct_mp(phase: PhaseSpec, lo: int, hi: int) -> complex:
    with mpmath.workdps(40):
        total = mpmath.mpc(0)
        for m in range(lo, hi + 1):
            f = mpmath.fsum(mpmath.mpf(a) * (m + mpmath.mpf(u)) ** mpmath.mpf(al) for a, al, u in phase.terms)
            total += mpmath.expjpi(2 * f)
    return complex(total)


class TestPhaseSpec:
    def test_invariants(self):
        with pytest.raises(DomainError):
            PhaseSpec(((0.0, 0.5, 0.0),))
        with pytest.raises(DomainError):
            PhaseSpec(((1.0, 0.5, 1.5),))
        with pytest.raises(DomainError):
            PhaseSpec(())
        with pytest.raises(DomainError):
            PhaseSpec(((1.0, 0.5, 0.0), (2.0, 0.5, 0.0))).require_zhai_shape()
        with pytest.raises(DomainError):
            PhaseSpec.monomial(1.0, 2.0).require_zhai_shape()

    def test_derivatives_against_mpmath(self):
        ph = PhaseSpec(((3.0, 0.7, 0.25), (-2.0, 1.5, 0.5)))
        for order in range(4):
            want = mpmath.diff(lambda t: 3 * (t + 0.25) ** 0.7 - 2 * (t + 0.5) ** 1.5, 123.4, order)
            assert ph.derivative(np.array([123.4]), order)[0] == pytest.approx(float(want), rel=1e-10)

    def test_falling(self):
        assert falling(0.5, 0) == 1 and falling(0.5, 3) == 0.5 * -0.5 * -1.5


class TestExpSum:
    def test_integer_phase_calibration(self):
        assert exp_sum(PhaseSpec.monomial(1.0, 1.0), 0, 50) == pytest.approx(50)

    def test_empty_range(self):
        assert exp_sum(PhaseSpec.monomial(1.0, 0.5), 10, 10) == 0j
        assert exp_sum(PhaseSpec.monomial(1.0, 0.5), 10, 5) == 0j

    def test_geometric_series(self):
        alpha = 0.3141592653589793
        got = exp_sum(PhaseSpec.monomial(alpha, 1.0), 0, 1000)
        r = cmath.exp(2j * math.pi * alpha)
        want = r * (1 - r**1000) / (1 - r)
        assert abs(got - want) < 1e-10

    def test_against_mpmath(self):
        ph = PhaseSpec(((40.0, 0.5, 0.0), (3.0, 0.97, 0.3)))
        got = exp_sum(ph, 1000, 2000)
        assert abs(got - direct_mp(ph, 1001, 2000)) < 1e-9

    @given(st.floats(0.01, 100), st.floats(0.1, 1.9), st.integers(1, 3000))
    def test_triangle(self, a, al, M):
        s = exp_sum(PhaseSpec.monomial(a, al), M, 2 * M)
        assert abs(s) <= M + 1e-9

    def test_worker_invariance(self):
        ph = PhaseSpec(((7.0, 0.9, 0.0), (2.0, 0.6, 0.5)))
        ref = exp_sum(ph, 10**5, 2 * 10**5, workers=1, chunk=4096)
        for w in (2, 8):
            got = exp_sum(ph, 10**5, 2 * 10**5, workers=w, chunk=4096)
            assert got == ref  # bit-identical: fixed chunks, ordered reduction
        assert abs(exp_sum(ph, 10**5, 2 * 10**5, chunk=1 << 16) - ref) < 1e-10

    def test_unit_exp_reduction(self):
        big = np.array([2.0**45 + 0.25])
        assert unit_exp(big)[0] == pytest.approx(1j, abs=1e-12)

    def test_singular_guard(self):
        with pytest.raises(DomainError):
            exp_sum(PhaseSpec.monomial(1.0, -0.5), -1, 10)


class TestBilinear:
    def test_triangle_and_brute(self):
        spec = BilinearSpec(20, 30, 1, 2, PAIR, b_coeffs=random_unimodular(5))
        s = type_ii_sum(spec)
        assert abs(s) <= spec.M * spec.N
        m = np.arange(21, 41)
        n = np.arange(31, 61)
        a = mobius_coeffs(m)
        b = random_unimodular(5)(n)
        brute = sum(
            a[i] * b[j] * cmath.exp(2j * math.pi * ((mm * nn) ** 0.98 + 2 * (mm * nn) ** 0.97))
            for i, mm in enumerate(m)
            for j, nn in enumerate(n)
        )
        assert abs(s - brute) < 1e-9

    def test_type_i_uses_unit_b(self):
        spec = BilinearSpec(15, 25, -1, 1, PAIR, b_coeffs=random_unimodular(1))
        plain = BilinearSpec(15, 25, -1, 1, PAIR)
        assert type_i_sum(spec) == type_ii_sum(plain)

    def test_block_and_worker_invariance(self):
        spec = BilinearSpec(300, 200, 1, 1, PAIR)
        ref = type_ii_sum(spec, workers=1, block=4000)
        assert type_ii_sum(spec, workers=8, block=4000) == ref

    def test_rnorm_and_window(self):
        spec = BilinearSpec(100, 1000, 2, -3, PAIR)
        X = 100 * 1000
        assert spec.R.value == pytest.approx(2 * X**0.98 + 3 * X**0.97)
        assert spec.R.value >= X**0.98
        lo, hi = spec.type_ii_window()
        assert lo == pytest.approx(X ** (2 / 11 + 0.08))
        assert spec.envelope() == pytest.approx(X ** (0.95 - 0.04))
        assert RNorm.of(X, 1, 1, PAIR).value == pytest.approx(X**0.98 + X**0.97)

    def test_frequency_warnings(self):
        assert BilinearSpec(10, 10, 1, 1, PAIR).frequency_warnings() == []
        assert len(BilinearSpec(10, 10, 10**6, 10**6, PAIR).frequency_warnings()) == 2
        with pytest.raises(DomainError):
            BilinearSpec(10, 10, 0, 1, PAIR)

    def test_random_coeffs_deterministic_and_unimodular(self):
        n = np.arange(1, 5000)
        a = random_unimodular(42)(n)
        assert np.allclose(np.abs(a), 1)
        assert np.array_equal(a[100:200], random_unimodular(42)(n[100:200]))
        assert not np.array_equal(a, random_unimodular(43)(n))


class TestPrimeSum:
    def test_bounded_by_chebyshev(self):
        for X in (10**3, 10**4):
            t = prime_exp_sum(X, 2 * X, 1, 1, PAIR)
            assert abs(t) <= chebyshev_psi_range(X, 2 * X)

    def test_against_direct(self):
        X = 5000
        lam = sieve.mangoldt_upto(2 * X)
        want = sum(lam[n] * cmath.exp(2j * math.pi * (n**0.98 - 2 * n**0.97)) for n in range(X + 1, 2 * X + 1))
        assert abs(prime_exp_sum(X, 2 * X, 1, -2, PAIR) - want) < 1e-9

    def test_range_guard(self):
        with pytest.raises(ArgumentError):
            prime_exp_sum(100, 300, 1, 1, PAIR)
        with pytest.raises(ArgumentError):
            prime_exp_sum(100, 100, 1, 1, PAIR)

    def test_worker_invariance(self):
        ref = prime_exp_sum(10**5, 2 * 10**5, 1, 1, PAIR, workers=1, chunk=5000)
        assert prime_exp_sum(10**5, 2 * 10**5, 1, 1, PAIR, workers=8, chunk=5000) == ref
