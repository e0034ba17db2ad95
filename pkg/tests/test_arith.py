import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslab import arith
from pslab.arith import (
    GammaExponent,
    GammaPair,
    ceil_pow,
    dist_nearest_int,
    e_phase,
    floor_pow,
    floor_root_pow,
    floor_root_pow_array,
    frac,
    iroot,
    member_witnesses,
    pow_diff,
    pow_diff_array,
    ps_member,
    psi,
    psi_neg_pow_array,
    reduce_mod1,
)
from pslab.errors import ArgumentError, DomainError

G = GammaExponent.parse


def test_strict_mode_enabled_for_tests():
    assert arith.STRICT


class TestGammaTypes:
    def test_parse_and_reduce(self):
        g = G("18/20")
        assert (g.num, g.den) == (9, 10)
        assert str(g) == "9/10"
        assert g.float_value == 0.9

    @pytest.mark.parametrize("text", ["0.9", "9/10.0", "abc", "9/", "/10", "1e-1", "9/0"])
    def test_malformed(self, text):
        with pytest.raises(DomainError):
            G(text)

    @pytest.mark.parametrize("num,den", [(0, 3), (3, 3), (4, 3), (-1, 2)])
    def test_range(self, num, den):
        with pytest.raises(DomainError):
            GammaExponent(num, den)

    def test_gcd_required(self):
        with pytest.raises(DomainError):
            GammaExponent(2, 4)

    @given(st.integers(1, 10**6), st.integers(2, 10**6))
    def test_float_value_within_ulp(self, a, b):
        if a >= b:
            a, b = b - 1, b
        if a == 0:
            return
        g = GammaExponent.from_fraction(Fraction(a, b))
        exact = Fraction(a, b)
        assert abs(Fraction(g.float_value) - exact) <= Fraction(math.ulp(g.float_value))

    def test_pair_ordering(self):
        GammaPair(G("49/50"), G("97/100"))
        for g1, g2 in [("97/100", "49/50"), ("1/2", "3/5"), ("3/5", "1/2"), ("3/4", "3/4")]:
            with pytest.raises(DomainError):
                GammaPair(G(g1), G(g2))

    def test_theorem_range(self):
        assert GammaPair.parse("49/50", "97/100").in_theorem_range()
        p = GammaPair.parse("9/10", "4/5")
        assert not p.in_theorem_range()
        with pytest.raises(ArgumentError, match="21/11 < gamma1 \\+ gamma2 < 2"):
            p.require_theorem_range()
        # boundary: exactly 21/11 is excluded
        edge = GammaPair(GammaExponent.from_fraction(Fraction(21, 22) + Fraction(1, 1000)),
                         GammaExponent.from_fraction(Fraction(21, 22) - Fraction(1, 1000)))
        assert edge.total == Fraction(21, 11)
        assert not edge.in_theorem_range()


class TestScalarFunctions:
    @pytest.mark.parametrize("t,want", [(1.75, 0.75), (-0.25, 0.75), (3.0, 0.0)])
    def test_frac(self, t, want):
        assert frac(t) == want

    @pytest.mark.parametrize("t,want", [(2.5, 0.5), (-1.1, 0.1), (7.0, 0.0)])
    def test_dist(self, t, want):
        assert dist_nearest_int(t) == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("t,want", [(0.5, 0.0), (0.25, -0.25), (1.75, 0.25)])
    def test_psi(self, t, want):
        assert psi(t) == want

    def test_exact_rationals(self):
        assert frac(Fraction(-1, 3)) == Fraction(2, 3)
        assert psi(Fraction(7, 2)) == 0
        assert dist_nearest_int(Fraction(9, 10)) == Fraction(1, 10)

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_non_finite(self, bad):
        for fn in (frac, dist_nearest_int, psi, e_phase):
            with pytest.raises(DomainError):
                fn(bad)

    @pytest.mark.parametrize("x,want", [(0, (1, 0)), (0.5, (-1, 0)), (0.25, (0, 1))])
    def test_e_phase(self, x, want):
        z = e_phase(x)
        assert (z.re, z.im) == pytest.approx(want, abs=1e-15)

    def test_e_phase_reduces_large_arguments(self):
        # 2^40 + 1/4 is exactly representable; the reduction must keep the 1/4
        z = e_phase(2.0**40 + 0.25)
        assert (z.re, z.im) == pytest.approx((0, 1), abs=1e-12)
        assert reduce_mod1(2.0**52 + 1) == 0.0

    @given(st.floats(-1e6, 1e6, allow_nan=False))
    def test_e_phase_unit(self, x):
        z = complex(e_phase(x))
        assert abs(abs(z) - 1) < 1e-15
        with mpmath.workdps(30):
            ref = mpmath.expjpi(2 * mpmath.mpf(x))
        assert abs(z - complex(ref)) < 1e-9

    @given(st.floats(-1e3, 1e3, allow_nan=False))
    def test_psi_range(self, t):
        v = psi(t)
        assert -0.5 <= v < 0.5
        assert 0 <= frac(t) < 1

    def test_tiny_negative(self):
        assert frac(-1e-300) < 1.0
        assert dist_nearest_int(-1e-300) == 1e-300
        assert dist_nearest_int(2.0**60 + 2**8) == 0.0


class TestIntegerRoots:
    @pytest.mark.parametrize("p,g,want", [(2, "9/10", 1), (1, "9/10", 1), (1, "1/2", 1), (10**6, "1/2", 1000)])
    def test_floor_pow(self, p, g, want):
        assert floor_pow(p, G(g)) == want

    @given(st.integers(0, 2**200), st.integers(1, 12))
    def test_iroot_bracket(self, n, k):
        r = iroot(n, k)
        assert r**k <= n < (r + 1) ** k

    @given(st.integers(1, 10**12), st.integers(1, 60), st.integers(2, 61))
    def test_floor_ceil_pow(self, p, a, b):
        if a >= b or math.gcd(a, b) != 1:
            return
        g = GammaExponent(a, b)
        f, c = floor_pow(p, g), ceil_pow(p, g)
        assert f**b <= p**a < (f + 1) ** b
        assert (c - 1) ** b < p**a <= c**b

    @given(st.integers(1, 10**9), st.integers(1, 40), st.integers(2, 41))
    def test_floor_root_pow(self, n, a, b):
        if a >= b or math.gcd(a, b) != 1:
            return
        g = GammaExponent(a, b)
        k = floor_root_pow(n, g)
        assert k**a <= n**b < (k + 1) ** a

    def test_floor_root_pow_array_matches_scalar(self, rng):
        for g in (G("9/10"), G("97/100"), G("51/100"), G("2/3")):
            n = rng.integers(1, 2 * 10**6, size=3000)
            got = floor_root_pow_array(n, g)
            assert [floor_root_pow(int(v), g) for v in n] == got.tolist()


def _mp_member(p: int, g: GammaExponent):
    """Membership witness by 128-bit floating evaluation of both endpoints."""
    with mpmath.workprec(128):
        e = mpmath.mpf(g.num) / g.den
        lo = mpmath.mpf(p) ** e
        hi = mpmath.mpf(p + 1) ** e
        n0 = int(mpmath.ceil(lo))
        return n0 if n0 < hi else None


class TestMembership:
    def test_examples(self):
        assert ps_member(2, G("9/10")) == 2
        assert ps_member(5, G("51/100")) is None
        for k in range(2, 200):
            assert ps_member(k * k - 1, G("1/2")) is None
            assert ps_member(k * k, G("1/2")) == k

    def test_against_128bit_oracle(self, rng):
        gammas = [G("49/50"), G("97/100"), G("51/100"), G("9/10"), G("7/11")]
        ps = rng.integers(2, 10**9, size=20000)
        mismatches = 0
        for g in gammas:
            for p in ps:
                mismatches += ps_member(int(p), g) != _mp_member(int(p), g)
        assert mismatches == 0

    def test_vectorized_agrees_with_scalar(self, rng):
        for g in (G("49/50"), G("97/100"), G("1/2"), G("5/9")):
            ps = np.concatenate([rng.integers(2, 10**8, size=20000), np.arange(2, 3000), np.arange(2, 200) ** 2])
            got = member_witnesses(ps, g)
            want = [ps_member(int(p), g) or 0 for p in ps]
            assert got.tolist() == want

    def test_near_integer_powers_use_exact_path(self):
        # p = k^2 and neighbours are exact boundary cases for gamma = 1/2
        ks = np.arange(2, 5000, dtype=np.int64)
        ps = np.concatenate([ks * ks, ks * ks - 1])
        w = member_witnesses(ps, G("1/2"))
        assert w[: ks.size].tolist() == ks.tolist()
        assert not w[ks.size :].any()

    def test_psi_neg_pow_array(self, rng):
        g = G("9/10")
        ps = rng.integers(2, 10**7, size=2000)
        got = psi_neg_pow_array(ps, g)
        with mpmath.workprec(128):
            e = mpmath.mpf(9) / 10
            want = [float(mpmath.ceil(mpmath.mpf(int(p)) ** e) - mpmath.mpf(int(p)) ** e - mpmath.mpf(0.5)) for p in ps]
        assert np.max(np.abs(got - np.array(want))) < 1e-9

    def test_psi_neg_pow_exact_at_integers(self):
        # (k^2)^(1/2) = k exactly; psi(-k) = -1/2
        ks = np.arange(2, 100, dtype=np.int64)
        assert np.all(psi_neg_pow_array(ks * ks, G("1/2")) == -0.5)


class TestPowDiff:
    @given(st.floats(1.0, 1e12), st.floats(-3.0, 1.0).filter(lambda e: abs(e) > 1e-6), st.floats(1e-3, 100.0))
    def test_against_mpmath(self, v, e, step):
        with mpmath.workdps(40):
            want = (mpmath.mpf(v) + step) ** e - mpmath.mpf(v) ** e
        got = pow_diff(v, e, step)
        assert got == pytest.approx(float(want), rel=1e-12, abs=1e-300)

    def test_array(self):
        v = np.array([1.0, 10.0, 1e6, 1e9])
        assert np.allclose(pow_diff_array(v, 0.9), [pow_diff(x, 0.9) for x in v], rtol=1e-15)
