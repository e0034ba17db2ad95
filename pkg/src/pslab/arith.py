"""Exact and high-precision scalar arithmetic.

Exponents are exact rationals (:class:`GammaExponent`) so that every
membership decision ``p in F_gamma`` can be made with integer arithmetic.
Vectorized helpers screen with float64 and fall back to the exact integer
path whenever a value sits too close to an integer boundary.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import ArgumentError, DomainError

Real = Union[int, float, Fraction]

# Exact post-condition assertions on every integer-root call (enabled by the test suite).
STRICT = os.environ.get("PSLAB_STRICT", "") not in ("", "0")

# Relative half-width of the band around integers in which float screening is not trusted.
# float64 pow is good to a few ulps (~1e-15 relative); this leaves three orders of headroom.
SCREEN_MARGIN = 1e-12


# ---------------------------------------------------------------------------
# Exponent types


@dataclass(frozen=True, order=False)
class GammaExponent:
    """An exact rational exponent ``num/den`` in (0, 1)."""

    num: int
    den: int
    float_value: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (isinstance(self.num, int) and isinstance(self.den, int)):
            raise DomainError("gamma numerator and denominator must be integers")
        if not 0 < self.num < self.den:
            raise DomainError(f"gamma must lie in (0, 1), got {self.num}/{self.den}")
        if math.gcd(self.num, self.den) != 1:
            raise DomainError(f"gamma {self.num}/{self.den} is not in lowest terms")
        object.__setattr__(self, "float_value", self.num / self.den)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "GammaExponent":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> "GammaExponent":
        """Parse ``"a/b"``; decimal and float notations are refused."""
        parts = text.strip().split("/")
        if len(parts) != 2 or not all(p.strip().lstrip("+").isdigit() for p in parts):
            raise DomainError(f"malformed rational exponent {text!r}; expected 'a/b'")
        num, den = int(parts[0]), int(parts[1])
        if den == 0:
            raise DomainError(f"malformed rational exponent {text!r}; zero denominator")
        return cls.from_fraction(Fraction(num, den))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.float_value

    def __lt__(self, other: "GammaExponent") -> bool:
        return self.fraction < other.fraction

    def __le__(self, other: "GammaExponent") -> bool:
        return self.fraction <= other.fraction

    def __gt__(self, other: "GammaExponent") -> bool:
        return self.fraction > other.fraction

    def __ge__(self, other: "GammaExponent") -> bool:
        return self.fraction >= other.fraction

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


THEOREM_LOWER = Fraction(21, 11)


@dataclass(frozen=True)
class GammaPair:
    """Two exponents with ``1/2 < gamma2 < gamma1 < 1``."""

    gamma1: GammaExponent
    gamma2: GammaExponent

    def __post_init__(self):
        half = Fraction(1, 2)
        if not (half < self.gamma2.fraction < self.gamma1.fraction < 1):
            raise DomainError(
                f"need 1/2 < gamma2 < gamma1 < 1, got gamma1={self.gamma1}, gamma2={self.gamma2}"
            )

    @classmethod
    def parse(cls, g1: str, g2: str) -> "GammaPair":
        return cls(GammaExponent.parse(g1), GammaExponent.parse(g2))

    @property
    def total(self) -> Fraction:
        return self.gamma1.fraction + self.gamma2.fraction

    def in_theorem_range(self) -> bool:
        return THEOREM_LOWER < self.total < 2

    def require_theorem_range(self) -> None:
        if not self.in_theorem_range():
            raise ArgumentError(
                f"theorem range violated: need 21/11 < gamma1 + gamma2 < 2, "
                f"got {self.gamma1} + {self.gamma2} = {self.total}"
            )


@dataclass(frozen=True)
class UnitPhase:
    """The point ``re + i*im`` on the unit circle."""

    re: float
    im: float

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )


# ---------------------------------------------------------------------------
# Scalar functions


def _check_finite(t) -> None:
    if isinstance(t, (int, Fraction)):
        return
    if not math.isfinite(t):
        raise DomainError(f"non-finite argument {t!r}")


_BELOW_ONE = math.nextafter(1.0, 0.0)


def frac(t: Real) -> Real:
    """Fractional part ``t - floor(t)`` in [0, 1); exact for int and Fraction input.

    For a tiny negative float the true value rounds up to 1.0; it is clamped
    to the largest float below 1.
    """
    _check_finite(t)
    f = t - math.floor(t)
    if isinstance(f, float) and f >= 1.0:
        return _BELOW_ONE
    return f


def dist_nearest_int(t: Real) -> Real:
    """The distance ``||t||`` from t to the nearest integer."""
    _check_finite(t)
    if isinstance(t, float):
        # subtracting the nearest integer is exact in binary floating point
        return abs(t - round(t))
    f = frac(t)
    return min(f, 1 - f)


def psi(t: Real) -> Real:
    """Sawtooth ``t - floor(t) - 1/2``."""
    half = Fraction(1, 2) if isinstance(t, (int, Fraction)) else 0.5
    return frac(t) - half


def reduce_mod1(hi: Real, lo: float = 0.0) -> float:
    """Reduce ``hi + lo`` modulo 1 into [0, 1).

    ``hi - floor(hi)`` is exact for any binary float, so the double-double
    pair keeps the accuracy of ``lo`` even when ``|hi|`` is far beyond 2**40.
    Fractions and integers are reduced exactly before rounding to float.
    """
    if isinstance(hi, (int, Fraction)):
        r = float(hi - math.floor(hi)) + lo
    else:
        _check_finite(hi)
        r = (hi - math.floor(hi)) + lo
    r -= math.floor(r)
    return 0.0 if r >= 1.0 else r


def e_phase(x: Real, lo: float = 0.0) -> UnitPhase:
    """``e(x) = exp(2*pi*i*x)`` with the argument reduced mod 1 first."""
    r = reduce_mod1(x, lo)
    # fold to [-1/2, 1/2) so cos/sin see the smallest argument
    if r >= 0.5:
        r -= 1.0
    ang = 2.0 * math.pi * r
    return UnitPhase(math.cos(ang), math.sin(ang))


# ---------------------------------------------------------------------------
# Integer roots


def iroot(n: int, k: int) -> int:
    """Largest integer r with ``r**k <= n`` (n >= 0, k >= 1)."""
    if n < 0 or k < 1:
        raise DomainError(f"iroot needs n >= 0 and k >= 1, got n={n}, k={k}")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    bits = n.bit_length()
    if bits <= k:
        return 1
    # float seed is close enough to walk to the answer below 2**50; otherwise Newton from above
    try:
        est = math.exp(math.log(n) / k)
    except OverflowError:
        est = math.inf
    if est < 2.0**50:
        r = int(est)
        while r**k > n:
            r -= 1
        while (r + 1) ** k <= n:
            r += 1
        return r
    x = 1 << (-(-bits // k))  # 2**ceil(bits/k) > root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def floor_pow(p: int, gamma: GammaExponent) -> int:
    """Exact ``floor(p**gamma)``: the largest k with ``k**den <= p**num``."""
    if p < 1:
        raise DomainError(f"floor_pow needs p >= 1, got {p}")
    target = p**gamma.num
    k = iroot(target, gamma.den)
    if STRICT:
        assert k**gamma.den <= target < (k + 1) ** gamma.den
    return k


def ceil_pow(p: int, gamma: GammaExponent) -> int:
    """Exact ``ceil(p**gamma)``."""
    target = p**gamma.num
    k = iroot(target, gamma.den)
    return k if k**gamma.den == target else k + 1


def floor_root_pow(n: int, gamma: GammaExponent) -> int:
    """Exact ``floor(n**(1/gamma))``: the largest k with ``k**num <= n**den``."""
    if n < 1:
        raise DomainError(f"floor_root_pow needs n >= 1, got {n}")
    target = n**gamma.den
    k = iroot(target, gamma.num)
    if STRICT:
        assert k**gamma.num <= target < (k + 1) ** gamma.num
    return k


def ps_member(p: int, gamma: GammaExponent) -> Optional[int]:
    """Witness n with ``p**gamma <= n < (p+1)**gamma``, or None.

    A witness exists exactly when ``p = floor(n**(1/gamma))`` for some n.
    """
    if p < 1:
        raise DomainError(f"ps_member needs p >= 1, got {p}")
    n0 = ceil_pow(p, gamma)
    if n0**gamma.den < (p + 1) ** gamma.num:
        return n0
    return None


# ---------------------------------------------------------------------------
# Vectorized screening


def _near_integer(t: np.ndarray) -> np.ndarray:
    d = np.abs(t - np.rint(t))
    return d <= SCREEN_MARGIN * np.maximum(t, 1.0)


def member_witnesses(values: np.ndarray, gamma: GammaExponent) -> np.ndarray:
    """Vectorized ``ps_member``: witness n for each entry, 0 where none exists.

    Float64 decides every entry whose endpoints ``p**gamma`` and
    ``(p+1)**gamma`` are clear of integers; the rest go through the exact path.
    """
    p = np.asarray(values, dtype=np.int64)
    pf = p.astype(np.float64)
    g = gamma.float_value
    t0 = np.power(pf, g)
    t1 = np.power(pf + 1.0, g)
    lo = np.floor(t0)
    hi = np.floor(t1)
    out = np.where(hi != lo, hi, 0.0).astype(np.int64)
    risky = np.flatnonzero(_near_integer(t0) | _near_integer(t1))
    for i in risky:
        w = ps_member(int(p[i]), gamma)
        out[i] = 0 if w is None else w
    return out


def floor_root_pow_array(n: np.ndarray, gamma: GammaExponent) -> np.ndarray:
    """Vectorized exact ``floor(n**(1/gamma))``."""
    n = np.asarray(n, dtype=np.int64)
    s = np.power(n.astype(np.float64), gamma.den / gamma.num)
    out = np.floor(s).astype(np.int64)
    for i in np.flatnonzero(_near_integer(s)):
        out[i] = floor_root_pow(int(n[i]), gamma)
    return out


def psi_neg_pow_array(values: np.ndarray, gamma: GammaExponent) -> np.ndarray:
    """``psi(-v**gamma)`` for integer v, with the integer part decided exactly.

    ``psi(-t) = ceil(t) - t - 1/2``; ceil(t) comes from the exact root whenever
    t is within the screening band of an integer.
    """
    v = np.asarray(values, dtype=np.int64)
    t = np.power(v.astype(np.float64), gamma.float_value)
    c = np.ceil(t)
    for i in np.flatnonzero(_near_integer(t)):
        c[i] = float(ceil_pow(int(v[i]), gamma))
    return (c - t) - 0.5


def pow_diff_array(values: np.ndarray, exponent: float, step: float = 1.0) -> np.ndarray:
    """``(v+step)**e - v**e`` without cancellation."""
    v = np.asarray(values, dtype=np.float64)
    return np.power(v, exponent) * np.expm1(exponent * np.log1p(step / v))


def pow_diff(v: float, exponent: float, step: float = 1.0) -> float:
    """Scalar ``(v+step)**e - v**e`` without cancellation."""
    return v**exponent * math.expm1(exponent * math.log1p(step / v))
