"""Coefficient algebra and closed-form partials of the bilinear phase

    f(m, n) = h1 m^g1 Delta(n, q; g1) + h2 m^g2 Delta(n, q; g2),
    Delta(n, q; g) = (n + q)^g - n^g.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Tuple, Union

from ..arith import GammaExponent, GammaPair, pow_diff
from .phase import falling
from .reports import LemmaCheckReport, LemmaId

PairLike = Union[GammaPair, Tuple[Fraction, Fraction]]

PARTIALS = ("f_n", "f_m", "f_nn", "f_nm", "f_mm", "f_nnn", "f_nnm")
# (derivatives in n, derivatives in m) for each name
ORDERS = {"f": (0, 0), "f_n": (1, 0), "f_m": (0, 1), "f_nn": (2, 0), "f_nm": (1, 1),
          "f_mm": (0, 2), "f_nnn": (3, 0), "f_nnm": (2, 1)}


def _fractions(pair: PairLike) -> Tuple[Fraction, Fraction]:
    if isinstance(pair, GammaPair):
        return pair.gamma1.fraction, pair.gamma2.fraction
    g1, g2 = (Fraction(g) for g in pair)
    if not Fraction(1, 2) < g2 < g1 < 1:
        raise ValueError(f"need 1/2 < gamma2 < gamma1 < 1, got {g1}, {g2}")
    return g1, g2


@dataclass(frozen=True)
class CoefficientAlgebra:
    """Quadratic-form coefficients, evaluated exactly and reported as floats.

    ``disc_AC`` is ``B^2 - AC`` and ``disc_AC_factored`` the factored closed
    form; both are computed in exact rational arithmetic, so ``disc_rel_diff``
    is zero unless the factorization is wrong.
    """

    gamma1: Fraction
    gamma2: Fraction
    A: float
    B: float
    C: float
    disc_AC: float
    A1: float
    B1: float
    C1: float
    disc_1: float
    disc_AC_factored: float
    disc_rel_diff: float

    def sign_pattern_holds(self) -> bool:
        return self.A < 0 and self.B < 0 and self.C < 0 and self.disc_AC > 0 and self.disc_1 > 0


def case4_exact(g1: Fraction, g2: Fraction) -> Dict[str, Fraction]:
    A = g1**3 * (g1 - 1) ** 2 * (g1 - 2)
    C = g2**3 * (g2 - 1) ** 2 * (g2 - 2)
    B = g1 * (g1 - 1) * g2 * (g2 - 1) * (3 * g1 * g2 - g1**2 - g2**2 - g1 - g2)
    A1 = g1**3 * (g1 - 1) ** 2
    B1 = g1 * (g1 - 1) * g2 * (g2 - 1) * (g1 + g2)
    C1 = g2**3 * (g2 - 1) ** 2
    factored = (
        g1**2 * (g1 - 1) ** 2 * g2**2 * (g2 - 1) ** 2 * (g1 - g2) ** 2
        * (2 * g1 + 2 * g2 + 1 + g1**2 + g2**2 - 4 * g1 * g2)
    )
    return {
        "A": A, "B": B, "C": C, "disc_AC": B * B - A * C,
        "A1": A1, "B1": B1, "C1": C1, "disc_1": B1 * B1 - 4 * A1 * C1,
        "disc_AC_factored": factored,
    }


def case4_coefficients(pair: PairLike) -> CoefficientAlgebra:
    g1, g2 = _fractions(pair)
    ex = case4_exact(g1, g2)
    fac = ex["disc_AC_factored"]
    diff = abs(ex["disc_AC"] - fac)
    rel = float(diff / abs(fac)) if fac != 0 else (0.0 if diff == 0 else float("inf"))
    return CoefficientAlgebra(
        gamma1=g1,
        gamma2=g2,
        **{k: float(v) for k, v in ex.items()},
        disc_rel_diff=rel,
    )


def case4_grid(size: int = 100) -> Iterator[Tuple[Fraction, Fraction]]:
    """size x size cell centres of the unit square mapped onto 1/2 < g2 < g1 < 1.

    ``g1 = 1/2 + s/2`` and ``g2 = 1/2 + s t/2`` with s, t the cell centres.
    """
    for i in range(size):
        s = Fraction(2 * i + 1, 2 * size)
        for j in range(size):
            t = Fraction(2 * j + 1, 2 * size)
            yield Fraction(1, 2) + s / 2, Fraction(1, 2) + s * t / 2


def case4_report(pair: PairLike, rtol: float = 1e-12) -> LemmaCheckReport:
    c = case4_coefficients(pair)
    ok = c.sign_pattern_holds() and c.disc_rel_diff <= rtol
    params = {
        "gamma1": str(c.gamma1), "gamma2": str(c.gamma2),
        "A": c.A, "B": c.B, "C": c.C, "disc_AC": c.disc_AC,
        "A1": c.A1, "B1": c.B1, "C1": c.C1, "disc_1": c.disc_1,
        "disc_AC_factored": c.disc_AC_factored,
    }
    # measured: formula disagreement; envelope: the tolerance
    return LemmaCheckReport.build(LemmaId.CASE4, params, c.disc_rel_diff, rtol, passed=ok)


def _delta(n: float, q: float, g: float) -> float:
    """``(n+q)^g - n^g`` via expm1/log1p; zero for q = 0."""
    if q == 0:
        return 0.0
    return pow_diff(float(n), g, float(q))


def bilinear_phase_partials(m: float, n: float, q: float, h1: float, h2: float, pair) -> Dict[str, float]:
    """``f`` and its partials f_n, f_m, f_nn, f_nm, f_mm, f_nnn, f_nnm in closed form.

    ``d^r/dn^r Delta(n, q; g) = g(g-1)...(g-r+1) Delta(n, q; g-r)``, so the
    Delta factors are kept exact rather than Taylor-expanded.
    """
    if isinstance(pair, GammaPair):
        gs = (pair.gamma1.float_value, pair.gamma2.float_value)
    else:
        gs = tuple(float(g.float_value if isinstance(g, GammaExponent) else g) for g in pair)
    out = {}
    for name, (rn, rm) in ORDERS.items():
        total = 0.0
        for h, g in zip((h1, h2), gs):
            total += h * falling(g, rm) * m ** (g - rm) * falling(g, rn) * _delta(n, q, g - rn)
        out[name] = total
    return out
