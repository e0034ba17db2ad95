"""Standard sample families for every checker.

``lemma_suite`` runs a whole family and returns its reports; ``scale_sup``
gives the worst fitted constant of a family at one scale, which the
scale-stability tests compare across doublings.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Optional

import numpy as np

from ..arith import GammaExponent, GammaPair, pow_diff
from ..errors import ArgumentError
from . import lemmas
from .algebra import case4_grid, case4_report
from .bprocess import BPROCESS_SLACK, b_process_check
from .phase import PhaseSpec
from .reports import DEFAULT_SLACK, LemmaCheckReport, LemmaId

GOLDEN = (math.sqrt(5) - 1) / 2
THEOREM_PAIR = GammaPair(GammaExponent(49, 50), GammaExponent(97, 100))


# ---------------------------------------------------------------------------
# phase families


def bprocess_monomials() -> List[tuple]:
    """(phase, a, b) monomial cases: 24 of them."""
    cases = []
    for T, al, a in [
        (40, 0.5, 1000), (2000, 0.5, 1000), (5000, 0.5, 1000), (20000, 0.5, 10000),
        (50000, 0.5, 10000), (100000, 0.5, 10000), (3000, 0.7, 1000), (300, 0.7, 2000),
        (10000, 0.7, 4000), (1000, 0.3, 1000), (30000, 0.3, 1000), (200, 1.5, 1000),
        (20, 1.5, 4000), (0.01, 2.5, 1000), (500, 0.9, 1000), (5000, 0.9, 2000),
        (800, 0.6, 3000), (8000, 0.6, 3000), (150, 0.8, 500), (1500, 0.8, 500),
        (60, 0.4, 200), (600, 0.4, 200), (7000, 0.45, 5000), (2500, 0.55, 8000),
    ]:
        cases.append((PhaseSpec.monomial(T, al), a, 2 * a))
    return cases


def bprocess_two_term() -> List[tuple]:
    """Two-term cases ``h1 n^g1 + h2 n^g2`` with h1 h2 > 0 (f' monotone)."""
    out = []
    for h1, g1, h2, g2, a in [
        (300, 0.9, 200, 0.8, 1000), (1000, 0.9, 500, 0.8, 1000), (100, 0.98, 300, 0.97, 2000),
        (2000, 0.95, 1000, 0.7, 1000), (50, 0.98, 40, 0.97, 4000), (700, 0.85, 900, 0.6, 1500),
        (-400, 0.9, -300, 0.75, 1200),
    ]:
        out.append((PhaseSpec(((h1, g1, 0.0), (h2, g2, 0.0))), a, 2 * a))
    return out


def vdc_order1() -> List[tuple]:
    """(phase, a, b) with f' monotone and avoiding integers."""
    out = []
    for theta in (1 / 3, GOLDEN, math.sqrt(2) - 1, 0.1, 0.45):
        for a in (10, 100, 1000):
            out.append((PhaseSpec.monomial(theta, 1.0), a, 2 * a))
    for a in (100, 1000, 10000):
        out.append((PhaseSpec(((0.3, 1.0, 0.0), (2.0, 0.5, 0.0))), a, 2 * a))
    return out


def vdc_order2(a: float = 1000) -> List[tuple]:
    return [(PhaseSpec.monomial(T, al), a, 2 * a) for T in (5, 50, 500) for al in (0.5, 0.7, 1.5)]


def delta_phase(n: int, q: int, h1: int, h2: int, pair: GammaPair) -> PhaseSpec:
    """``m -> h1 Delta(n,q;g1) m^g1 + h2 Delta(n,q;g2) m^g2``."""
    g1, g2 = pair.gamma1.float_value, pair.gamma2.float_value
    return PhaseSpec(((h1 * pow_diff(n, g1, q), g1, 0.0), (h2 * pow_diff(n, g2, q), g2, 0.0)))


def zhai_family(M: float, eta: float = lemmas.DEFAULT_ETA, seed: int = 0, size: int = 48) -> List[PhaseSpec]:
    """k = 2 phases from sampled (n, q, h1, h2) whose R falls in a regime at scale M."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < size:
        n = int(rng.integers(10**3, 10**5))
        q = int(rng.integers(1, 20))
        h1, h2 = (int(v) for v in rng.integers(1, 6, size=2))
        phase = delta_phase(n, q, h1, h2, THEOREM_PAIR)
        if lemmas.zhai_regime(phase.scale(M), M, eta) is not None:
            out.append(phase)
    return out


# ---------------------------------------------------------------------------
# suites


def _weyl_suite(trials: int, seed: int, max_n: int = 512) -> List[LemmaCheckReport]:
    rng = np.random.default_rng(seed)
    out = []
    for i in range(trials):
        N = int(rng.integers(1, max_n + 1))
        kind = i % 4
        if kind == 0:
            z = rng.normal(size=N) + 1j * rng.normal(size=N)
        elif kind == 1:
            z = np.exp(2j * np.pi * rng.random(N))
        elif kind == 2:
            z = np.exp(2j * np.pi * rng.random() * np.arange(N))
        else:
            z = rng.normal(size=N) + 0.0j + rng.normal()  # real with drift
        out.append(lemmas.weyl_vdc_check(z, params={"trial": i, "family": kind}))
    return out


def _psi_suite(slack: float) -> List[LemmaCheckReport]:
    out = [lemmas.psi_fourier_grid_check(H, slack=slack) for H in (16, 256, 4096)]
    out += [lemmas.psi_fourier_check(t, H, slack=slack) for t in (0.0, 0.5, 1e-3) for H in (16, 256)]
    return out


def _min_sum_suite(slack: float) -> List[LemmaCheckReport]:
    g = THEOREM_PAIR
    u_grid = [[0.0, 0.0], [0.25, 0.5], [0.5, 0.75], [1.0, 0.3]]
    out = [lemmas.min_sum_check(256, [16], [0.5], slack=slack)]
    for M in (2**10, 2**11, 2**12):
        for H in ([16, 16], [64, 8], [256, 256]):
            out.append(lemmas.min_sum_check(M, H, [g.gamma1, g.gamma2], u_grid, slack=slack))
    return out


def _kratzel_suite(slack: float) -> List[LemmaCheckReport]:
    out = []
    for f in (PhaseSpec.monomial(0.5, 1.0), PhaseSpec.monomial(GOLDEN, 1.0), PhaseSpec.monomial(3.0, 0.5)):
        for D in (1.0, 10.0, 100.0):
            out.append(lemmas.kratzel_min_sum_check(f, 512, D, slack=slack))
    return out


def _delta_suite(slack: float) -> List[LemmaCheckReport]:
    out = []
    for g in ("1/2", "49/50", "97/100", "3/4"):
        ge = GammaExponent.parse(g)
        for n, q in ((10**6, 1), (100, 2), (10**4, 7), (10**5, 300)):
            out.append(lemmas.delta_expansion_check(n, q, ge, slack=slack))
    return out


def _mh_eh_suite(seed: int, slack: float, count: int = 1000) -> List[LemmaCheckReport]:
    rng = np.random.default_rng(seed)
    out = []
    for H in (16, 256):
        for n in rng.integers(10**3, 10**7, size=count):
            out.append(lemmas.mh_eh_check(int(n), H, THEOREM_PAIR.gamma1, slack=slack))
    return out


def _zhai_suite(eta: float, slack: float, seed: int, workers: int = 1) -> List[LemmaCheckReport]:
    out = []
    for e in range(10, 15):
        M = 2**e
        for phase in zhai_family(M, eta, seed)[:4]:
            out.append(lemmas.zhai_Sk_check(phase, M, eta=eta, slack=slack, workers=workers))
    # k = 1 cross-check against the second derivative test
    out.append(lemmas.zhai_Sk_check(PhaseSpec.monomial(0.01, 0.5), 2**12, eta=eta, slack=slack))
    return out


def lemma_suite(
    lemma_id,
    slack: float = DEFAULT_SLACK,
    eta: float = lemmas.DEFAULT_ETA,
    seed: int = 0,
    trials: Optional[int] = None,
    workers: int = 1,
) -> List[LemmaCheckReport]:
    """Run the standard family for one lemma id."""
    lid = LemmaId(lemma_id)
    if lid is LemmaId.WEYL:
        return _weyl_suite(1000 if trials is None else trials, seed)
    if lid is LemmaId.PSI_FOURIER:
        return _psi_suite(slack)
    if lid is LemmaId.VDC:
        return [lemmas.vdc_derivative_check(p, a, b, 1, slack, workers) for p, a, b in vdc_order1()] + [
            lemmas.vdc_derivative_check(p, a, b, 2, slack, workers) for p, a, b in vdc_order2()
        ]
    if lid is LemmaId.ZHAI_SK:
        return _zhai_suite(eta, slack, seed, workers)
    if lid is LemmaId.MIN_SUM:
        return _min_sum_suite(slack)
    if lid is LemmaId.KRATZEL:
        return _kratzel_suite(slack)
    if lid is LemmaId.BPROCESS:
        s = min(slack, BPROCESS_SLACK)
        return [b_process_check(p, a, b, slack=s, workers=workers) for p, a, b in bprocess_monomials() + bprocess_two_term()]
    if lid is LemmaId.DELTA:
        return _delta_suite(slack)
    if lid is LemmaId.CASE4:
        return [case4_report(p) for p in case4_grid(100)]
    if lid is LemmaId.MH_EH:
        return _mh_eh_suite(seed, slack, 500 if trials is None else trials)
    raise ArgumentError(f"no suite for {lid}")  # pragma: no cover


# ---------------------------------------------------------------------------
# scale stability


def _sup(reports: List[LemmaCheckReport]) -> float:
    return max(r.fitted_constant for r in reports)


def _scale_vdc(a: float) -> float:
    phases = [PhaseSpec.monomial(T, al) for T in np.geomspace(2, 1000, 16) for al in (0.5, 0.7, 1.5)]
    return _sup([lemmas.vdc_derivative_check(p, a, 2 * a, 2) for p in phases])


def _scale_zhai(M: float) -> float:
    return _sup([lemmas.zhai_Sk_check(p, M) for p in zhai_family(M)])


def _scale_min_sum(M: float) -> float:
    g = THEOREM_PAIR
    u_grid = [[0.0, 0.0], [0.25, 0.5], [0.5, 0.75], [1.0, 0.3]]
    return _sup([lemmas.min_sum_check(int(M), H, [g.gamma1, g.gamma2], u_grid) for H in ([16, 16], [64, 8])])


def _scale_kratzel(N: float) -> float:
    fs = (PhaseSpec.monomial(0.5, 1.0), PhaseSpec.monomial(GOLDEN, 1.0), PhaseSpec.monomial(3.0, 0.5))
    return _sup([lemmas.kratzel_min_sum_check(f, int(N), 10.0) for f in fs])


def _scale_bprocess(a: float) -> float:
    phases = [PhaseSpec.monomial(T * math.sqrt(a), 0.5, u) for T in np.geomspace(2, 100, 16) for u in (0.0, 0.5)]
    return _sup([b_process_check(p, a, 2 * a) for p in phases])


def _scale_delta(n: float) -> float:
    return _sup([lemmas.delta_expansion_check(int(n), q, GammaExponent.parse(g)) for g in ("1/2", "49/50") for q in (1, 3)])


def _scale_psi(H: float) -> float:
    return lemmas.psi_fourier_grid_check(H).fitted_constant


SCALE_FAMILIES: Dict[str, Callable[[float], float]] = {
    LemmaId.VDC.value: _scale_vdc,
    LemmaId.ZHAI_SK.value: _scale_zhai,
    LemmaId.MIN_SUM.value: _scale_min_sum,
    LemmaId.KRATZEL.value: _scale_kratzel,
    LemmaId.BPROCESS.value: _scale_bprocess,
    LemmaId.DELTA.value: _scale_delta,
    LemmaId.PSI_FOURIER.value: _scale_psi,
}


def scale_sup(lemma_id, scale: float) -> float:
    """Worst fitted constant of the scale family for ``lemma_id`` at ``scale``."""
    return SCALE_FAMILIES[LemmaId(lemma_id).value](scale)
