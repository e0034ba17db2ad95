"""Stationary-phase (B-process) transform of a weighted exponential sum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..arith import dist_nearest_int
from ..errors import HypothesisError, NumericError
from .phase import TWO_PI, PhaseSpec, exp_sum
from .reports import LemmaCheckReport, LemmaId

BPROCESS_SLACK = 5.0
NEWTON_TOL = 1e-12
NEWTON_MAX = 100
GRID = 1025

Weight = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BProcessResult:
    direct: complex
    transformed: complex
    residual: float
    envelope: float
    alpha: float
    beta: float
    D: float
    U: float
    n_terms: int
    stationary_points: tuple


def solve_stationary(phase: PhaseSpec, v: float, lo: float, hi: float) -> float:
    """Solve ``f'(x) = v`` on [lo, hi] for monotone f' by safeguarded Newton.

    Newton steps that leave the current bracket are replaced by bisection;
    after NEWTON_MAX iterations the bracket is simply bisected down.
    """
    d1 = lambda x: float(phase.derivative(np.array([x]), 1)[0]) - v
    d2 = lambda x: float(phase.derivative(np.array([x]), 2)[0])
    tol = NEWTON_TOL * max(1.0, abs(v))
    flo, fhi = d1(lo), d1(hi)
    if abs(flo) <= tol:
        return lo
    if abs(fhi) <= tol:
        return hi
    if flo * fhi > 0:
        raise NumericError(f"f'(x) = {v} not bracketed by [{lo}, {hi}] (values {flo + v}, {fhi + v})")
    x = 0.5 * (lo + hi)
    for it in range(NEWTON_MAX + 200):
        fx = d1(x)
        if abs(fx) <= tol:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        step_ok = False
        if it < NEWTON_MAX:
            slope = d2(x)
            if slope != 0:
                cand = x - fx / slope
                if lo < cand < hi:
                    x, step_ok = cand, True
        if not step_ok:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            x = mid
    fx = d1(x)
    if abs(fx) <= tol * 16:
        return x
    raise NumericError(f"Newton did not converge for v={v}: bracket [{lo}, {hi}], residual {fx}")


def b_process(
    phase: PhaseSpec,
    a: float,
    b: float,
    weight: Optional[Weight] = None,
    G: float = 1.0,
    workers: int = 1,
) -> BProcessResult:
    """Compare ``sum_{a<n<=b} g(n) e(f(n))`` with its stationary-phase transform.

    The transformed sum runs over integers v in ``[alpha, beta] = f'([a, b])``
    with weight 1/2 at an integer endpoint, and carries the phase
    ``f(n_v) - v n_v + sign(f'')/8``. The envelope is
    ``G log(beta-alpha+2) + G (b-a+D)/U + G min(sqrt D, 1/||alpha||) + G min(sqrt D, 1/||beta||)``
    with ``1/D`` the geometric mean of the extreme values of |f''| and
    ``U = max(1, 1/(D max|f'''|))``.
    """
    x = np.linspace(a, b, GRID)
    f2 = phase.derivative(x, 2)
    if not (np.all(f2 > 0) or np.all(f2 < 0)):
        raise HypothesisError("first derivative is not monotone on the range (f'' changes sign)")
    sign = 1.0 if f2[0] > 0 else -1.0
    absf2 = np.abs(f2)
    D = 1.0 / math.sqrt(float(absf2.min()) * float(absf2.max()))
    f3max = float(np.abs(phase.derivative(x, 3)).max())
    U = max(1.0, 1.0 / (D * f3max)) if f3max > 0 else math.inf

    ends = phase.derivative(np.array([a, b]), 1)
    alpha, beta = float(min(ends)), float(max(ends))
    w = (lambda n: np.ones(np.shape(n))) if weight is None else weight

    total_re, total_im, points = [], [], []
    for v in range(math.ceil(alpha), math.floor(beta) + 1):
        bv = 0.5 if v == alpha or v == beta else 1.0
        nv = solve_stationary(phase, float(v), a, b)
        nva = np.array([nv])
        amp = bv * float(np.real(w(nva))[0]) / math.sqrt(abs(float(phase.derivative(nva, 2)[0])))
        ph = float(phase.value(nva)[0]) - v * nv + sign / 8.0
        ph -= math.floor(ph)
        total_re.append(amp * math.cos(TWO_PI * ph))
        total_im.append(amp * math.sin(TWO_PI * ph))
        points.append(nv)
    transformed = complex(math.fsum(total_re), math.fsum(total_im))
    direct = exp_sum(phase, a, b, workers=workers, weight=None if weight is None else (lambda n: w(n)))

    def edge(t: float) -> float:
        d = dist_nearest_int(t)
        return math.sqrt(D) if d == 0 else min(math.sqrt(D), 1.0 / d)

    envelope = G * (math.log(beta - alpha + 2) + (b - a + D) / U + edge(alpha) + edge(beta))
    return BProcessResult(
        direct=direct,
        transformed=transformed,
        residual=abs(direct - transformed),
        envelope=envelope,
        alpha=alpha,
        beta=beta,
        D=D,
        U=U,
        n_terms=len(points),
        stationary_points=tuple(points),
    )


def b_process_check(
    phase: PhaseSpec,
    a: float,
    b: float,
    weight: Optional[Weight] = None,
    G: float = 1.0,
    slack: float = BPROCESS_SLACK,
    workers: int = 1,
) -> LemmaCheckReport:
    r = b_process(phase, a, b, weight, G, workers)
    params = {
        "terms": [list(t) for t in phase.terms],
        "a": a,
        "b": b,
        "alpha": r.alpha,
        "beta": r.beta,
        "D": r.D,
        "U": r.U,
        "n_terms": r.n_terms,
        "direct_abs": abs(r.direct),
    }
    return LemmaCheckReport.build(LemmaId.BPROCESS, params, r.residual, r.envelope, slack)
