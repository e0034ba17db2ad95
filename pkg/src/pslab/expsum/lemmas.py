"""Numerical checkers for the exponential-sum and min-sum estimates.

Implied constants are unknown, so each checker reports
``measured / envelope`` and passes it against a slack. The Weyl-van der
Corput inequality is the exception: it is checked with an explicit constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import mpmath
import numpy as np

from ..arith import GammaExponent, dist_nearest_int
from ..errors import ArgumentError, DomainError, HypothesisError
from .phase import TWO_PI, PhaseSpec, exp_sum
from .reports import DEFAULT_SLACK, LemmaCheckReport, LemmaId

DEFAULT_ETA = 0.05
GRID = 513

GammaLike = Union[float, GammaExponent]


def _gf(g: GammaLike) -> float:
    return g.float_value if isinstance(g, GammaExponent) else float(g)


def _constant_sign(values: np.ndarray) -> bool:
    return bool(np.all(values > 0) or np.all(values < 0))


# ---------------------------------------------------------------------------
# First and second derivative tests


def vdc_derivative_check(
    phase: PhaseSpec,
    a: float,
    b: float,
    order: int,
    slack: float = DEFAULT_SLACK,
    workers: int = 1,
) -> LemmaCheckReport:
    """Check ``|sum_{a<n<=b} e(f(n))|`` against the first or second derivative bound.

    Order 1 uses ``lambda1 = min ||f'||`` on [a, b] (Kusmin-Landau form) and
    needs f' monotone; order 2 uses ``lambda2 = min |f''|`` and needs f''
    of one sign. Both need ``5 < a < b <= 2a``.
    """
    if order not in (1, 2):
        raise ArgumentError(f"order must be 1 or 2, got {order}")
    if not 5 < a < b <= 2 * a:
        raise HypothesisError(f"need 5 < a < b <= 2a, got a={a}, b={b}")
    x = np.linspace(a, b, GRID)
    f2 = phase.derivative(x, 2)
    params = {"terms": [list(t) for t in phase.terms], "a": a, "b": b, "order": order}
    if order == 1:
        if not (np.all(f2 >= 0) or np.all(f2 <= 0)):
            raise HypothesisError("first derivative is not monotone on the range (f'' changes sign)")
        d_lo, d_hi = sorted(float(v) for v in phase.derivative(np.array([a, b]), 1))
        if math.floor(d_hi) >= math.ceil(d_lo):
            raise HypothesisError("first derivative meets an integer on the range (lambda1 = 0)")
        lam = min(dist_nearest_int(d_lo), dist_nearest_int(d_hi))
        envelope = 1.0 / lam
        notes = {"lambda1": lam}
    else:
        if not _constant_sign(f2):
            raise HypothesisError("second derivative vanishes or changes sign on the range")
        absf2 = np.abs(f2)
        lam = float(absf2.min())
        envelope = a * math.sqrt(lam) + 1.0 / math.sqrt(lam)
        notes = {"lambda2": lam, "ratio_max_min": float(absf2.max()) / lam}
    measured = abs(exp_sum(phase, a, b, workers))
    params.update(notes)
    return LemmaCheckReport.build(LemmaId.VDC, params, measured, envelope, slack, notes=notes)


# ---------------------------------------------------------------------------
# S_k(M) bounds


def zhai_regime(R: float, M: float, eta: float = DEFAULT_ETA) -> Optional[str]:
    """``small_R`` when R <= eta M (ties included), ``large_R`` when R >= M, else None."""
    if R <= eta * M:
        return "small_R"
    if R >= M:
        return "large_R"
    return None


def zhai_envelope(R: float, M: float, k: int, regime: str) -> float:
    if regime == "small_R":
        return M * R ** (-1.0 / k)
    return math.sqrt(R) + M * R ** (-1.0 / (k + 1))


def zhai_Sk_check(
    phase: PhaseSpec,
    M: float,
    regime: Optional[str] = None,
    M1: Optional[float] = None,
    eta: float = DEFAULT_ETA,
    slack: float = DEFAULT_SLACK,
    workers: int = 1,
) -> LemmaCheckReport:
    """Check ``|S_k(M)|`` against ``M R^(-1/k)`` or ``R^(1/2) + M R^(-1/(k+1))``."""
    phase.require_zhai_shape()
    M1 = 2 * M if M1 is None else M1
    if not M < M1 <= 2 * M:
        raise ArgumentError(f"need M < M1 <= 2M, got M={M}, M1={M1}")
    k = phase.k
    R = phase.scale(M)
    actual = zhai_regime(R, M, eta)
    if actual is None:
        raise ArgumentError(f"R={R:.6g} lies strictly between eta*M and M; no regime applies")
    if regime is not None and regime != actual:
        raise ArgumentError(f"regime mismatch: requested {regime} but R={R:.6g}, M={M} gives {actual}")
    envelope = zhai_envelope(R, M, k, actual)
    measured = abs(exp_sum(phase, M, M1, workers))
    params = {"terms": [list(t) for t in phase.terms], "M": M, "M1": M1, "k": k, "R": R, "regime": actual, "eta": eta}
    return LemmaCheckReport.build(LemmaId.ZHAI_SK, params, measured, envelope, slack)


# ---------------------------------------------------------------------------
# Truncated Fourier series of psi


def psi_array(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return t - np.floor(t) - 0.5


def dist_array(t: np.ndarray) -> np.ndarray:
    f = np.asarray(t, dtype=np.float64)
    f = f - np.floor(f)
    return np.minimum(f, 1.0 - f)


def psi_truncation(theta: np.ndarray, H: float) -> np.ndarray:
    """``-sum_{0<|h|<=H} e(theta h)/(2 pi i h) = -sum_{h=1}^{H} sin(2 pi h theta)/(pi h)``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    r = theta - np.floor(theta)
    out = np.zeros_like(r)
    hmax = int(math.floor(H))
    step = 512
    for h0 in range(1, hmax + 1, step):
        h = np.arange(h0, min(h0 + step, hmax + 1), dtype=np.float64)
        hr = np.outer(r, h)
        hr -= np.floor(hr)
        out -= (np.sin(TWO_PI * hr) / (math.pi * h)).sum(axis=1)
    return out


def psi_fourier_envelope(theta: np.ndarray, H: float) -> np.ndarray:
    d = dist_array(theta)
    with np.errstate(divide="ignore"):
        inv = np.where(d > 0, 1.0 / (H * np.where(d > 0, d, 1.0)), np.inf)
    return np.minimum(1.0, inv)


def psi_fourier_scan(theta: np.ndarray, H: float):
    """Measured error and envelope at every theta."""
    if not H > 1:
        raise DomainError(f"need H > 1, got {H}")
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    measured = np.abs(psi_array(theta) - psi_truncation(theta, H))
    return measured, psi_fourier_envelope(theta, H)


def psi_fourier_check(theta: float, H: float, slack: float = DEFAULT_SLACK) -> LemmaCheckReport:
    measured, env = psi_fourier_scan(np.array([theta]), H)
    return LemmaCheckReport.build(LemmaId.PSI_FOURIER, {"theta": theta, "H": H}, measured[0], env[0], slack)


def psi_fourier_grid_check(H: float, points: int = 10_000, slack: float = DEFAULT_SLACK) -> LemmaCheckReport:
    """Worst fitted constant over the grid ``theta = j/points``, j = 0..points-1."""
    theta = np.arange(points, dtype=np.float64) / points
    measured, env = psi_fourier_scan(theta, H)
    ratio = measured / env
    worst = int(np.argmax(ratio))
    params = {"H": H, "grid_points": points, "worst_theta": float(theta[worst])}
    return LemmaCheckReport.build(LemmaId.PSI_FOURIER, params, measured[worst], env[worst], slack)


# ---------------------------------------------------------------------------
# Weyl - van der Corput inequality


WEYL_CONSTANT = 2.0
WEYL_FORM = "|sum z|^2 <= 2 (N/Q) sum_{|q|<Q} (1-|q|/Q) Re sum_n z(n) conj z(n+q)"


@dataclass(frozen=True)
class WeylProfile:
    lhs: float
    S: np.ndarray  # S[Q-1] = sum_{|q|<Q}(1-|q|/Q) Re c(q), Q = 1..N
    N: int

    def rhs(self, Q: np.ndarray, sharp: bool = False) -> np.ndarray:
        Q = np.asarray(Q)
        factor = (self.N + Q - 1) / Q if sharp else WEYL_CONSTANT * self.N / Q
        return factor * self.S[Q - 1]


def weyl_profile(z: Sequence[complex]) -> WeylProfile:
    z = np.asarray(z, dtype=np.complex128)
    N = z.size
    if N < 1:
        raise ArgumentError("empty sequence")
    if not np.all(np.isfinite(z)):
        raise DomainError("sequence has non-finite entries")
    # c[q] = sum_n z(n) conj z(n+q), q >= 0
    full = np.correlate(z, z, mode="full")
    c = np.conj(full[N - 1 :])
    rc = c.real
    q = np.arange(N, dtype=np.float64)
    # S(Q) = c0 + 2 sum_{q=1}^{Q-1} (1 - q/Q) Re c(q)
    cs = np.concatenate([[0.0], np.cumsum(rc[1:])])
    cqs = np.concatenate([[0.0], np.cumsum(q[1:] * rc[1:])])
    Qs = np.arange(1, N + 1, dtype=np.float64)
    S = rc[0] + 2.0 * (cs[:N] - cqs[:N] / Qs)
    lhs = abs(complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))) ** 2
    return WeylProfile(lhs, S, N)


def weyl_vdc_check(
    z: Sequence[complex],
    Q: Optional[int] = None,
    rtol: float = 1e-12,
    params: Optional[dict] = None,
) -> LemmaCheckReport:
    """Check the explicit-constant inequality for one Q, or the worst over all 1 <= Q <= N.

    The proof (average z over windows of length Q, then Cauchy-Schwarz over
    the N+Q-1 window positions) gives the factor (N+Q-1)/Q <= 2N/Q; the
    report uses the constant 2.
    """
    prof = weyl_profile(z)
    N = prof.N
    if Q is None:
        Qs = np.arange(1, N + 1)
    else:
        if not 1 <= Q <= N:
            raise ArgumentError(f"need 1 <= Q <= N, got Q={Q}, N={N}")
        Qs = np.array([Q])
    rhs = prof.rhs(Qs)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, prof.lhs / np.where(rhs > 0, rhs, 1.0), np.where(prof.lhs > 0, np.inf, 0.0))
    worst = int(np.argmax(ratio))
    scale = max(prof.lhs, float(rhs[worst]), 1e-300)
    ok = prof.lhs <= rhs[worst] + rtol * scale
    p = {"N": N, "Q": int(Qs[worst]), "constant": WEYL_CONSTANT, "form": WEYL_FORM}
    if params:
        p.update(params)
    return LemmaCheckReport.build(LemmaId.WEYL, p, prof.lhs, float(rhs[worst]), passed=bool(ok))


# ---------------------------------------------------------------------------
# min-product sums


def min_sum_zhai(M: int, H_list: Sequence[float], gamma_list: Sequence[GammaLike], u_list: Sequence[float]) -> float:
    """``sum_{M<m<=2M} prod_j min(1, 1/(H_j ||(m+u_j)^gamma_j||))``; a zero distance contributes 1."""
    if not (len(H_list) == len(gamma_list) == len(u_list)):
        raise ArgumentError("H, gamma and u lists must have equal length")
    if any(not H > 1 for H in H_list):
        raise DomainError("all H_j must exceed 1")
    m = np.arange(M + 1, 2 * M + 1, dtype=np.float64)
    prod = np.ones_like(m)
    for H, g, u in zip(H_list, gamma_list, u_list):
        d = dist_array(np.power(m + u, _gf(g)))
        with np.errstate(divide="ignore"):
            prod *= np.where(d > 0, np.minimum(1.0, 1.0 / (H * np.where(d > 0, d, 1.0))), 1.0)
    return math.fsum(prod.tolist())


def min_sum_envelope(M: float, H_list: Sequence[float]) -> float:
    k = len(H_list)
    L = math.log(M) ** k
    return M / math.prod(H_list) * L + M ** (k / (k + 1)) * L


def min_sum_check(
    M: int,
    H_list: Sequence[float],
    gamma_list: Sequence[GammaLike],
    u_grid: Optional[Sequence[Sequence[float]]] = None,
    slack: float = DEFAULT_SLACK,
) -> LemmaCheckReport:
    """Sup of :func:`min_sum_zhai` over the supplied shift vectors against the envelope."""
    k = len(H_list)
    if u_grid is None:
        u_grid = [[0.0] * k]
    gs = [_gf(g) for g in gamma_list]
    notes = {}
    if not sum(gs) > k - 1.0 / (k + 1):
        notes["warning"] = f"sum of gammas <= k - 1/(k+1) = {k - 1.0 / (k + 1):.6g}"
    vals = [min_sum_zhai(M, H_list, gamma_list, u) for u in u_grid]
    worst = int(np.argmax(vals))
    params = {"M": M, "H": list(H_list), "gammas": gs, "u": list(u_grid[worst])}
    params.update(notes)
    return LemmaCheckReport.build(LemmaId.MIN_SUM, params, vals[worst], min_sum_envelope(M, H_list), slack, notes=notes)


# ---------------------------------------------------------------------------
# min(D, 1/||f(n)||) sums


def kratzel_min_sum_check(f: PhaseSpec, N: int, D_cap: float, slack: float = DEFAULT_SLACK) -> LemmaCheckReport:
    """``sum_{N<n<=2N} min(D, 1/||f(n)||)`` against ``(Q+1)(D+1/Delta) log(2+1/Delta)``."""
    if not D_cap >= 1:
        raise DomainError(f"need D >= 1, got {D_cap}")
    n = np.arange(N + 1, 2 * N + 1, dtype=np.float64)
    x = np.linspace(N, 2 * N, GRID)
    fp = f.derivative(np.concatenate([x, n]), 1)
    if not _constant_sign(fp):
        raise HypothesisError("first derivative is not bounded away from zero with one sign")
    delta = float(np.abs(fp).min())
    vals = f.value(n)
    Qbound = float(np.abs(vals).max())
    d = dist_array(vals)
    with np.errstate(divide="ignore"):
        terms = np.where(d > 0, np.minimum(D_cap, 1.0 / np.where(d > 0, d, 1.0)), D_cap)
    measured = math.fsum(terms.tolist())
    envelope = (Qbound + 1) * (D_cap + 1 / delta) * math.log(2 + 1 / delta)
    params = {"terms": [list(t) for t in f.terms], "N": N, "D": D_cap, "Q": Qbound, "Delta": delta}
    return LemmaCheckReport.build(LemmaId.KRATZEL, params, measured, envelope, slack)


# ---------------------------------------------------------------------------
# Expansion of Delta(n, q; gamma - 1)


def delta_expansion_check(n: int, q: int, gamma: GammaLike, slack: float = DEFAULT_SLACK, dps: int = 50) -> LemmaCheckReport:
    """Remainder of ``(n+q)^(g-1) - n^(g-1) = (g-1) q n^(g-2) + O(q^2 n^(g-3))``."""
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    if not n > 2 * q:
        raise DomainError(f"need n > 2q, got n={n}, q={q}")
    with mpmath.workdps(dps):
        g = mpmath.mpf(gamma.num) / gamma.den if isinstance(gamma, GammaExponent) else mpmath.mpf(gamma)
        nn, qq = mpmath.mpf(n), mpmath.mpf(q)
        diff = (nn + qq) ** (g - 1) - nn ** (g - 1)
        remainder = abs(diff - (g - 1) * qq * nn ** (g - 2))
        envelope = qq**2 * nn ** (g - 3)
        taylor2 = (g - 1) * (g - 2) / 2 * qq**2 * nn ** (g - 3)
        measured, env, t2 = float(remainder), float(envelope), float(taylor2)
    params = {"n": n, "q": q, "gamma": _gf(gamma), "second_order_term": t2}
    return LemmaCheckReport.build(LemmaId.DELTA, params, measured, env, slack)


# ---------------------------------------------------------------------------
# Truncated expansion of psi(-(n+1)^g) - psi(-n^g)


@dataclass(frozen=True)
class MhEhSplit:
    n: int
    H: float
    m_h: float
    m_h_imag: float
    e_h: float
    psi_diff: float
    residual: float
    mh_bound: float


def _frac_pow(n: int, gamma: GammaLike) -> float:
    """Fractional part of n^gamma, exact near integers when gamma is rational."""
    t = float(n) ** _gf(gamma)
    f = t - math.floor(t)
    if isinstance(gamma, GammaExponent) and min(f, 1 - f) < 1e-9:
        with mpmath.workprec(160):
            v = mpmath.mpf(n) ** (mpmath.mpf(gamma.num) / gamma.den)
            f = float(v - mpmath.floor(v))
    return f


def mh_eh_split(n: int, H: float, gamma: GammaLike, X: Optional[float] = None) -> MhEhSplit:
    """Split ``psi(-(n+1)^g) - psi(-n^g)`` into the truncated series M_H and its remainder.

    M_H is summed over h = +-1..+-floor(H) in complex form; the conjugate
    pairs cancel so ``m_h_imag`` should vanish to rounding.
    """
    if not H > 1:
        raise DomainError(f"need H > 1, got {H}")
    fa = _frac_pow(n + 1, gamma)
    fb = _frac_pow(n, gamma)
    hmax = int(math.floor(H))
    h = np.concatenate([np.arange(1, hmax + 1), -np.arange(1, hmax + 1)]).astype(np.float64)
    ea = np.exp(-1j * TWO_PI * _wrap(h * fa))
    eb = np.exp(-1j * TWO_PI * _wrap(h * fb))
    terms = -(ea - eb) / (1j * TWO_PI * h)
    mh = complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))
    psi_diff = (-fa + (1.0 if fa > 0 else 0.0) - 0.5) - (-fb + (1.0 if fb > 0 else 0.0) - 0.5)
    dA, dB = min(fa, 1 - fa), min(fb, 1 - fb)
    e_h = _gmin(H, dA) + _gmin(H, dB)
    Xv = float(n) if X is None else X
    g = _gf(gamma)
    mh_bound = H * Xv ** (g - 1) * math.log(Xv) * _gmin(H, dB)
    return MhEhSplit(n, H, mh.real, mh.imag, e_h, psi_diff, abs(psi_diff - mh.real), mh_bound)


def _wrap(v: np.ndarray) -> np.ndarray:
    return v - np.floor(v)


def _gmin(H: float, d: float) -> float:
    return 1.0 if d == 0 else min(1.0, 1.0 / (H * d))


def mh_eh_check(n: int, H: float, gamma: GammaLike, slack: float = DEFAULT_SLACK) -> LemmaCheckReport:
    s = mh_eh_split(n, H, gamma)
    params = {"n": n, "H": H, "gamma": _gf(gamma), "m_h": s.m_h, "m_h_imag": s.m_h_imag, "mh_bound": s.mh_bound}
    return LemmaCheckReport.build(LemmaId.MH_EH, params, s.residual, s.e_h, slack)
