"""Scan tables of exponential sums against their envelopes, and raw evaluations."""

from __future__ import annotations

import json
from typing import List, Optional, Sequence

from ..arith import GammaPair
from ..errors import ArgumentError
from .phase import BilinearSpec, PhaseSpec, exp_sum, mobius_coeffs, prime_exp_sum, random_unimodular, type_i_sum, type_ii_sum, unit_coeffs

SCAN_COLUMNS = ["kind", "X", "M", "N", "h1", "h2", "abs_sum", "envelope", "ratio", "flag"]
COEFF_KINDS = ("mobius", "unit", "random")


def _check_freq(h1: int, h2: int) -> None:
    if h1 == 0 or h2 == 0:
        raise ArgumentError("frequencies h1 and h2 must be nonzero")


def tstar_scan(xs: Sequence[int], h1: int, h2: int, pair: GammaPair, epsilon: float = 0.01, workers: int = 1) -> List[dict]:
    """``|T*(X)|`` over (X, 2X] against ``X^(g1+g2-1-3 eps)``."""
    _check_freq(h1, h2)
    rows = []
    for X in xs:
        t = prime_exp_sum(X, 2 * X, h1, h2, pair, workers)
        env = float(X) ** (float(pair.total) - 1 - 3 * epsilon)
        spec = BilinearSpec(1, int(X), h1, h2, pair, epsilon=epsilon)
        flag = "frequency-range" if spec.frequency_warnings() else ""
        rows.append(_row("tstar", int(X), None, None, h1, h2, abs(t), env, flag))
    return rows


def _coeffs(kind: str, seed: int):
    if kind == "mobius":
        return mobius_coeffs
    if kind == "unit":
        return unit_coeffs
    if kind == "random":
        return random_unimodular(seed)
    raise ArgumentError(f"unknown coefficient family {kind!r}; expected one of {', '.join(COEFF_KINDS)}")


def bilinear_scan(
    kind: str,
    Ms: Sequence[int],
    Ns: Sequence[int],
    h1: int,
    h2: int,
    pair: GammaPair,
    epsilon: float = 0.01,
    a_kind: str = "mobius",
    b_kind: str = "random",
    seed: int = 0,
    workers: int = 1,
) -> List[dict]:
    """Type I or type II sums at paired (M, N); rows outside the estimate's range are flagged."""
    _check_freq(h1, h2)
    if kind not in ("type1", "type2"):
        raise ArgumentError(f"bilinear kind must be type1 or type2, got {kind!r}")
    if len(Ms) != len(Ns):
        if len(Ms) == 1:
            Ms = list(Ms) * len(Ns)
        elif len(Ns) == 1:
            Ns = list(Ns) * len(Ms)
        else:
            raise ArgumentError("M and N lists must have equal length (or one of them length 1)")
    a = _coeffs(a_kind, seed)
    b = _coeffs(b_kind, seed + 1)
    rows = []
    for M, N in zip(Ms, Ns):
        spec = BilinearSpec(int(M), int(N), h1, h2, pair, a_coeffs=a, b_coeffs=b, epsilon=epsilon)
        if kind == "type1":
            s = type_i_sum(spec, workers)
            inside = spec.in_type_i_window()
        else:
            s = type_ii_sum(spec, workers)
            inside = spec.in_type_ii_window()
        flags = [] if inside else ["outside-window"]
        if spec.frequency_warnings():
            flags.append("frequency-range")
        rows.append(_row(kind, spec.X, spec.M, spec.N, h1, h2, abs(s), spec.envelope(), ";".join(flags)))
    return rows


def _row(kind, X, M, N, h1, h2, value, env, flag) -> dict:
    return {
        "kind": kind, "X": X, "M": M, "N": N, "h1": h1, "h2": h2,
        "abs_sum": float(value), "envelope": float(env), "ratio": float(value) / float(env), "flag": flag,
    }


def raw_record(phase: PhaseSpec, M: float, M1: float, workers: int = 1) -> dict:
    s = exp_sum(phase, M, M1, workers)
    return {
        "kind": "raw",
        "terms": [list(t) for t in phase.terms],
        "M": M,
        "M1": M1,
        "re": s.real,
        "im": s.imag,
        "abs_sum": abs(s),
    }


def raw_json(phase: PhaseSpec, M: float, M1: float, workers: int = 1, indent: Optional[int] = 1) -> str:
    """JSON for a single direct evaluation; the CLI prints exactly this."""
    return json.dumps(raw_record(phase, M, M1, workers), indent=indent)
