"""Lemma check reports and their JSON form."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

DEFAULT_SLACK = 10.0


class LemmaId(str, Enum):
    PSI_FOURIER = "psi-fourier"
    WEYL = "weyl"
    VDC = "vdc"
    ZHAI_SK = "zhai-sk"
    MIN_SUM = "min-sum"
    KRATZEL = "kratzel"
    BPROCESS = "bprocess"
    DELTA = "delta"
    CASE4 = "case4"
    MH_EH = "mh-eh"


@dataclass(frozen=True)
class LemmaCheckReport:
    """One measured quantity set against the envelope of a lemma.

    ``fitted_constant`` is ``measured / envelope``. ``passed`` is decided by
    the checker, usually ``fitted_constant <= slack``; inequalities with an
    explicit constant pass only at ``fitted_constant <= 1``.
    """

    lemma_id: LemmaId
    params: Dict[str, Any]
    measured: float
    envelope: float
    fitted_constant: float
    passed: bool
    notes: Dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def build(
        cls,
        lemma_id: LemmaId,
        params: Dict[str, Any],
        measured: float,
        envelope: float,
        slack: float = DEFAULT_SLACK,
        passed: Optional[bool] = None,
        notes: Optional[Dict[str, Any]] = None,
    ) -> "LemmaCheckReport":
        measured = float(measured)
        envelope = float(envelope)
        if envelope > 0:
            fitted = measured / envelope
        else:
            fitted = 0.0 if measured == 0 else math.inf
        if passed is None:
            passed = fitted <= slack
        return cls(LemmaId(lemma_id), dict(params), measured, envelope, fitted, bool(passed), dict(notes or {}))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lemma_id": self.lemma_id.value,
            "params": _jsonable(self.params),
            "measured": self.measured,
            "envelope": self.envelope,
            "fitted_constant": self.fitted_constant,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, complex):
        return [v.real, v.imag]
    if hasattr(v, "item"):  # numpy scalar
        return v.item()
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=1)
