import json
import math

import pytest

from pslab.expsum import lemmas
from pslab.expsum.families import SCALE_FAMILIES, lemma_suite, scale_sup, zhai_family
from pslab.expsum.reports import LemmaCheckReport, LemmaId, reports_to_json

KEYS = ["lemma_id", "params", "measured", "envelope", "fitted_constant", "pass"]


def test_report_json_keys():
    d = json.loads(lemmas.psi_fourier_check(0.3, 16).to_json())
    assert list(d) == KEYS
    r = LemmaCheckReport.build(LemmaId.WEYL, {"z": 1 + 2j, "t": (1, 2)}, 1.0, 2.0)
    assert json.loads(r.to_json())["params"] == {"z": [1.0, 2.0], "t": [1, 2]}


def test_build_rules():
    assert LemmaCheckReport.build(LemmaId.WEYL, {}, 0.0, 0.0).fitted_constant == 0.0
    r = LemmaCheckReport.build(LemmaId.WEYL, {}, 1.0, 0.0)
    assert math.isinf(r.fitted_constant) and not r.passed
    assert LemmaCheckReport.build(LemmaId.VDC, {}, 9.0, 1.0).passed
    assert not LemmaCheckReport.build(LemmaId.VDC, {}, 11.0, 1.0).passed


def test_reports_to_json_roundtrip():
    reps = lemma_suite("kratzel")
    data = json.loads(reports_to_json(reps))
    assert [list(d) for d in data] == [KEYS] * len(reps)


@pytest.mark.parametrize("lid", [l.value for l in LemmaId if l not in (LemmaId.CASE4,)])
def test_suite_passes(lid):
    reps = lemma_suite(lid, trials=200 if lid in ("weyl", "mh-eh") else None)
    assert reps and all(r.passed for r in reps), [r.to_dict() for r in reps if not r.passed][:3]
    assert all(r.lemma_id.value == lid for r in reps)


def test_zhai_family_regimes():
    for M in (2**10, 2**12):
        for ph in zhai_family(M, size=10):
            assert lemmas.zhai_regime(ph.scale(M), M) is not None


@pytest.mark.parametrize("lid", sorted(SCALE_FAMILIES))
def test_scale_stability(lid):
    base = {"vdc": 1000, "zhai-sk": 2**11, "min-sum": 2**10, "kratzel": 512, "bprocess": 1000, "delta": 10**4, "psi-fourier": 64}[lid]
    c1, c2 = scale_sup(lid, base), scale_sup(lid, 2 * base)
    assert c1 > 0
    assert abs(c2 - c1) / c1 < 0.5
