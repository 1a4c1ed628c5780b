import json

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from gicjam.params import NormalizedParams
from gicjam.ratesplit import (SplitRates, debug_dump, find_witness, fme_project, format_row,
                              split_feasible, split_system, symbolic_projection)
from gicjam.regions import AlphaPair, HK_SHAPES, alpha_feasible, hk_region, hk_terms

ratio = st.floats(0.1, 100)
unit = st.floats(0, 1)


def test_system_has_eight_rows():
    p = NormalizedParams.symmetric(4, 3, 1)
    rows = split_system(p, AlphaPair(0.5, 0.5))
    assert len(rows) == 8
    t = hk_terms(p, AlphaPair(0.5, 0.5))
    assert {r["term"] for r in rows} == set(t)
    assert all(r["bound"] == t[r["term"]] for r in rows)


def test_split_feasible_strict():
    p = NormalizedParams.symmetric(4, 3, 1)
    a = AlphaPair(1, 1)
    t = hk_terms(p, a)
    assert split_feasible(p, a, SplitRates(0, 0.5 * t["a1"], 0, 0.5 * t["a2"]))
    assert not split_feasible(p, a, SplitRates(0, t["a1"], 0, 0))


def test_split_infeasible_when_jammer_wins():
    p = NormalizedParams.symmetric(4, 3, 4)
    assert not split_feasible(p, AlphaPair(0.5, 0.5), SplitRates(0, 0, 0, 0))


def test_split_rates_validation():
    with pytest.raises(ValueError):
        SplitRates(-0.1, 0, 0, 0)
    s = SplitRates(0.1, 0.2, 0.3, 0.4)
    assert (s.R1, s.R2) == pytest.approx((0.3, 0.7))
    assert (s.common(2), s.private(1)) == (0.3, 0.2)


def test_debug_dump_schema():
    rec = json.loads(debug_dump(NormalizedParams.symmetric(4, 3, 1), AlphaPair(0.2, 0.3)))
    assert rec["schema"] == "gicjam.splitsystem/1"
    assert len(rec["rows"]) == 8
    assert rec["feasible_alpha"] is True


def test_symbolic_projection_contains_hk_rows():
    rows = {format_row(r) for r in symbolic_projection()}
    for expect in ("R1 <= b1", "R2 <= b2", "R1 + R2 <= c1 + c2", "R1 + R2 <= a1 + d2",
                   "R1 + R2 <= a2 + d1", "2*R1 + R2 <= a1 + c2 + d1",
                   "R1 + 2*R2 <= a2 + c1 + d2"):
        assert expect in rows
    # single-rate bounds that survive elimination but are missing from the HK display
    assert "R1 <= a1 + c2" in rows
    assert "R2 <= a2 + c1" in rows


def test_fme_region_shapes():
    r = fme_project(NormalizedParams(5, 7, 2, 3, 0.5, 1), AlphaPair(0.3, 0.6))
    assert r.open
    assert {(h.a1, h.a2) for h in r.halfspaces} <= HK_SHAPES


def test_fme_extra_facet_is_real():
    # a point of the displayed HK polygon that no rate split realizes
    p = NormalizedParams(S1=1.0, S2=23.2, I1=0.8, I2=2.3)
    a = AlphaPair(0.13, 0.4)
    t = hk_terms(p, a)
    fme, hk = fme_project(p, a), hk_region(p, a)
    R2 = 1.9
    assert t["a2"] + t["c1"] < R2
    assert hk.min_slack(0.01, R2) > 0
    assert fme.min_slack(0.01, R2) < 0
    assert find_witness(p, a, 0.01, R2) is None


@settings(max_examples=40, deadline=None)
@given(ratio, ratio, ratio, ratio, unit, unit)
def test_fme_inside_hk(S1, S2, I1, I2, a1, a2):
    p = NormalizedParams(S1, S2, I1, I2)
    a = AlphaPair(a1, a2)
    hk = hk_region(p, a)
    for v in fme_project(p, a).vertices():
        assert hk.min_slack(*v) >= -1e-9


@settings(max_examples=25, deadline=None)
@given(ratio, ratio, ratio, ratio, unit, unit, st.floats(0.05, 0.95), st.floats(0, 1))
def test_fme_points_have_witness(S1, S2, I1, I2, a1, a2, scale, mix):
    p = NormalizedParams(S1, S2, I1, I2)
    a = AlphaPair(a1, a2)
    assume(alpha_feasible(p, a))
    vs = np.array(fme_project(p, a).vertices())
    assume(len(vs) >= 3)
    # a point strictly inside: shrink a vertex combination toward the origin
    k = int(mix * (len(vs) - 1))
    R1, R2 = scale * vs[k]
    s = find_witness(p, a, R1, R2, step=1e-3)
    assert s is not None
    t = hk_terms(p, a)
    assert s.R1p <= t["a1"] + 1e-9 and s.R2p <= t["a2"] + 1e-9
