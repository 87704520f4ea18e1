import json

import numpy as np
import pytest

from hadamard_domains import (
    InvalidArgument,
    Shadow,
    TruncatedSeries2,
    compare_shadows,
    make_ball,
    ray_discrepancy,
    shadow_distance,
    verify_contour_vs_series,
    verify_hstar,
    verify_union_lemma,
)
from hadamard_domains.verification import Case, Report


def square(s):
    return Shadow.from_points([(0, s), (s, s)], s, s)


def triangle():
    return Shadow.from_points([(0, 1), (1, 0)], 1.0, 1.0)


def test_shadow_distance_examples():
    assert shadow_distance(square(1), square(1)) == 0
    assert shadow_distance(square(1), square(0.9), res=1000) == pytest.approx(0.19, abs=2e-3)
    assert shadow_distance(triangle(), triangle(), res=1024) <= 1 / 1024
    with pytest.raises(InvalidArgument):
        shadow_distance(Shadow.whole_quadrant(), Shadow.whole_quadrant())


def test_ray_discrepancy():
    assert ray_discrepancy(square(1), square(1)) == pytest.approx(0, abs=1e-12)
    # 64 rays miss the diagonal; the nearest ones sit half a step away
    phis = np.linspace(0, np.pi / 2, 64)
    expected = np.max(0.1 / np.maximum(np.cos(phis), np.sin(phis)))
    assert ray_discrepancy(square(1), square(0.9)) == pytest.approx(expected, rel=1e-6)
    cmp = compare_shadows(triangle(), square(1))
    assert cmp.area == pytest.approx(0.5, abs=1e-2)
    c, s = np.cos(phis), np.sin(phis)
    assert cmp.max_ray == pytest.approx(np.max(1 / np.maximum(c, s) - 1 / (c + s)), rel=1e-6)


def test_case_pass_rule():
    assert Case("a", {}, 1.0, 1.04, 0.04, 0.05, "abs").passed
    assert not Case("b", {}, 1.0, 1.06, 0.06, 0.05, "abs").passed
    r = Report("x")
    r.add(Case("a", {}, 0, 0, 0.0, 0.1, "abs"))
    r.add(Case("c", {}, 0, 1, 1.0, 0.1, "abs", control=True))
    assert r.ok and r.summary["controls_failed_as_designed"] == 1
    r.add(Case("d", {}, 0, 0, 0.0, 0.1, "abs", control=True))
    assert not r.ok
    json.loads(r.to_json())


def test_verify_hstar_with_control(p11, hstar_p11):
    rep = verify_hstar(p11, TruncatedSeries2.geometric(60), hstar=hstar_p11)
    assert rep.ok and rep.cases[0].certifies
    bad = verify_hstar(p11, TruncatedSeries2.geometric(60, (0.5, 1.0)), hstar=hstar_p11, control=True)
    assert not bad.cases[0].passed and bad.ok


def test_contour_suite_reproducible():
    a = verify_contour_vs_series(10, seed=5)
    b = verify_contour_vs_series(10, seed=5)
    assert a.ok and a.to_json() == b.to_json()
    assert verify_contour_vs_series(10, seed=6).to_json() != a.to_json()


def test_union_lemma_ball_coarse(p11):
    rep = verify_union_lemma(make_ball(1), p11, 4, nx=64)
    assert rep.ok, [c for c in rep.cases if c.passed == c.control]
