"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py`` (or execute this file); a
PASS/FAIL line per criterion is printed in the terminal summary.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from hadamard_domains import (
    NotSeparated,
    Separated,
    Shadow,
    TruncatedSeries2,
    cauchy_hadamard_shadow,
    evaluate,
    h_star_shadow,
    h_xi_coeffs,
    hadamard,
    make_ball,
    make_ellipsoid,
    make_polydisc,
    scale_domain,
    separates,
    shadow_distance,
    star_shadow,
    swap_domain,
    torus_hadamard,
    verify_certificate,
    verify_contour_vs_series,
    verify_union_lemma,
    weighted_hadamard,
)
from oracles import diagonal_threshold, pixel_separates_polydisc

CRITERIA = {
    1: "separation threshold on the diagonal of polydisc(1,1)",
    2: "h* of polydiscs matches x/r1 + y/r2 < 1",
    3: "star-product anchors",
    4: "contour identity on random polynomials",
    5: "torus formula on random polynomial pairs",
    6: "reciprocal-weights identity in rational arithmetic",
    7: "monotone-union coverage",
    8: "certificate soundness at 10x density",
    9: "scaling, swap and phase invariance",
    10: "Cauchy-Hadamard shadow of h",
}
RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    assert ok, f"criterion {n}: {detail}"


def simplex(r1, r2):
    return Shadow.from_points([(0, r2), (r1, 0)], r1, r2)


def box(r1, r2):
    return Shadow.from_points([(0, r2), (r1, r2)], r1, r2)


def disc(r):
    x = np.linspace(0, r, 4097)
    return Shadow.from_points(np.column_stack([x, np.sqrt(np.maximum(r * r - x * x, 0))]), r, r)


@pytest.fixture(scope="module")
def hstar_cache():
    return {}


def hstar_for(cache, r1, r2):
    key = (r1, r2)
    if key not in cache:
        cache[key] = h_star_shadow(make_polydisc(r1, r2), 256)
    return cache[key]


def test_criterion_01_separation_threshold():
    D = make_polydisc(1, 1)
    ts = np.concatenate([np.linspace(0.30, 0.49, 10), np.linspace(0.51, 0.70, 10)])
    start = time.perf_counter()
    kinds = [separates(D, (t, t)) for t in ts]
    elapsed = time.perf_counter() - start
    wrong = [t for t, v in zip(ts, kinds)
             if not isinstance(v, Separated if t < diagonal_threshold() else NotSeparated)]
    # the frozen oracle: a direct raster of the zeta plane agrees on the bracket
    oracle = {t: pixel_separates_polydisc((t, t), n=4096) for t in (0.30, 0.49, 0.51, 0.70)}
    oracle_ok = all(v == (t < 0.5) for t, v in oracle.items())
    record(1, not wrong and oracle_ok and elapsed < 5,
           f"{20 - len(wrong)}/20 correct, oracle {'agrees' if oracle_ok else 'DISAGREES'}, {elapsed:.2f}s")


def test_criterion_02_hstar_polydiscs(hstar_cache):
    details, ok = [], True
    for r1, r2 in ((1, 1), (2, 1), (0.5, 3)):
        start = time.perf_counter()
        res = hstar_for(hstar_cache, r1, r2)
        elapsed = time.perf_counter() - start
        d = shadow_distance(res.shadow, simplex(r1, r2), window=(r1, r2))
        ok &= d <= 5e-2 and elapsed < 60
        details.append(f"({r1},{r2}) d={d:.4f} {elapsed:.1f}s")
    record(2, ok, "; ".join(details))


def test_criterion_03_star_anchors(hstar_cache):
    cases = [
        ("p(1,1)*p(1,1)", make_polydisc(1, 1), (1, 1), box(1, 1)),
        ("p(2,0.5)*p(1,2)", make_polydisc(2, 0.5), (1, 2), box(2, 1)),
        ("ball*p(1,1)", make_ball(1), (1, 1), disc(1)),
    ]
    details, ok = [], True
    for name, D, g, expected in cases:
        start = time.perf_counter()
        res = star_shadow(D, hstar=hstar_for(hstar_cache, *g))
        elapsed = time.perf_counter() - start
        d = shadow_distance(res.shadow, expected, window=(expected.xmax, expected.ymax))
        ok &= d <= 5e-2 and elapsed < 120
        details.append(f"{name} d={d:.4f} {elapsed:.1f}s")
    record(3, ok, "; ".join(details))


def test_criterion_04_contour_identity():
    start = time.perf_counter()
    rep = verify_contour_vs_series(50, seed=2024)
    elapsed = time.perf_counter() - start
    worst = max(c.error for c in rep.cases if not c.control)
    record(4, rep.ok and elapsed < 10, f"{rep.summary['passed']} cases, worst rel {worst:.1e}, {elapsed:.2f}s")


def _random_poly(rng, deg):
    n = deg + 1
    return TruncatedSeries2(np.sqrt(rng.random((n, n))) * np.exp(2j * np.pi * rng.random((n, n))), deg)


def test_criterion_05_torus_formula():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        f, g = _random_poly(rng, int(rng.integers(0, 9))), _random_poly(rng, int(rng.integers(0, 9)))
        z = tuple(2 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2)))
        rho = float(rng.uniform(0.5, 2.0))
        ref = complex(evaluate(hadamard(f, g), z))
        val = torus_hadamard(f, g, rho, z).value
        scale = max(abs(ref), abs(val))
        worst = max(worst, abs(ref - val) / scale if scale else 0.0)
    elapsed = time.perf_counter() - start
    record(5, worst <= 1e-9 and elapsed < 10, f"worst rel {worst:.1e}, {elapsed:.2f}s")


def test_criterion_06_reciprocal_weights():
    rng = np.random.default_rng(12)
    start = time.perf_counter()
    bad = []
    for cap in range(13):
        f = TruncatedSeries2.zeros(cap, exact=True)
        g = TruncatedSeries2.zeros(cap, exact=True)
        for a in f.indices():
            f[a] = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 50)))
            g[a] = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 50)))
        if not hadamard(h_xi_coeffs((1, 1), cap, exact=True), weighted_hadamard(f, g)) == hadamard(f, g):
            bad.append(cap)
    elapsed = time.perf_counter() - start
    record(6, not bad and elapsed < 1, f"caps 0..12 exact, failures {bad}, {elapsed:.3f}s")


def test_criterion_07_union_lemma(hstar_cache):
    details, ok = [], True
    for name, D in (("polydisc", make_polydisc(1, 1)), ("ball", make_ball(1))):
        start = time.perf_counter()
        rep = verify_union_lemma(D, make_polydisc(1, 1), 6, hstar=hstar_for(hstar_cache, 1, 1))
        elapsed = time.perf_counter() - start
        cov = next(c.observed for c in rep.cases if c.name == "coverage_n6")
        ok &= rep.ok and cov >= 0.95 and elapsed < 300
        details.append(f"{name} coverage {cov:.4f} {'ok' if rep.ok else 'FAILED'} {elapsed:.1f}s")
    record(7, ok, "; ".join(details))


def _random_family(rng):
    k = int(rng.integers(3))
    if k == 0:
        return make_polydisc(*rng.uniform(0.3, 3, 2))
    if k == 1:
        return make_ball(rng.uniform(0.3, 3))
    return make_ellipsoid(*rng.uniform(0.5, 3, 2))


def test_criterion_08_certificates():
    rng = np.random.default_rng(88)
    failures = decided = 0
    for _ in range(200):
        D = _random_family(rng)
        x, y = D.extents
        z = tuple(rng.uniform(0, 1.3, 2) * [x, y] * np.exp(2j * np.pi * rng.random(2)))
        v = separates(D, z)
        if v.decided:
            decided += 1
            failures += not verify_certificate(D, z, v, density=80)
    record(8, failures == 0 and decided > 150, f"{decided}/200 decided, {failures} certificate failures")


def _kind(D, z):
    return separates(D, z, certify=False).kind


def _conflict(a, b):
    return a != b and "Undetermined" not in (a, b)


def test_criterion_09_invariance():
    rng = np.random.default_rng(99)
    start = time.perf_counter()
    viol = {"scaling": 0, "swap": 0, "phase": 0}
    undetermined = 0
    for _ in range(100):
        D = _random_family(rng)
        z = tuple(rng.uniform(0, 1.2, 2) * D.extents * np.exp(2j * np.pi * rng.random(2)))
        base = _kind(D, z)
        undetermined += base == "Undetermined"
        lam = rng.uniform(0.2, 5, 2)
        viol["scaling"] += _conflict(base, _kind(scale_domain(D, lam), (lam[0] * z[0], lam[1] * z[1])))
        viol["swap"] += _conflict(base, _kind(swap_domain(D), (z[1], z[0])))
        ph = np.exp(2j * np.pi * rng.random(2))
        viol["phase"] += _conflict(base, _kind(D, (ph[0] * z[0], ph[1] * z[1])))
    elapsed = time.perf_counter() - start
    record(9, sum(viol.values()) == 0 and elapsed < 60,
           f"violations {viol}, {undetermined} undetermined, {elapsed:.1f}s")


def test_criterion_10_cauchy_hadamard():
    start = time.perf_counter()
    S = cauchy_hadamard_shadow(h_xi_coeffs((1, 1), 60))
    elapsed = time.perf_counter() - start
    d = shadow_distance(S, simplex(1, 1), window=(1, 1))
    record(10, d <= 5e-2 and elapsed < 5, f"d={d:.4f}, {elapsed:.3f}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
