"""Cross-checks between the geometric pipeline and the series engine."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .domains import ReinhardtDomain, Shadow, exhaustion, make_ball, make_polydisc
from .errors import InternalError, InvalidArgument
from .series import (
    TruncatedSeries2,
    cauchy_hadamard_shadow,
    contour_h_star,
    evaluate,
    h_xi_coeffs,
    hadamard,
)
from .star import CellState, StarResult, h_star_shadow, star_shadow

SHADOW_TOL = 5e-2
IDENTITY_RTOL = 1e-9


def _window(A: Shadow, B: Shadow, window):
    if window is not None:
        return tuple(float(v) for v in window)
    xs = [v for v in (A.xmax, B.xmax) if math.isfinite(v)]
    ys = [v for v in (A.ymax, B.ymax) if math.isfinite(v)]
    if not xs or not ys:
        raise InvalidArgument("comparison window needed for unbounded shadows")
    return max(xs), max(ys)


def shadow_distance(A: Shadow, B: Shadow, res: int = 256, window=None) -> float:
    """Area of the symmetric difference over the window, as a fraction of the window."""
    X, Y = _window(A, B, window)
    x = (np.arange(res) + 0.5) * (X / res)
    y = (np.arange(res) + 0.5) * (Y / res)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    return float(np.mean(A.inside(xx, yy) != B.inside(xx, yy)))


def _ray_radii(S: Shadow, phis, rmax, steps=60):
    u, v = np.cos(phis), np.sin(phis)
    lo = np.zeros_like(phis)
    hi = np.full_like(phis, rmax)
    full = S.inside(hi * u * (1 - 1e-12), hi * v * (1 - 1e-12))
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        ins = S.inside(mid * u, mid * v)
        lo = np.where(ins, mid, lo)
        hi = np.where(ins, hi, mid)
    return np.where(full, rmax, 0.5 * (lo + hi))


def ray_discrepancy(A: Shadow, B: Shadow, rays: int = 64, window=None) -> float:
    """Largest difference of boundary radii along ``rays`` directions in the quadrant."""
    X, Y = _window(A, B, window)
    phis = np.linspace(0.0, np.pi / 2, rays)
    rmax = math.hypot(X, Y)
    return float(np.max(np.abs(_ray_radii(A, phis, rmax) - _ray_radii(B, phis, rmax))))


class ShadowComparison(NamedTuple):
    area: float
    max_ray: float


def compare_shadows(A: Shadow, B: Shadow, res: int = 256, window=None, rays: int = 64) -> ShadowComparison:
    """Normalized symmetric-difference area together with the ray discrepancy."""
    return ShadowComparison(shadow_distance(A, B, res, window), ray_discrepancy(A, B, rays, window))


@dataclass
class Case:
    name: str
    inputs: dict
    predicted: Any
    observed: Any
    error: float
    tolerance: float
    metric: str
    control: bool = False
    certifies: str = ""
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.error <= self.tolerance)


@dataclass
class Report:
    suite: str
    seed: int | None = None
    cases: list = field(default_factory=list)

    def add(self, case: Case) -> Case:
        self.cases.append(case)
        return case

    @property
    def summary(self) -> dict:
        regular = [c for c in self.cases if not c.control]
        controls = [c for c in self.cases if c.control]
        return {
            "cases": len(self.cases),
            "passed": sum(c.passed for c in regular),
            "failed": sum(not c.passed for c in regular),
            "controls": len(controls),
            "controls_failed_as_designed": sum(not c.passed for c in controls),
        }

    @property
    def ok(self) -> bool:
        """All regular cases pass and every negative control fails."""
        s = self.summary
        return s["failed"] == 0 and s["controls_failed_as_designed"] == s["controls"]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "ok": self.ok,
                "summary": self.summary, "cases": [asdict(c) for c in self.cases]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=jsonable)


def jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return repr(v)


def _shadow_summary(S: Shadow) -> dict:
    return {"xmax": S.xmax, "ymax": S.ymax, "samples": int(S.xs.size)}


def verify_hstar(
    G: ReinhardtDomain,
    g_extremal: TruncatedSeries2,
    nx: int = 256,
    hstar: StarResult | None = None,
    name: str = "hstar",
    control: bool = False,
    report: Report | None = None,
) -> Report:
    """Compare the h*G shadow with the convergence shadow of ``h_(1,1) * g``.

    A single germ g only bounds h*G from outside (its continuation domain
    contains h*G), so agreement is evidence, not proof, of extremality.
    """
    report = report if report is not None else Report("hstar")
    hstar = hstar or h_star_shadow(G, nx)
    hg = hadamard(h_xi_coeffs((1, 1), g_extremal.cap), g_extremal)
    series_shadow = cauchy_hadamard_shadow(hg)
    window = (hstar.mask.x_extent, hstar.mask.y_extent)
    cmp = compare_shadows(hstar.shadow, series_shadow, window=window)
    observed = dict(_shadow_summary(series_shadow), max_ray_discrepancy=cmp.max_ray)
    report.add(Case(
        name, {"G": repr(G), "cap": g_extremal.cap, "grid": nx},
        _shadow_summary(hstar.shadow), observed,
        cmp.area, SHADOW_TOL, "shadow_distance", control,
        "continuation domain of h*g contains h*G (one-sided)",
    ))
    return report


def _random_polynomial(rng: np.random.Generator, max_degree: int = 8) -> TruncatedSeries2:
    deg = int(rng.integers(0, max_degree + 1))
    n = deg + 1
    r = np.sqrt(rng.random((n, n)))
    c = r * np.exp(2j * np.pi * rng.random((n, n)))
    return TruncatedSeries2(c, deg)


def _random_point(rng: np.random.Generator, radius: float = 2.0):
    r = radius * np.sqrt(rng.random(2))
    return tuple(r * np.exp(2j * np.pi * rng.random(2)))


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def verify_contour_vs_series(trials: int = 50, seed: int = 0) -> Report:
    """Contour formula versus the coefficientwise product on random polynomials."""
    report = Report("contour", seed)
    fixed = [
        ("constant", TruncatedSeries2.from_dict({(0, 0): 1}, 0), (0.3 + 0.1j, -0.7)),
        ("z1z2_at_ones", TruncatedSeries2.monomial(1, 1), (1.0, 1.0)),
    ]
    rng = np.random.default_rng(seed)
    randoms = [(f"random_{k}", _random_polynomial(rng), _random_point(rng)) for k in range(trials)]
    for name, f, z in fixed + randoms:
        predicted = complex(evaluate(hadamard(h_xi_coeffs((1, 1), f.cap), f), z))
        observed = contour_h_star(f, z).value
        report.add(Case(name, {"cap": f.cap, "z": list(z)}, predicted, observed,
                        _rel(predicted, observed), IDENTITY_RTOL, "relative"))
    # dropping the Lambda operator must break the identity
    f = TruncatedSeries2.from_dict({(1, 0): 1.0, (2, 1): 0.5j}, 3)
    z = (0.8, -0.6j)
    predicted = complex(evaluate(hadamard(h_xi_coeffs((1, 1), f.cap), f), z))
    observed = contour_h_star(f, z, lam=f).value
    report.add(Case("control_without_lambda", {"z": list(z)}, predicted, observed,
                    _rel(predicted, observed), IDENTITY_RTOL, "relative", control=True))
    return report


def verify_union_lemma(
    D: ReinhardtDomain,
    G: ReinhardtDomain,
    n_max: int = 6,
    nx: int = 256,
    hstar: StarResult | None = None,
) -> Report:
    """Star shadows of an exhaustion of D grow cellwise and fill the star shadow of D."""
    report = Report("union")
    hstar = hstar or h_star_shadow(G, nx)
    full = star_shadow(D, hstar=hstar, nx=nx)
    window = (full.mask.x_extent, full.mask.y_extent)
    target = full.mask.states == CellState.IN
    masks = []
    for n in range(n_max + 1):
        res = star_shadow(exhaustion(D, n), hstar=hstar, nx=nx, window=window)
        masks.append(res.mask.states == CellState.IN)
    label = f"{D!r} * {G!r}"
    for n in range(n_max):
        lost = int(np.count_nonzero(masks[n] & ~masks[n + 1]))
        report.add(Case(f"monotone_{n}_{n + 1}", {"pair": label}, 0, lost, lost, 0, "cells lost"))
    grown = int(np.count_nonzero(masks[1] & ~masks[0]))
    report.add(Case("strict_growth_0_1", {"pair": label}, ">0", grown, float(grown == 0), 0, "no growth"))
    slack = 4.0 / nx + 4.0 / nx
    needed = 1.0 - 2.0 ** -n_max - slack

    def coverage(m):
        return float(np.count_nonzero(m & target)) / max(int(np.count_nonzero(target)), 1)

    cov = coverage(masks[-1])
    report.add(Case(f"coverage_n{n_max}", {"pair": label, "needed": needed}, needed, cov,
                    max(0.0, needed - cov), 0.0, "coverage shortfall"))
    cov0 = coverage(masks[0])
    report.add(Case("control_coverage_n0", {"pair": label, "needed": needed}, needed, cov0,
                    max(0.0, needed - cov0), 0.0, "coverage shortfall", control=True))
    return report


def hstar_suite(nx: int = 256, cap: int = 60) -> Report:
    report = Report("hstar")
    p11 = make_polydisc(1, 1)
    h11 = h_star_shadow(p11, nx)
    verify_hstar(p11, TruncatedSeries2.geometric(cap), nx, h11, "polydisc11_geometric", report=report)
    p21 = make_polydisc(2, 1)
    verify_hstar(p21, TruncatedSeries2.geometric(cap, (2.0, 1.0)), nx, None,
                 "polydisc21_scaled_geometric", report=report)
    # coefficients 2**a1 converge only on |z1| < 1/2: wrong germ for polydisc(1,1)
    verify_hstar(p11, TruncatedSeries2.geometric(cap, (0.5, 1.0)), nx, h11,
                 "control_wrong_germ", control=True, report=report)
    return report


def union_suite(nx: int = 256) -> Report:
    report = Report("union")
    G = make_polydisc(1, 1)
    hstar = h_star_shadow(G, nx)
    for D, n_max in ((make_polydisc(1, 1), 6), (make_ball(1), 5)):
        sub = verify_union_lemma(D, G, n_max, nx, hstar)
        for c in sub.cases:
            c.name = f"{D.family}_{c.name}"
            report.add(c)
    return report


SUITES = ("hstar", "contour", "union")


def run_suites(suite: str = "all", seed: int = 0, nx: int = 256) -> list[Report]:
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name == "hstar":
            out.append(hstar_suite(nx))
        elif name == "contour":
            out.append(verify_contour_vs_series(50, seed))
        elif name == "union":
            out.append(union_suite(nx))
        else:
            raise InvalidArgument(f"unknown suite {name!r}")
        if not out[-1].summary["controls"]:
            raise InternalError(f"suite {name} has no negative control")
    return out
