"""Domains 0 in D of C^2: Reinhardt shadows, general membership oracles, exhaustions.

A Reinhardt domain is stored through its shadow (absolute image), an open
downward-closed region of the closed positive quadrant described by a
non-increasing upper profile ``beta`` on ``[0, xmax)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidParameter, UnsupportedDomain

Profile = Callable[[np.ndarray], np.ndarray]

PROFILE_SAMPLES = 2049


def _sample_abscissae(xmax: float, n: int = PROFILE_SAMPLES) -> np.ndarray:
    # sin spacing clusters nodes near xmax where profiles tend to turn sharply
    xs = xmax * np.sin(np.linspace(0.0, np.pi / 2, n))
    xs[0] = 0.0
    xs[-1] = xmax
    return xs


@dataclass(frozen=True, eq=False)
class Shadow:
    """Open downward-closed region ``{x < xmax, y < beta(x)}`` of the quadrant.

    ``xs``/``betas`` are the serialisable samples (linear interpolation in
    between).  ``profile`` optionally gives the exact boundary and then takes
    precedence for membership.  An infinite ``ymax`` means ``beta = +inf`` to
    the left of the first sample; an infinite ``xmax`` continues the last
    sample value to the right.
    """

    xs: np.ndarray
    betas: np.ndarray
    xmax: float
    ymax: float
    profile: Optional[Profile] = field(default=None, repr=False)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float).ravel()
        betas = np.asarray(self.betas, dtype=float).ravel()
        if xs.shape != betas.shape:
            raise InvalidParameter("xs and betas must have equal length")
        if not (self.xmax > 0 and self.ymax > 0):
            raise InvalidParameter("shadow must contain a neighbourhood of the origin")
        if xs.size:
            if np.any(np.diff(xs) <= 0):
                raise InvalidParameter("sample abscissae must be strictly increasing")
            if np.any(np.diff(betas) > 1e-12 * max(1.0, float(np.max(betas)))):
                raise InvalidParameter("profile samples must be non-increasing")
            if xs[0] < 0 or np.any(betas < 0) or not np.all(np.isfinite(betas)):
                raise InvalidParameter("samples must lie in the closed positive quadrant")
            if math.isfinite(self.xmax):
                if xs[-1] > self.xmax:
                    raise InvalidParameter("samples extend past xmax")
                if xs[-1] < self.xmax:
                    xs = np.append(xs, self.xmax)
                    betas = np.append(betas, betas[-1])
            if math.isfinite(self.ymax):
                if xs[0] > 0:
                    xs = np.insert(xs, 0, 0.0)
                    betas = np.insert(betas, 0, betas[0])
                if betas[0] <= 0:
                    raise InvalidParameter("beta(0) must be positive")
        elif math.isfinite(self.xmax) or math.isfinite(self.ymax):
            raise InvalidParameter("a bounded shadow needs profile samples")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "betas", betas)

    @classmethod
    def from_profile(cls, profile: Profile, xmax: float, ymax: float, n: int = PROFILE_SAMPLES) -> "Shadow":
        xs = _sample_abscissae(xmax, n)
        betas = np.minimum.accumulate(np.asarray(profile(xs), dtype=float))
        return cls(xs, betas, xmax, ymax, profile)

    @classmethod
    def from_points(cls, points, xmax: float, ymax: float) -> "Shadow":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return cls(pts[:, 0], pts[:, 1], xmax, ymax)

    @classmethod
    def whole_quadrant(cls) -> "Shadow":
        return cls(np.empty(0), np.empty(0), math.inf, math.inf)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.xmax) and math.isfinite(self.ymax)

    def beta(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.xs.size == 0:
            return np.full(x.shape, math.inf)
        if self.profile is not None:
            with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
                b = np.asarray(self.profile(np.clip(x, 0.0, self.xmax)), dtype=float)
            b = np.broadcast_to(b, x.shape)
        else:
            b = np.interp(x, self.xs, self.betas)
        if not math.isfinite(self.ymax):
            b = np.where(x < self.xs[0], math.inf, b)
        return b

    def inside(self, x, y) -> np.ndarray:
        """Strict membership of moduli ``(x, y)``; boundary points are outside."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (x < self.xmax) & (y < self.beta(x))

    def boundary_points(self) -> np.ndarray:
        """Sampled points of the closure's upper boundary, x increasing."""
        return np.column_stack([self.xs, self.betas])

    def scaled(self, l1: float, l2: float) -> "Shadow":
        prof = None
        if self.profile is not None:
            base = self.profile
            prof = lambda x: l2 * np.asarray(base(np.asarray(x) / l1))  # noqa: E731
        return Shadow(self.xs * l1, self.betas * l2, self.xmax * l1, self.ymax * l2, prof)

    def swapped(self) -> "Shadow":
        """Mirror in the diagonal, from the piecewise-linear samples."""
        if self.xs.size == 0:
            return self
        if not self.bounded:
            raise UnsupportedDomain("swap of unbounded sampled shadows is not supported")
        # boundary polyline from (0, ymax) to (xmax, 0), traversed backwards
        pts = np.vstack([self.boundary_points(), [[self.xmax, 0.0]]])
        new = pts[::-1, ::-1]
        keep = np.ones(len(new), dtype=bool)
        keep[1:] = np.any(np.diff(new, axis=0) != 0, axis=1)
        new = new[keep]
        xs = new[:, 0].copy()
        # flat pieces become vertical jumps; split them by a tiny step
        eps = 1e-12 * self.ymax
        for i in range(1, xs.size):
            if xs[i] <= xs[i - 1]:
                xs[i] = xs[i - 1] + eps
        sel = xs <= self.ymax
        return Shadow(xs[sel], np.minimum.accumulate(new[sel, 1]), self.ymax, self.xmax)


class Domain2:
    """Domain in C^2 containing the origin."""

    bounded: bool

    def contains(self, z1, z2):
        raise NotImplementedError

    @property
    def extents(self) -> tuple[float, float]:
        """Per-coordinate bounds: ``|z_k| >= extents[k]`` forces non-membership."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class ReinhardtDomain(Domain2):
    shadow: Shadow
    family: str = "profile"
    params: tuple = ()

    @property
    def bounded(self) -> bool:
        return self.shadow.bounded

    @property
    def extents(self) -> tuple[float, float]:
        return (self.shadow.xmax, self.shadow.ymax)

    @property
    def bound_radius(self) -> float:
        return max(self.extents)

    def contains(self, z1, z2):
        res = self.shadow.inside(np.abs(z1), np.abs(z2))
        return bool(res) if res.ndim == 0 else res

    def __repr__(self):
        return f"ReinhardtDomain({self.family}{self.params})"


@dataclass(frozen=True, eq=False)
class GeneralDomain(Domain2):
    """Domain known only through a membership oracle.

    ``member(z1, z2)`` must accept complex arrays and return a boolean array
    (wrap scalar oracles with ``vectorized=False``).  The flags are trusted:
    wrong flags void every guarantee downstream.
    """

    member: Callable
    bound_radius: float = math.inf
    flags: frozenset = frozenset()
    vectorized: bool = True

    def __post_init__(self):
        if not self.bound_radius > 0:
            raise InvalidParameter("bound_radius must be positive")
        object.__setattr__(self, "flags", frozenset(self.flags))

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.bound_radius)

    @property
    def extents(self) -> tuple[float, float]:
        return (self.bound_radius, self.bound_radius)

    def contains(self, z1, z2):
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        if self.vectorized:
            res = np.asarray(self.member(z1, z2), dtype=bool)
        else:
            res = np.vectorize(lambda a, b: bool(self.member(a, b)), otypes=[bool])(z1, z2)
        if self.bounded:
            res = res & (np.maximum(np.abs(z1), np.abs(z2)) < self.bound_radius)
        return bool(res) if res.ndim == 0 else res


def contains(D: Domain2, z) -> bool:
    """Membership of the point ``z = (z1, z2)``."""
    return D.contains(z[0], z[1])


def _positive(*values, what="radius"):
    for v in values:
        if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
            raise InvalidParameter(f"{what} must be a positive finite number, got {v!r}")


def make_polydisc(r1: float, r2: float) -> ReinhardtDomain:
    _positive(r1, r2)
    prof = lambda x: np.full(np.shape(x), float(r2))  # noqa: E731
    shadow = Shadow(np.array([0.0, r1]), np.array([r2, r2], dtype=float), float(r1), float(r2), prof)
    return ReinhardtDomain(shadow, "polydisc", (float(r1), float(r2)))


def make_ball(r: float) -> ReinhardtDomain:
    _positive(r)
    r = float(r)
    prof = lambda x: np.sqrt(np.maximum(r * r - np.square(x), 0.0))  # noqa: E731
    return ReinhardtDomain(Shadow.from_profile(prof, r, r), "ball", (r,))


def make_ellipsoid(p1: float, p2: float) -> ReinhardtDomain:
    """``{|z1|^(2 p1) + |z2|^(2 p2) < 1}``; linearly convex for exponents >= 1/2."""
    _positive(p1, p2, what="exponent")
    p1, p2 = float(p1), float(p2)
    prof = lambda x: np.maximum(1.0 - np.power(x, 2 * p1), 0.0) ** (1.0 / (2 * p2))  # noqa: E731
    return ReinhardtDomain(Shadow.from_profile(prof, 1.0, 1.0), "ellipsoid", (p1, p2))


def make_profile(points, xmax: float, ymax: float) -> ReinhardtDomain:
    return ReinhardtDomain(Shadow.from_points(points, xmax, ymax), "profile", ())


def scale_domain(D: Domain2, lam) -> Domain2:
    """Coordinatewise image ``lam * D`` for ``lam`` in ``(0, inf)^2``."""
    l1, l2 = (float(v) for v in lam)
    _positive(l1, l2, what="scale factor")
    if isinstance(D, ReinhardtDomain):
        if D.family == "polydisc":
            return make_polydisc(D.params[0] * l1, D.params[1] * l2)
        return ReinhardtDomain(D.shadow.scaled(l1, l2), "scaled", (D, l1, l2))
    member = D.member

    def scaled_member(z1, z2):
        return member(np.asarray(z1) / l1, np.asarray(z2) / l2)

    return GeneralDomain(scaled_member, D.bound_radius * max(l1, l2), D.flags, D.vectorized)


def swap_domain(D: Domain2) -> Domain2:
    """Image of D under ``(z1, z2) -> (z2, z1)``."""
    if isinstance(D, ReinhardtDomain):
        if D.family == "polydisc":
            return make_polydisc(D.params[1], D.params[0])
        if D.family == "ball":
            return D
        if D.family == "ellipsoid":
            return make_ellipsoid(D.params[1], D.params[0])
        return ReinhardtDomain(D.shadow.swapped(), "swapped", (D,))
    member = D.member
    return GeneralDomain(lambda z1, z2: member(z2, z1), D.bound_radius, D.flags, D.vectorized)


def exhaustion(D: Domain2, n: int) -> ReinhardtDomain:
    """Member ``D_n`` of a non-decreasing smooth exhaustion of a Reinhardt D.

    The shadow is scaled by ``1 - 2**-(n+1)`` and capped by the superellipse
    ``(x/X)^(2m) + (y/Y)^(2m) < 1`` inscribed in its bounding box, with
    ``m = 2**(n+1)``.  The cap rounds off corners (it is polynomial, so the
    result is smooth wherever the scaled profile is) and is nested in ``n``.
    """
    if not isinstance(D, ReinhardtDomain):
        raise UnsupportedDomain("exhaustion is only available for Reinhardt domains")
    if n < 0:
        raise InvalidParameter("exhaustion index must be non-negative")
    c = 1.0 - 2.0 ** -(n + 1)
    m = 2.0 ** min(n + 1, 30)
    base = D.shadow
    xmax, ymax = base.xmax, base.ymax
    bx = c * xmax if math.isfinite(xmax) else 2.0 ** (n + 1)
    by = c * ymax if math.isfinite(ymax) else 2.0 ** (n + 1)

    def prof(x):
        x = np.asarray(x, dtype=float)
        scaled = c * base.beta(x / c)
        with np.errstate(under="ignore"):
            cap = by * np.maximum(1.0 - np.power(np.minimum(x / bx, 1.0), 2 * m), 0.0) ** (1.0 / (2 * m))
        return np.minimum(scaled, cap)

    return ReinhardtDomain(Shadow.from_profile(prof, bx, min(by, c * ymax)), "exhaustion", (D, n))
