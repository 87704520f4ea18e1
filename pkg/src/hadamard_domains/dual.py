"""Dual complement D* = {xi : xi . z != 1 for all z in D}.

For a Reinhardt domain the values ``xi . z`` over D fill the open disc of
radius ``sigma(|xi1|, |xi2|)``, where ``sigma`` is the support function of
the shadow, so ``xi`` lies in D* exactly when ``sigma <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .domains import Domain2, GeneralDomain, ReinhardtDomain
from .errors import DegenerateNormal, InvalidParameter, UnboundedDomain, UnsupportedDomain

BOUNDARY_TOL = 1e-12
DEFAULT_BOUNDARY_SAMPLES = 257


def _require_bounded_reinhardt(D: Domain2) -> ReinhardtDomain:
    if not isinstance(D, ReinhardtDomain):
        raise UnsupportedDomain("exact support functions need a Reinhardt domain")
    if not D.bounded:
        raise UnboundedDomain("the dual complement of an unbounded domain is not compact")
    return D


def support(D: Domain2, a: float, b: float) -> float:
    """``sup (a x + b y)`` over the closure of the shadow of D."""
    D = _require_bounded_reinhardt(D)
    if a < 0 or b < 0:
        raise InvalidParameter("support is evaluated on moduli (a, b >= 0)")
    if a == 0 and b == 0:
        return 0.0
    sh = D.shadow
    vals = a * sh.xs + b * sh.betas
    i = int(np.argmax(vals))
    best = float(vals[i])
    if sh.profile is not None and sh.xs.size > 2:
        lo = sh.xs[max(i - 1, 0)]
        hi = sh.xs[min(i + 1, sh.xs.size - 1)]
        res = minimize_scalar(
            lambda x: -(a * x + b * float(sh.beta(x))),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13 * max(1.0, sh.xmax)},
        )
        best = max(best, -float(res.fun))
    return best


@dataclass(frozen=True)
class DualMembership:
    inside: bool
    exact: bool

    def __bool__(self):
        return self.inside


def dual_contains(D: Domain2, xi, tol: float = BOUNDARY_TOL, samples: int = 201) -> DualMembership:
    """Closed membership test for D*.

    Reinhardt domains are decided exactly (up to ``tol`` on the support
    value).  For general bounded domains the complex line ``{xi . z = 1}`` is
    sampled inside the bounding polydisc; a sampled point of D refutes
    membership, otherwise the answer is marked approximate.
    """
    xi1, xi2 = complex(xi[0]), complex(xi[1])
    if isinstance(D, ReinhardtDomain):
        s = support(D, abs(xi1), abs(xi2))
        return DualMembership(s <= 1.0 + tol, True)
    if not D.bounded:
        raise UnboundedDomain("general domain needs a finite bound_radius")
    nrm2 = abs(xi1) ** 2 + abs(xi2) ** 2
    if nrm2 == 0:
        return DualMembership(True, True)
    # line: p + w v with p . xi = 1 and v . xi = 0
    p1, p2 = xi1.conjugate() / nrm2, xi2.conjugate() / nrm2
    v1, v2 = xi2, -xi1
    R = D.bound_radius
    reach = (R + math.hypot(abs(p1), abs(p2))) / math.sqrt(nrm2)
    t = np.linspace(-reach, reach, samples)
    w = (t[:, None] + 1j * t[None, :]).ravel()
    hit = np.any(D.contains(p1 + w * v1, p2 + w * v2))
    return DualMembership(not hit, bool(hit))


def dual_boundary(D: Domain2, n: int = DEFAULT_BOUNDARY_SAMPLES) -> np.ndarray:
    """``n`` points of ``{sigma = 1}``, from ``(1/sigma(1,0), 0)`` to ``(0, 1/sigma(0,1))``.

    Points are found along equally spaced rays; homogeneity of ``sigma`` gives
    the ray parameter, refined until ``|sigma - 1| <= 1e-12``.
    """
    D = _require_bounded_reinhardt(D)
    if n < 2:
        raise InvalidParameter("need at least the two axis extremes")
    angles = np.linspace(0.0, np.pi / 2, n)
    out = np.empty((n, 2))
    for k, phi in enumerate(angles):
        d = (math.cos(phi), math.sin(phi))
        if k == 0:
            d = (1.0, 0.0)
        elif k == n - 1:
            d = (0.0, 1.0)
        t = 1.0 / support(D, *d)
        for _ in range(50):
            s = support(D, t * d[0], t * d[1])
            if abs(s - 1.0) <= BOUNDARY_TOL:
                break
            t /= s
        out[k] = (t * d[0], t * d[1])
    return out


@dataclass(frozen=True)
class NormalSample:
    """Boundary point ``w`` with unit normal ``nu``.

    ``nu`` follows the bilinear convention: the supporting complex
    hyperplane at ``w`` is ``{z : (z - w) . nu = 0}``.
    """

    w: tuple
    nu: tuple

    def __post_init__(self):
        w = tuple(complex(c) for c in self.w)
        nu = np.array([complex(c) for c in self.nu])
        n = float(np.linalg.norm(nu))
        if n == 0:
            raise DegenerateNormal("normal vector vanishes")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "nu", tuple(nu / n))


def phi_map(s: NormalSample) -> tuple:
    """``nu / (w . nu)``; satisfies ``w . phi = 1`` by construction."""
    wn = s.w[0] * s.nu[0] + s.w[1] * s.nu[1]
    if abs(wn) < 1e-15:
        raise DegenerateNormal("w . nu vanishes")
    return (s.nu[0] / wn, s.nu[1] / wn)


def reinhardt_normal(D: ReinhardtDomain, w, h: float = 1e-7) -> NormalSample:
    """Unit normal at a boundary point of a smooth Reinhardt domain.

    Uses the defining function ``y - beta(x)`` on moduli; ``beta'`` is taken
    by central differences.  Coordinates with ``w_k = 0`` get a zero
    component, which is exact when the boundary meets the axis transversally.
    """
    w1, w2 = complex(w[0]), complex(w[1])
    x, y = abs(w1), abs(w2)
    sh = D.shadow
    if y == 0 or x >= sh.xmax * (1 - 1e-12):
        g = (1.0, 0.0)
    else:
        lo, hi = max(x - h, 0.0), min(x + h, sh.xmax)
        dbeta = float(sh.beta(hi) - sh.beta(lo)) / (hi - lo)
        g = (-dbeta, 1.0)
    # d|z|/dz = conj(z) / (2|z|)
    nu1 = g[0] * (w1.conjugate() / x if x > 0 else 0.0)
    nu2 = g[1] * (w2.conjugate() / y if y > 0 else 0.0)
    return NormalSample((w1, w2), (nu1, nu2))
