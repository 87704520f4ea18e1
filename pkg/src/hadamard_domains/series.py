"""Bivariate truncated power series and the quadratures built on them.

Coefficient tables are dense ``(cap+1) x (cap+1)`` arrays whose entries with
``a1 + a2 > cap`` are kept at zero.  Float tables are complex; exact tables
use ``dtype=object`` holding ints or ``Fraction``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .domains import Shadow
from .errors import InvalidArgument, InvalidParameter, QuadratureFailure

MAX_CAP = 200
CONTOUR_RTOL = 1e-10
MAX_CONTOUR_NODES = 2 ** 14
MAX_TORUS_NODES = 2 ** 10  # per axis


def _triangle_mask(cap: int) -> np.ndarray:
    a = np.arange(cap + 1)
    return (a[:, None] + a[None, :]) <= cap


class TruncatedSeries2:
    """Taylor coefficients ``c[a1, a2]`` of a germ at 0 for ``a1 + a2 <= cap``."""

    def __init__(self, coeffs, cap: int | None = None):
        c = np.asarray(coeffs)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise InvalidParameter("coefficient table must be square")
        if cap is None:
            cap = c.shape[0] - 1
        if not 0 <= cap <= MAX_CAP:
            raise InvalidParameter(f"degree cap must lie in [0, {MAX_CAP}]")
        if c.shape[0] < cap + 1:
            pad = cap + 1 - c.shape[0]
            c = np.pad(c, ((0, pad), (0, pad)))
        c = c[: cap + 1, : cap + 1].copy()
        if c.dtype != object:
            c = c.astype(complex)
        c[~_triangle_mask(cap)] = 0
        self.cap = cap
        self.coeffs = c

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    @classmethod
    def zeros(cls, cap: int, exact: bool = False) -> "TruncatedSeries2":
        if exact:
            return cls(np.full((cap + 1, cap + 1), 0, dtype=object), cap)
        return cls(np.zeros((cap + 1, cap + 1), dtype=complex), cap)

    @classmethod
    def from_dict(cls, terms: dict, cap: int, exact: bool = False) -> "TruncatedSeries2":
        s = cls.zeros(cap, exact)
        for (a1, a2), v in terms.items():
            s[a1, a2] = v
        return s

    @classmethod
    def geometric(cls, cap: int, radii=(1.0, 1.0)) -> "TruncatedSeries2":
        """Coefficients ``r1**-a1 * r2**-a2`` of ``1/((1 - z1/r1)(1 - z2/r2))``."""
        a = np.arange(cap + 1)
        c = np.power(1.0 / radii[0], a)[:, None] * np.power(1.0 / radii[1], a)[None, :]
        return cls(c.astype(complex), cap)

    @classmethod
    def monomial(cls, a1: int, a2: int, cap: int | None = None, coeff=1) -> "TruncatedSeries2":
        cap = a1 + a2 if cap is None else cap
        return cls.from_dict({(a1, a2): coeff}, cap)

    def _check(self, key):
        a1, a2 = key
        if a1 < 0 or a2 < 0 or a1 + a2 > self.cap:
            raise IndexError(f"multi-index {key} outside |alpha| <= {self.cap}")
        return a1, a2

    def __getitem__(self, key):
        return self.coeffs[self._check(key)]

    def __setitem__(self, key, value):
        self.coeffs[self._check(key)] = value

    def indices(self):
        for d in range(self.cap + 1):
            for a1 in range(d + 1):
                yield a1, d - a1

    def truncate(self, cap: int) -> "TruncatedSeries2":
        return TruncatedSeries2(self.coeffs, min(cap, self.cap))

    def __call__(self, z1, z2):
        return evaluate(self, (z1, z2))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries2) or other.cap != self.cap:
            return NotImplemented
        return bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self):
        return f"TruncatedSeries2(cap={self.cap}, exact={self.exact})"


def _common(f: TruncatedSeries2, g: TruncatedSeries2) -> int:
    return min(f.cap, g.cap)


def hadamard(f: TruncatedSeries2, g: TruncatedSeries2) -> TruncatedSeries2:
    cap = _common(f, g)
    n = cap + 1
    return TruncatedSeries2(f.coeffs[:n, :n] * g.coeffs[:n, :n], cap)


def _binomial_table(cap: int, exact: bool) -> np.ndarray:
    """``B[a1, a2] = C(a1 + a2, a1)`` on the triangle."""
    n = cap + 1
    if exact:
        B = np.full((n, n), 0, dtype=object)
        for a1 in range(n):
            for a2 in range(n - a1):
                B[a1, a2] = math.comb(a1 + a2, a1)
        return B
    B = np.zeros((n, n))
    B[0, :] = 1.0
    B[:, 0] = 1.0
    for a1 in range(1, n):
        for a2 in range(1, n - a1):
            B[a1, a2] = B[a1 - 1, a2] + B[a1, a2 - 1]
    return B


def _degree_plus_one(cap: int, exact: bool) -> np.ndarray:
    a = np.arange(cap + 1)
    d = (a[:, None] + a[None, :] + 1)
    return d.astype(object) if exact else d.astype(float)


def h_xi_coeffs(xi, cap: int, exact: bool = False) -> TruncatedSeries2:
    """Taylor coefficients ``(|a|+1)!/a! * xi^a`` of ``(1 - z . xi)^-2``."""
    if cap < 0:
        raise InvalidParameter("degree cap must be non-negative")
    weights = _degree_plus_one(cap, exact) * _binomial_table(cap, exact)
    a = np.arange(cap + 1)
    if exact:
        x1, x2 = (Fraction(v) if not isinstance(v, complex) else v for v in xi)
        p1 = np.array([x1 ** k for k in a], dtype=object)
        p2 = np.array([x2 ** k for k in a], dtype=object)
    else:
        p1 = np.power(complex(xi[0]), a)
        p2 = np.power(complex(xi[1]), a)
        # numpy gives 0**0 = 1, as the power series convention requires
    c = weights * p1[:, None] * p2[None, :]
    return TruncatedSeries2(c, cap)


def weighted_hadamard(f: TruncatedSeries2, g: TruncatedSeries2) -> TruncatedSeries2:
    """``a!/(|a|+1)! * f_a * g_a``: the reciprocal of the h_(1,1) weights."""
    cap = _common(f, g)
    exact = f.exact or g.exact
    w = _degree_plus_one(cap, exact) * _binomial_table(cap, exact)
    mask = _triangle_mask(cap)
    if exact:
        inv = np.full(w.shape, 0, dtype=object)
        inv[mask] = [Fraction(1, int(v)) for v in w[mask]]
    else:
        inv = np.where(mask, 1.0 / np.where(mask, w, 1.0), 0.0)
    prod = hadamard(f, g)
    return TruncatedSeries2(prod.coeffs * inv, cap)


def lambda_op(f: TruncatedSeries2) -> TruncatedSeries2:
    """``f + z1 df/dz1``, i.e. ``c[a1, a2] *= 1 + a1``."""
    a = np.arange(f.cap + 1) + 1
    factor = a.astype(object) if f.exact else a.astype(float)
    return TruncatedSeries2(f.coeffs * factor[:, None], f.cap)


def evaluate(f: TruncatedSeries2, z):
    """Horner evaluation of the truncated sum at ``z = (z1, z2)`` (arrays allowed)."""
    z1, z2 = z
    if f.exact:
        n = f.cap + 1
        acc = 0
        for a1 in range(n - 1, -1, -1):
            row = 0
            for a2 in range(n - 1 - a1, -1, -1):
                row = row * z2 + f.coeffs[a1, a2]
            acc = acc * z1 + row
        return acc
    return P.polyval2d(np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex), f.coeffs)


Evaluator = Union[TruncatedSeries2, Callable]


def _as_callable(f: Evaluator) -> Callable:
    if isinstance(f, TruncatedSeries2):
        return lambda z1, z2: evaluate(f, (z1, z2))
    return f


class QuadratureResult(NamedTuple):
    value: complex
    error: float
    nodes: int


def _converged(new, old, rtol, atol):
    return abs(new - old) <= rtol * abs(new) + atol


def torus_hadamard(
    f: Evaluator,
    g: Evaluator,
    rho: float,
    z,
    nodes: int = 16,
    rtol: float = CONTOUR_RTOL,
    atol: float = 1e-15,
) -> QuadratureResult:
    """``(f*g)(z)`` by the tensor trapezoidal rule on the torus ``|zeta_k| = 1/rho``.

    Requires f analytic on a closed polydisc of radius r, g on one of radius
    ``rho`` and ``|z_k| < r * rho``.  Per-axis nodes double from ``nodes``
    until two successive values agree.
    """
    if nodes < 8:
        raise InvalidParameter("need at least 8 nodes per axis")
    if not rho > 0:
        raise InvalidParameter("rho must be positive")
    fc, gc = _as_callable(f), _as_callable(g)
    z1, z2 = complex(z[0]), complex(z[1])

    def rule(n):
        e = np.exp(2j * np.pi * np.arange(n) / n)
        E1, E2 = np.meshgrid(e, e, indexing="ij")
        vals = fc(z1 * E1 / rho, z2 * E2 / rho) * gc(rho * np.conj(E1), rho * np.conj(E2))
        return complex(np.mean(vals))

    n = nodes
    prev = rule(n)
    while 2 * n <= MAX_TORUS_NODES:
        n *= 2
        cur = rule(n)
        err = abs(cur - prev)
        if _converged(cur, prev, rtol, atol):
            return QuadratureResult(cur, err, n)
        prev = cur
    raise QuadratureFailure(f"torus rule did not converge within {MAX_TORUS_NODES} nodes per axis")


@dataclass(frozen=True)
class Circle:
    center: complex = 0j
    radius: float = 1.0
    nodes: int = 32

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidParameter("radius must be positive")
        if abs(self.center) >= self.radius:
            raise InvalidArgument("circle must wind once around 0 (|center| < radius)")


@dataclass(frozen=True)
class Polyline:
    """Closed polygon in the punctured plane; the last vertex joins the first."""

    vertices: tuple
    nodes: int = 4  # Gauss-Legendre nodes per segment

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex).ravel()
        if v.size >= 2 and v[0] == v[-1]:
            v = v[:-1]
        if v.size < 3:
            raise InvalidParameter("polyline needs at least three vertices")
        object.__setattr__(self, "vertices", tuple(v))
        a, b = v, np.roll(v, -1)
        d = b - a
        t = np.clip(-(np.conj(d) * a).real / np.maximum(np.abs(d) ** 2, 1e-300), 0.0, 1.0)
        if np.min(np.abs(a + t * d)) == 0.0:
            raise InvalidArgument("contour passes through 0")
        if winding_number(v) != 1:
            raise InvalidArgument("polyline must wind exactly once around 0")


ContourSpec = Union[Circle, Polyline]


def winding_number(vertices: Sequence[complex], p: complex = 0j) -> int:
    v = np.asarray(vertices, dtype=complex) - p
    turns = np.angle(np.roll(v, -1) / v).sum() / (2 * np.pi)
    return int(np.rint(turns))


def contour_h_star(
    f: Evaluator,
    z,
    gamma: ContourSpec = Circle(),
    lam: Evaluator | None = None,
    rtol: float = CONTOUR_RTOL,
    atol: float = 1e-15,
) -> QuadratureResult:
    """Continuation of ``h_(1,1) * f`` at z as a single contour integral.

    Computes ``(2 pi i)^-1 \\oint (1 + 1/zeta) Lambda(f)(I_z(zeta)) d zeta``.
    For polynomial f any loop winding once around 0 works; for f holomorphic
    on a domain G the loop must lie in the preimage of G under I_z.  ``lam``
    is the evaluator of ``Lambda(f)``; it is derived when f is a series.
    """
    if lam is None:
        if not isinstance(f, TruncatedSeries2):
            raise InvalidArgument("lam (the Lambda image of f) is required for callable f")
        lam = lambda_op(f)
    lc = _as_callable(lam)
    z1, z2 = complex(z[0]), complex(z[1])

    def integrand(zeta):
        return (1 + 1 / zeta) * lc(z1 * (1 + zeta), z2 * (1 + 1 / zeta))

    if isinstance(gamma, Circle):
        def rule(n):
            e = np.exp(2j * np.pi * np.arange(n) / n)
            zeta = gamma.center + gamma.radius * e
            return complex(np.mean(integrand(zeta) * (zeta - gamma.center)))
        n, limit = max(gamma.nodes, 4), MAX_CONTOUR_NODES
    else:
        v = np.asarray(gamma.vertices)
        a, d = v, np.roll(v, -1) - v

        def rule(n):
            x, w = np.polynomial.legendre.leggauss(n)
            t = 0.5 * (x + 1.0)
            zeta = a[:, None] + t[None, :] * d[:, None]
            vals = integrand(zeta) * (0.5 * w)[None, :] * d[:, None]
            return complex(np.sum(vals) / (2j * np.pi))
        n, limit = max(gamma.nodes, 2), max(2, MAX_CONTOUR_NODES // len(v))

    prev = rule(n)
    while 2 * n <= limit:
        n *= 2
        cur = rule(n)
        if _converged(cur, prev, rtol, atol):
            return QuadratureResult(cur, abs(cur - prev), n)
        prev = cur
    raise QuadratureFailure("contour rule did not converge")


def series_lambda_pair(f: TruncatedSeries2):
    """Evaluators ``(f, Lambda f)`` for a truncated series."""
    return _as_callable(f), _as_callable(lambda_op(f))


def cauchy_hadamard_shadow(f: TruncatedSeries2, directions: int = 129, band: float = 0.5) -> Shadow:
    """Estimate the Reinhardt convergence shadow from the top degree bands.

    Along each direction ``(u, v)`` of the quarter circle the degree-wise
    maxima ``M_d = max_{|a|=d} |c_a| u^a1 v^a2`` are fitted by
    ``log M_d = d*l + p*log d + q`` over ``d >= band*cap``; the boundary lies
    at ``t* = exp(-l)``.  An all-zero top band yields the whole quadrant.
    """
    cap = f.cap
    if cap < 20:
        raise InvalidParameter("cap must be at least 20 for the growth fit")
    if directions < 2:
        raise InvalidParameter("need at least the two axis directions")
    mag = np.abs(np.asarray(f.coeffs, dtype=complex))
    d0 = int(band * cap)
    a = np.arange(cap + 1)
    A1, A2 = np.meshgrid(a, a, indexing="ij")
    tail = (A1 + A2 >= d0) & _triangle_mask(cap)
    if not np.any(mag[tail] > 0):
        return Shadow.whole_quadrant()
    with np.errstate(divide="ignore"):
        logc = np.where(mag > 0, np.log(mag), -np.inf)
    phis = np.linspace(0.0, np.pi / 2, directions)
    u, v = np.cos(phis), np.sin(phis)
    u[-1], v[0] = 0.0, 0.0
    degs = np.arange(d0, cap + 1)
    # rows of logc indexed by a1 along each anti-diagonal d
    diag_a1 = [np.arange(d + 1) for d in degs]
    tstar = np.empty(directions)
    with np.errstate(divide="ignore", invalid="ignore"):
        lu = np.where(u > 0, np.log(u), -np.inf)
        lv = np.where(v > 0, np.log(v), -np.inf)
        for k in range(directions):
            logM = np.empty(degs.size)
            for i, (d, a1) in enumerate(zip(degs, diag_a1)):
                a2 = d - a1
                terms = logc[a1, a2] + np.where(a1 > 0, a1 * lu[k], 0.0) + np.where(a2 > 0, a2 * lv[k], 0.0)
                logM[i] = np.max(terms)
            ok = np.isfinite(logM)
            if ok.sum() < 3:
                tstar[k] = np.inf
                continue
            dd = degs[ok].astype(float)
            X = np.column_stack([dd, np.log(dd), np.ones_like(dd)])
            coef, *_ = np.linalg.lstsq(X, logM[ok], rcond=None)
            tstar[k] = math.exp(-coef[0]) if coef[0] > -700 else np.inf
    xmax, ymax = tstar[0], tstar[-1]
    fin = np.isfinite(tstar)
    if not np.any(fin):
        return Shadow.whole_quadrant()
    pts = np.column_stack([tstar[fin] * u[fin], tstar[fin] * v[fin]])
    pts = pts[np.argsort(pts[:, 0], kind="stable")]
    xs, betas = [], []
    for x, y in pts:
        if xs and x <= xs[-1] * (1 + 1e-12) + 1e-300:
            betas[-1] = max(betas[-1], y)
            continue
        xs.append(x)
        betas.append(y)
    xs = np.array(xs)
    betas = np.minimum.accumulate(np.array(betas))
    if math.isfinite(xmax):
        keep = xs <= xmax
        xs, betas = xs[keep], betas[keep]
    if math.isfinite(ymax):
        xs[0] = 0.0
        betas[0] = max(betas[0], 0.0)
    return Shadow(xs, betas, xmax, ymax)
