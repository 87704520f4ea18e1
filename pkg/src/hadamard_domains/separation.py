"""Does ``I_z^{-1}(D)`` separate 0 and infinity?

``I_z(zeta) = (z1 (1 + zeta), z2 (1 + 1/zeta))``.  The annulus
``e^{s_min} <= |zeta| <= e^{s_max}`` is cut into log-polar cells, each cell
classified IN / OUT / MIXED from its centre and four corners.  A loop of IN
cells winding once around 0 certifies separation; a chain of OUT cells from
the inner to the outer ring certifies the opposite, provided both extreme
rings are known to map outside D (see :func:`auto_range`).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .domains import Domain2
from .errors import InternalError, InvalidArgument, InvalidParameter, RangeRequired
from .series import winding_number

ZERO_AXIS_SPAN = 6.0
CHUNK = 1 << 20


def _env_max_refine() -> int:
    return int(os.environ.get("HD_MAX_REFINE", 4))


@dataclass(frozen=True)
class LogPolarGrid:
    """Cells of ``zeta = exp(s + i theta)``; ``None`` bounds are chosen by :func:`auto_range`."""

    s_min: Optional[float] = None
    s_max: Optional[float] = None
    ns: int = 256
    ntheta: int = 256
    max_refinements: int = field(default_factory=_env_max_refine)

    def __post_init__(self):
        if self.ns < 16 or self.ntheta < 16:
            raise InvalidParameter("grids need at least 16 cells per direction")
        if self.max_refinements < 0:
            raise InvalidParameter("max_refinements must be non-negative")
        if (self.s_min is None) != (self.s_max is None):
            raise InvalidParameter("give both s_min and s_max or neither")
        if self.s_min is not None and not (self.s_min < 0 < self.s_max):
            raise InvalidParameter("the log-radius range must satisfy s_min < 0 < s_max")

    def refined(self) -> "LogPolarGrid":
        return replace(self, ns=2 * self.ns, ntheta=2 * self.ntheta)

    def with_range(self, s_min: float, s_max: float) -> "LogPolarGrid":
        return replace(self, s_min=s_min, s_max=s_max)

    def cell_centers(self, i, j):
        ds = (self.s_max - self.s_min) / self.ns
        dt = 2 * np.pi / self.ntheta
        return np.exp(self.s_min + (np.asarray(i) + 0.5) * ds + 1j * (np.asarray(j) + 0.5) * dt)


@dataclass(frozen=True)
class Separated:
    """``loop``: closed polygon (last vertex joins the first) inside the preimage."""

    loop: Optional[np.ndarray]
    grid: LogPolarGrid
    kind = "Separated"
    decided = True


@dataclass(frozen=True)
class NotSeparated:
    """``path``: polyline outside the preimage from ``|zeta| = e^{s_min}`` to ``e^{s_max}``."""

    path: Optional[np.ndarray]
    grid: LogPolarGrid
    kind = "NotSeparated"
    decided = True


@dataclass(frozen=True)
class Undetermined:
    resolution_reached: dict
    kind = "Undetermined"
    decided = False


SeparationVerdict = Separated | NotSeparated | Undetermined


def i_map(z, zeta):
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(zeta == 0):
        raise InvalidArgument("I_z is defined on the punctured plane")
    z1, z2 = complex(z[0]), complex(z[1])
    return z1 * (1 + zeta), z2 * (1 + 1 / zeta)


def auto_range(D: Domain2, z) -> tuple[float, float]:
    """Log-radius range whose extreme rings map outside D.

    For ``|zeta| >= e^{s_max}``, ``|z1 (1 + zeta)| >= |z1| (e^{s_max} - 1)``
    exceeds twice the first-coordinate bound, and symmetrically
    ``|z2 (1 + 1/zeta)|`` for ``|zeta| <= e^{s_min}``.  A vanishing coordinate
    gives no such bound; that side then mirrors the other one, but spans at
    least ``ZERO_AXIS_SPAN`` so that the far ring sits close to the constant
    value ``I_z(infinity)`` (resp. ``I_z(0)``) and verdicts are relative to it.
    """
    x, y = abs(complex(z[0])), abs(complex(z[1]))
    ex1, ex2 = D.extents
    if x == 0 and y == 0:
        return (-1.0, 1.0)
    if (x > 0 and not math.isfinite(ex1)) or (y > 0 and not math.isfinite(ex2)):
        raise RangeRequired("unbounded domain: supply s_min and s_max")
    margin = 1.0 + 1e-9
    s_max = math.log1p(2 * ex1 / x) * margin if x > 0 else None
    s_min = -math.log1p(2 * ex2 / y) * margin if y > 0 else None
    if s_max is None:
        s_max = max(-s_min, ZERO_AXIS_SPAN)
    if s_min is None:
        s_min = -max(s_max, ZERO_AXIS_SPAN)
    return (s_min, s_max)


def _classify(D: Domain2, z, grid: LogPolarGrid):
    """Boolean IN and OUT masks of shape (ns, ntheta)."""
    ns, nt = grid.ns, grid.ntheta
    ds = (grid.s_max - grid.s_min) / ns
    et_node = np.exp(2j * np.pi * np.arange(nt) / nt)
    et_mid = np.exp(2j * np.pi * (np.arange(nt) + 0.5) / nt)
    z1, z2 = complex(z[0]), complex(z[1])

    def member(radii, phases):
        out = np.empty((radii.size, phases.size), dtype=bool)
        step = max(1, CHUNK // phases.size)
        for k in range(0, radii.size, step):
            zeta = radii[k:k + step, None] * phases[None, :]
            out[k:k + step] = D.contains(z1 * (1 + zeta), z2 * (1 + 1 / zeta))
        return out

    nodes = member(np.exp(grid.s_min + ds * np.arange(ns + 1)), et_node)
    centers = member(np.exp(grid.s_min + ds * (np.arange(ns) + 0.5)), et_mid)
    nb = np.roll(nodes, -1, axis=1)
    corners_in = nodes[:-1] & nodes[1:] & nb[:-1] & nb[1:]
    corners_out = ~(nodes[:-1] | nodes[1:] | nb[:-1] | nb[1:])
    return centers & corners_in, ~centers & corners_out


def _grid_graph(cells: np.ndarray, shape, wrap: bool):
    """Sparse 4-neighbour adjacency among the flat indices ``cells``."""
    ns, nt = shape
    index = np.full(ns * nt, -1, dtype=np.int64)
    index[cells] = np.arange(cells.size)
    i, j = np.divmod(cells, nt)
    rows, cols = [], []
    down = cells[i + 1 < ns] + nt
    ok = index[down] >= 0
    rows.append(index[cells[i + 1 < ns]][ok])
    cols.append(index[down][ok])
    if wrap:
        right = i * nt + (j + 1) % nt
        src = cells
    else:
        src = cells[j + 1 < nt]
        right = src + 1
    ok = index[right] >= 0
    rows.append(index[src][ok])
    cols.append(index[right][ok])
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    n = cells.size
    return coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n)).tocsr(), index


def _winding_hit(in_mask):
    """Cell whose copy one period further lies in the same IN component."""
    nt = in_mask.shape[1]
    labels, _ = ndimage.label(np.concatenate([in_mask, in_mask], axis=1))
    hits = (labels[:, :nt] == labels[:, nt:]) & (labels[:, :nt] > 0)
    if not hits.any():
        return None
    i, j = np.argwhere(hits)[0]
    return labels, (int(i), int(j))


def _crossing_component(out_mask):
    """Flat cell indices of an OUT component (with angular wrap) touching both rings."""
    ns, nt = out_mask.shape
    labels, n = ndimage.label(out_mask)
    if n == 0:
        return None
    a, b = labels[:, -1], labels[:, 0]
    seam = (a > 0) & (b > 0)
    g = coo_matrix((np.ones(int(seam.sum())), (a[seam], b[seam])), shape=(n + 1, n + 1))
    _, root = connected_components(g, directed=False)
    inner = set(root[labels[0][labels[0] > 0]])
    outer = set(root[labels[-1][labels[-1] > 0]])
    common = inner & outer
    if not common:
        return None
    r = min(common)
    return np.flatnonzero((labels > 0) & (root[labels] == r))


def _bfs_path(graph, src, dst):
    _, pred = breadth_first_order(graph, src, directed=False, return_predecessors=True)
    if dst != src and pred[dst] < 0:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(pred[path[-1]])
    return path[::-1]


def _loop_from(labels, start, grid: LogPolarGrid):
    ns, nt = grid.ns, grid.ntheta
    i0, j0 = start
    cells = np.flatnonzero(labels.ravel() == labels[i0, j0])
    graph, index = _grid_graph(cells, (ns, 2 * nt), wrap=False)
    path = _bfs_path(graph, index[i0 * 2 * nt + j0], index[i0 * 2 * nt + j0 + nt])
    flat = cells[np.asarray(path[:-1])]
    i, j = np.divmod(flat, 2 * nt)
    return grid.cell_centers(i, j % nt)


def _path_from(cells, grid: LogPolarGrid):
    ns, nt = grid.ns, grid.ntheta
    graph, index = _grid_graph(cells, (ns, nt), wrap=True)
    n = cells.size
    # virtual source joined to every inner-ring cell
    inner = np.flatnonzero(cells < nt)
    g = graph.tocoo()
    rows = np.concatenate([g.row, np.full(inner.size, n)])
    cols = np.concatenate([g.col, inner])
    big = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n + 1, n + 1)).tocsr()
    order, pred = breadth_first_order(big, n, directed=False, return_predecessors=True)
    outer = [k for k in order if k < n and cells[k] >= (ns - 1) * nt]
    path = [outer[0]]
    while pred[path[-1]] != n:
        path.append(pred[path[-1]])
    flat = cells[np.asarray(path[::-1])]
    i, j = np.divmod(flat, nt)
    centers = grid.cell_centers(i, j)
    first = np.exp(grid.s_min) * centers[0] / abs(centers[0])
    last = np.exp(grid.s_max) * centers[-1] / abs(centers[-1])
    return np.concatenate([[first], centers, [last]])


def _segment_samples(vertices, closed: bool, density: int):
    v = np.asarray(vertices, dtype=complex)
    a = v
    b = np.roll(v, -1) if closed else v[1:]
    if not closed:
        a = v[:-1]
    t = np.arange(density) / density
    pts = a[:, None] + t[None, :] * (b - a)[:, None]
    pts = pts.ravel()
    return pts if closed else np.append(pts, v[-1])


def verify_certificate(D: Domain2, z, verdict, density: int = 8) -> bool:
    """Re-evaluate a certificate with ``density`` samples per segment."""
    if isinstance(verdict, Separated):
        loop = verdict.loop
        if loop is None or winding_number(loop) != 1:
            return False
        pts = _segment_samples(loop, True, density)
        if np.any(pts == 0):
            return False
        return bool(np.all(D.contains(*i_map(z, pts))))
    if isinstance(verdict, NotSeparated):
        path = verdict.path
        if path is None:
            return False
        g = verdict.grid
        rtol = 1e-9
        if not (math.isclose(abs(path[0]), math.exp(g.s_min), rel_tol=rtol)
                and math.isclose(abs(path[-1]), math.exp(g.s_max), rel_tol=rtol)):
            return False
        pts = _segment_samples(path, False, density)
        if np.any(pts == 0):
            return False
        return not bool(np.any(D.contains(*i_map(z, pts))))
    return False


def _trivial_loop(n: int = 64) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def separates(D: Domain2, z, grid: LogPolarGrid | None = None, certify: bool = True) -> SeparationVerdict:
    """Decide separation of 0 and infinity by ``I_z^{-1}(D)`` on refining log-polar grids.

    With ``certify=False`` the verdict is decided by the same cell graphs but
    no certificate polyline is built (used by grid sweeps).
    """
    grid = grid or LogPolarGrid()
    z = (complex(z[0]), complex(z[1]))
    if z == (0j, 0j):
        g = grid if grid.s_min is not None else grid.with_range(-1.0, 1.0)
        return Separated(_trivial_loop() if certify else None, g)
    if grid.s_min is None:
        grid = grid.with_range(*auto_range(D, z))
    level = grid
    for _ in range(grid.max_refinements + 1):
        in_mask, out_mask = _classify(D, z, level)
        hit = _winding_hit(in_mask)
        crossing = _crossing_component(out_mask)
        if hit is not None and crossing is not None:
            raise InternalError("IN loop and OUT crossing found on the same grid")
        if hit is not None:
            if not certify:
                return Separated(None, level)
            verdict = Separated(_loop_from(*hit, level), level)
            if verify_certificate(D, z, verdict):
                return verdict
        elif crossing is not None:
            if not certify:
                return NotSeparated(None, level)
            verdict = NotSeparated(_path_from(crossing, level), level)
            if verify_certificate(D, z, verdict):
                return verdict
        last = (level, int(in_mask.sum()), int(out_mask.sum()))
        level = level.refined()
    g, n_in, n_out = last
    return Undetermined({
        "ns": g.ns, "ntheta": g.ntheta, "s_min": g.s_min, "s_max": g.s_max,
        "in_cells": n_in, "out_cells": n_out, "mixed_cells": g.ns * g.ntheta - n_in - n_out,
    })
