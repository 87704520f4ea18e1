"""Shadows of h_(1,1)*G and D*G for Reinhardt D and G.

Both sets are downward closed in moduli, so a grid cell is certified IN when
its upper-right node is in the set and certified OUT when its lower-left node
is not.  Node verdicts for h_(1,1)*G come from :func:`separates`; those for
D*G from looking up ``(x a, y b)``, ``(a, b)`` on the boundary of D*, in the
h_(1,1)*G mask.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .domains import ReinhardtDomain, Shadow
from .dual import DEFAULT_BOUNDARY_SAMPLES, dual_boundary
from .errors import InvalidArgument, OriginExcluded, RangeRequired, UnsupportedDomain
from .separation import LogPolarGrid, NotSeparated, Separated, separates

DEFAULT_GRID = 256


class CellState(enum.IntEnum):
    OUT = 0
    IN = 1
    MIXED = 2


@dataclass(frozen=True, eq=False)
class GridMask:
    """Cell states over ``[0, x_extent] x [0, y_extent]``; ``states[i, j]`` is column i, row j."""

    x_extent: float
    y_extent: float
    states: np.ndarray

    @property
    def shape(self):
        return self.states.shape

    @property
    def dx(self) -> float:
        return self.x_extent / self.states.shape[0]

    @property
    def dy(self) -> float:
        return self.y_extent / self.states.shape[1]

    def centers(self):
        nx, ny = self.shape
        return (np.arange(nx) + 0.5) * self.dx, (np.arange(ny) + 0.5) * self.dy

    def lookup(self, x, y) -> np.ndarray:
        """State of the cell containing each point; points past the window are OUT."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        nx, ny = self.shape
        i = np.floor(x / self.dx).astype(np.int64)
        j = np.floor(y / self.dy).astype(np.int64)
        inside = (i < nx) & (j < ny)
        out = np.full(np.broadcast(i, j).shape, CellState.OUT, dtype=np.int8)
        ii, jj = np.broadcast_arrays(i, j)
        out[inside] = self.states[np.minimum(ii, nx - 1)[inside], np.minimum(jj, ny - 1)[inside]]
        return out

    def count(self, state: CellState) -> int:
        return int(np.count_nonzero(self.states == state))


@dataclass(frozen=True, eq=False)
class StarResult:
    shadow: Shadow
    mask: GridMask
    kind: str
    diagnostics: dict = field(default_factory=dict)


def cc0(mask: GridMask) -> GridMask:
    """Keep the component of the origin cell.

    IN cells 4-connected to the origin through IN cells stay IN.  Cells that
    can only reach it through MIXED cells become MIXED, and cells separated
    from it by OUT cells become OUT.
    """
    s = mask.states
    if s[0, 0] != CellState.IN:
        raise OriginExcluded("origin cell is not IN")
    lab_in, _ = ndimage.label(s == CellState.IN)
    lab_any, _ = ndimage.label(s != CellState.OUT)
    core = lab_in == lab_in[0, 0]
    reach = lab_any == lab_any[0, 0]
    out = np.full(s.shape, CellState.OUT, dtype=np.int8)
    out[reach] = CellState.MIXED
    out[core] = CellState.IN
    return GridMask(mask.x_extent, mask.y_extent, out)


def _enforce_downward(mask: GridMask, what: str) -> tuple[GridMask, int]:
    """Demote IN cells outside the largest downward-closed IN staircase to MIXED."""
    s = mask.states.copy()
    isin = s == CellState.IN
    # contiguous IN height from the bottom of each column, then monotone in x
    heights = np.where(isin.all(axis=1), s.shape[1], np.argmin(isin, axis=1))
    heights = np.minimum.accumulate(heights)
    rows = np.arange(s.shape[1])[None, :]
    stray = isin & (rows >= heights[:, None])
    n = int(stray.sum())
    if n:
        # distance of each stray cell above its column's staircase
        excess = np.max(np.where(stray, rows - heights[:, None] + 1, 0))
        if excess > 1:
            warnings.warn(f"{what}: {n} IN cells violate downward closure (up to {excess} cells)")
        s[stray] = CellState.MIXED
    return GridMask(mask.x_extent, mask.y_extent, s), n


def mask_to_shadow(mask: GridMask) -> Shadow:
    """Piecewise-linear profile under the IN staircase (an inner approximation)."""
    s = mask.states
    isin = s == CellState.IN
    heights = np.where(isin.all(axis=1), s.shape[1], np.argmin(isin, axis=1))
    heights = np.minimum.accumulate(heights)
    k = int(np.count_nonzero(heights))
    if k == 0:
        raise OriginExcluded("mask has no IN cells at the origin")
    xs = np.arange(k + 1) * mask.dx
    betas = np.append(heights[:k], heights[k - 1]) * mask.dy
    return Shadow(xs, betas, k * mask.dx, heights[0] * mask.dy)


def _cells_from_nodes(node_in: np.ndarray, node_out: np.ndarray) -> np.ndarray:
    states = np.full((node_in.shape[0] - 1, node_in.shape[1] - 1), CellState.MIXED, dtype=np.int8)
    states[node_in[1:, 1:]] = CellState.IN
    states[node_out[:-1, :-1]] = CellState.OUT
    return states


def _finish(states, window, kind, diagnostics) -> StarResult:
    mask = GridMask(window[0], window[1], states)
    mask, demoted = _enforce_downward(cc0(mask), kind)
    diagnostics["demoted_cells"] = demoted
    return StarResult(mask_to_shadow(mask), mask, kind, diagnostics)


def _grid_size(nx, ny):
    ny = nx if ny is None else ny
    if nx < 1 or ny < 1:
        raise InvalidArgument("grid sizes must be positive")
    return nx, ny


HSTAR_SEPARATION_GRID = LogPolarGrid(ns=128, ntheta=128, max_refinements=1)


def h_star_shadow(
    G: ReinhardtDomain,
    nx: int = DEFAULT_GRID,
    ny: int | None = None,
    window: tuple[float, float] | None = None,
    sep_grid: LogPolarGrid = HSTAR_SEPARATION_GRID,
    exhaustive: bool = False,
) -> StarResult:
    """Shadow of ``h_(1,1) * G`` from the separation test at the grid nodes.

    The default window is the bounding box of G's shadow, which contains the
    answer because axis points of ``h_(1,1) * G`` lie in G.  Node verdicts
    are found by two staircase walks that rely on downward closure; with
    ``exhaustive=True`` every node is tested instead.
    """
    if not isinstance(G, ReinhardtDomain):
        raise UnsupportedDomain("global h*G shadows need a Reinhardt G")
    nx, ny = _grid_size(nx, ny)
    if window is None:
        if not G.bounded and sep_grid.s_min is None:
            raise RangeRequired("unbounded G needs a window and a certified separation range")
        window = G.extents
    X, Y = (float(v) for v in window)
    cache: dict[tuple[int, int], str] = {}

    def verdict(i, j):
        key = (i, j)
        if key not in cache:
            cache[key] = separates(G, (i * X / nx, j * Y / ny), sep_grid, certify=False).kind
        return cache[key]

    S, N = Separated.kind, NotSeparated.kind
    node_in = np.zeros((nx + 1, ny + 1), dtype=bool)
    node_out = np.zeros((nx + 1, ny + 1), dtype=bool)
    if exhaustive:
        for i in range(nx + 1):
            for j in range(ny + 1):
                v = verdict(i, j)
                node_in[i, j] = v == S
                node_out[i, j] = v == N
        violations = 0
    else:
        top = np.empty(nx + 1, dtype=np.int64)
        j = ny
        for i in range(nx + 1):
            while j >= 0 and verdict(i, j) != S:
                j -= 1
            top[i] = j
        bottom = np.empty(nx + 1, dtype=np.int64)
        j = 0
        for i in range(nx, -1, -1):
            while j <= ny and verdict(i, j) != N:
                j += 1
            bottom[i] = j
        rows = np.arange(ny + 1)[None, :]
        node_in = rows <= top[:, None]
        node_out = rows >= bottom[:, None]
        clash = node_in & node_out
        violations = int(clash.sum())
        if violations:
            warnings.warn(f"h*G sweep: {violations} nodes contradict monotonicity")
            node_in &= ~clash
            node_out &= ~clash
    diagnostics = {
        "evaluated_nodes": len(cache),
        "undetermined_nodes": sum(v == "Undetermined" for v in cache.values()),
        "monotonicity_violations": violations,
        "separation_grid": sep_grid,
    }
    return _finish(_cells_from_nodes(node_in, node_out), (X, Y), "hstar", diagnostics)


def _dual_corners(boundary: np.ndarray) -> np.ndarray:
    """Upper-right corners dominating the boundary curve between consecutive samples."""
    a, b = boundary[:, 0], boundary[:, 1]
    return np.column_stack([np.maximum(a[:-1], a[1:]), np.maximum(b[:-1], b[1:])])


def _star_states(boundary: np.ndarray, hstar: StarResult, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    all_in = np.ones(shape, dtype=bool)
    any_out = np.zeros(shape, dtype=bool)
    mask = hstar.mask
    for a, b in _dual_corners(boundary):
        all_in &= mask.lookup(x * a, y * b) == CellState.IN
    for a, b in boundary:
        any_out |= mask.lookup(x * a, y * b) == CellState.OUT
    out = np.full(shape, CellState.MIXED, dtype=np.int8)
    out[all_in] = CellState.IN
    out[any_out & ~all_in] = CellState.OUT
    return out


def _check_hstar(hstar):
    if not isinstance(hstar, StarResult) or hstar.kind != "hstar":
        raise InvalidArgument("expected the StarResult of h_star_shadow")


def star_membership(
    D: ReinhardtDomain, hstar: StarResult, z_moduli, n: int = DEFAULT_BOUNDARY_SAMPLES
) -> CellState:
    """Is ``z D*`` inside ``h_(1,1) * G``?  IN, OUT or MIXED at the mask's resolution."""
    _check_hstar(hstar)
    x, y = z_moduli
    if x < 0 or y < 0:
        raise InvalidArgument("z_moduli must be non-negative")
    return CellState(int(_star_states(dual_boundary(D, n), hstar, x, y)))


def star_shadow(
    D: ReinhardtDomain,
    G: ReinhardtDomain | None = None,
    nx: int = DEFAULT_GRID,
    ny: int | None = None,
    window: tuple[float, float] | None = None,
    hstar: StarResult | None = None,
    n_boundary: int = DEFAULT_BOUNDARY_SAMPLES,
) -> StarResult:
    """Shadow of ``D * G = CC0{z : z D* inside h_(1,1) * G}``.

    Pass a precomputed ``hstar`` to reuse one h*G sweep for several D.
    """
    if hstar is None:
        if G is None:
            raise InvalidArgument("need G or a precomputed hstar")
        hstar = h_star_shadow(G, nx, ny)
    _check_hstar(hstar)
    nx, ny = _grid_size(nx, ny)
    boundary = dual_boundary(D, n_boundary)
    if window is None:
        # z = (x, 0) is in D*G iff x * max_a < X_h, and max_a = 1 / xmax_D
        window = (D.extents[0] * hstar.mask.x_extent, D.extents[1] * hstar.mask.y_extent)
    X, Y = (float(v) for v in window)
    xs = np.arange(nx + 1) * (X / nx)
    ys = np.arange(ny + 1) * (Y / ny)
    nodes = _star_states(boundary, hstar, xs[:, None], ys[None, :])
    states = _cells_from_nodes(nodes == CellState.IN, nodes == CellState.OUT)
    return _finish(states, (X, Y), "star", {"boundary_samples": n_boundary})
