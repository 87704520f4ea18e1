"""Domain JSON, coefficient/point/mask CSV and SVG plots.

CSV files always carry a header row, use '\\n' line endings and write
floats with ``repr`` so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path

import numpy as np

from .domains import ReinhardtDomain, make_ball, make_ellipsoid, make_polydisc, make_profile
from .errors import InvalidArgument
from .series import TruncatedSeries2
from .star import CellState, GridMask

_STATE_NAMES = {CellState.IN: "IN", CellState.OUT: "OUT", CellState.MIXED: "MIXED"}


def _number(v, what):
    if isinstance(v, str) and v.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if v is None:
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidArgument(f"{what}: expected a number, got {v!r}")
    return float(v)


def _pair(v, what):
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise InvalidArgument(f"{what}: expected a pair of numbers")
    return _number(v[0], what), _number(v[1], what)


def domain_from_dict(spec: dict) -> ReinhardtDomain:
    """Build a domain from its JSON description.

    ``null`` or ``"inf"`` stand for an infinite bound in profile files.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise InvalidArgument("domain description needs a 'type' field")
    kind = spec["type"]
    try:
        if kind == "polydisc":
            return make_polydisc(*_pair(spec["r"], "r"))
        if kind == "ball":
            return make_ball(_number(spec["r"], "r"))
        if kind == "ellipsoid":
            return make_ellipsoid(*_pair(spec["p"], "p"))
        if kind == "profile":
            pts = [_pair(p, "points") for p in spec["points"]]
            return make_profile(pts, _number(spec.get("xmax"), "xmax"), _number(spec.get("ymax"), "ymax"))
    except KeyError as exc:
        raise InvalidArgument(f"domain of type {kind!r} is missing field {exc}") from None
    raise InvalidArgument(f"unknown domain type {kind!r}")


def load_domain(path) -> ReinhardtDomain:
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path}: invalid JSON ({exc})") from None
    return domain_from_dict(spec)


_BARE_I = re.compile(r"(?<![0-9.])[ij]")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` forms such as ``0.6``, ``-i``, ``1e-3+2.5i`` or ``3j``."""
    s = "".join(text.split())
    if not s:
        raise InvalidArgument("empty complex number")
    s = _BARE_I.sub("1j", s).replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise InvalidArgument(f"cannot parse complex number {text!r}") from None


def parse_complex_tuple(text: str, n: int = 2) -> tuple:
    parts = text.split(",")
    if len(parts) != n:
        raise InvalidArgument(f"expected {n} comma-separated complex numbers, got {text!r}")
    return tuple(parse_complex(p) for p in parts)


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="")


def write_points_csv(path, points, header=("a", "b")) -> None:
    pts = np.asarray(points)
    with _open_out(path) as fh:
        w = _writer(fh)
        w.writerow(header)
        for row in pts:
            w.writerow([repr(float(v)) for v in row])


def write_polyline_csv(path, vertices) -> None:
    v = np.asarray(vertices, dtype=complex)
    write_points_csv(path, np.column_stack([v.real, v.imag]), header=("re", "im"))


def write_series_csv(path, f: TruncatedSeries2) -> None:
    """Coefficients in the triangle ``a1 + a2 <= cap``, zeros included."""
    with _open_out(path) as fh:
        w = _writer(fh)
        w.writerow(("a1", "a2", "re", "im"))
        for a1, a2 in f.indices():
            c = complex(f[a1, a2])
            w.writerow((a1, a2, repr(c.real), repr(c.imag)))


def read_series_csv(path, cap: int | None = None) -> TruncatedSeries2:
    terms = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"a1", "a2", "re", "im"} <= set(reader.fieldnames):
            raise InvalidArgument(f"{path}: expected columns a1,a2,re,im")
        for line, row in enumerate(reader, start=2):
            try:
                a = (int(row["a1"]), int(row["a2"]))
                c = complex(float(row["re"]), float(row["im"]))
            except (TypeError, ValueError):
                raise InvalidArgument(f"{path}:{line}: malformed row") from None
            if a[0] < 0 or a[1] < 0:
                raise InvalidArgument(f"{path}:{line}: negative multi-index")
            terms[a] = terms.get(a, 0) + c
    top = max((a1 + a2 for a1, a2 in terms), default=0)
    if cap is None:
        cap = top
    elif top > cap:
        terms = {a: c for a, c in terms.items() if sum(a) <= cap}
    return TruncatedSeries2.from_dict(terms, cap)


def write_mask_csv(path, mask: GridMask) -> None:
    xs, ys = mask.centers()
    with _open_out(path) as fh:
        w = _writer(fh)
        w.writerow(("x", "y", "state"))
        for i, x in enumerate(xs):
            rx = repr(float(x))
            for j, y in enumerate(ys):
                w.writerow((rx, repr(float(y)), _STATE_NAMES[CellState(int(mask.states[i, j]))]))


def read_mask_csv(path) -> list[tuple[float, float, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [(float(r["x"]), float(r["y"]), r["state"]) for r in csv.DictReader(fh)]


def _runs(column: np.ndarray, state: int):
    """Start and length of each run of ``state`` in a column."""
    hit = np.concatenate([[False], column == state, [False]])
    edges = np.flatnonzero(np.diff(hit.astype(np.int8)))
    return zip(edges[::2], edges[1::2] - edges[::2])


def mask_svg(mask: GridMask, size: int = 512, title: str = "") -> str:
    """Filled IN region, hatched MIXED cells, y axis pointing up."""
    nx, ny = mask.shape
    W = size
    H = max(1, round(size * mask.y_extent / mask.x_extent))
    cw, ch = W / nx, H / ny
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
        "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" "
        "stroke=\"#d62728\" stroke-width=\"2\"/></pattern></defs>",
    ]
    if title:
        parts.append(f"<title>{title}</title>")
    parts.append(f'<rect x="0" y="0" width="{W}" height="{H}" fill="white" stroke="black"/>')
    for state, fill, cls in ((CellState.IN, "#1f77b4", "in"), (CellState.MIXED, "url(#hatch)", "mixed")):
        parts.append(f'<g class="{cls}" fill="{fill}" stroke="none">')
        for i in range(nx):
            for j0, n in _runs(mask.states[i], state):
                y = H - (j0 + n) * ch
                parts.append(f'<rect x="{i * cw:.4f}" y="{y:.4f}" width="{cw:.4f}" height="{n * ch:.4f}"/>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path, mask: GridMask, title: str = "") -> None:
    Path(path).write_text(mask_svg(mask, title=title), encoding="utf-8")
