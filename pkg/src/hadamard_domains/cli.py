"""Command-line front end: ``hadamard-domains <subcommand> ...``.

Exit codes: 0 decided / success, 1 undetermined verdict, quadrature failure
or failed verification suite, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .dual import DEFAULT_BOUNDARY_SAMPLES, dual_boundary
from .errors import HadamardError, InternalError, InvalidArgument, QuadratureFailure
from .separation import LogPolarGrid, separates
from .series import (
    CONTOUR_RTOL,
    Circle,
    contour_h_star,
    h_xi_coeffs,
    hadamard,
    lambda_op,
    torus_hadamard,
    weighted_hadamard,
)
from .star import CellState, h_star_shadow, star_shadow
from .verification import SUITES, jsonable, run_suites

GRID_MIN, GRID_MAX = 16, 4096


@dataclass
class RunConfig:
    """Validated view of one invocation."""

    subcommand: str
    inputs: tuple = ()
    outputs: tuple = ()
    grids: dict = field(default_factory=dict)
    seed: int | None = None
    rtol: float | None = None
    threads: int | None = None

    def validate(self) -> "RunConfig":
        for name, n in self.grids.items():
            if n is None:
                continue
            if not (GRID_MIN <= n <= GRID_MAX) or n & (n - 1):
                raise InvalidArgument(f"--{name} must be a power of two in [{GRID_MIN}, {GRID_MAX}], got {n}")
        outs = [Path(p).resolve() for p in self.outputs if p is not None]
        if len(set(outs)) != len(outs):
            raise InvalidArgument("output paths must be distinct")
        ins = {Path(p).resolve() for p in self.inputs if p is not None}
        if ins & set(outs):
            raise InvalidArgument("an output path coincides with an input file")
        if self.threads is not None and self.threads < 1:
            raise InvalidArgument("--threads must be at least 1")
        if self.rtol is not None and not self.rtol > 0:
            raise InvalidArgument("--rtol must be positive")
        return self


def _max_refine_default() -> int:
    return int(os.environ.get("HD_MAX_REFINE", 4))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hadamard-domains", description="Star products of Reinhardt domains in C^2.")
    p.add_argument("--threads", type=int, default=None, help="cap on worker threads (computations are single-threaded)")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dual", help="sample the boundary of the dual complement")
    d.add_argument("--domain", required=True)
    d.add_argument("--samples", type=int, default=DEFAULT_BOUNDARY_SAMPLES)
    d.add_argument("--out", required=True)

    s = sub.add_parser("separates", help="does I_z^-1(D) separate 0 and infinity?")
    s.add_argument("--domain", required=True)
    s.add_argument("--z", required=True, help='"a+bi,c+di"')
    s.add_argument("--smin", type=float)
    s.add_argument("--smax", type=float)
    s.add_argument("--ns", type=int, default=256)
    s.add_argument("--ntheta", type=int, default=256)
    s.add_argument("--max-refine", type=int, default=None)
    s.add_argument("--cert-out", help="write the certificate polyline (re,im)")

    h = sub.add_parser("hstar", help="shadow of h_(1,1) * G")
    h.add_argument("--g", required=True)
    h.add_argument("--grid", type=int, default=256)
    h.add_argument("--out", required=True)
    h.add_argument("--svg")

    st = sub.add_parser("star", help="shadow of D * G")
    st.add_argument("--d", required=True)
    st.add_argument("--g", required=True)
    st.add_argument("--grid", type=int, default=256)
    st.add_argument("--out", required=True)
    st.add_argument("--svg")

    se = sub.add_parser("series", help="coefficient-level operations")
    ss = se.add_subparsers(dest="op", required=True)
    for name in ("hadamard", "weighted"):
        q = ss.add_parser(name)
        q.add_argument("--f", required=True)
        q.add_argument("--g", required=True)
        q.add_argument("--out", required=True)
    q = ss.add_parser("hxi")
    q.add_argument("--xi", required=True, help='"a+bi,c+di"')
    q.add_argument("--cap", type=int, required=True)
    q.add_argument("--out", required=True)
    q = ss.add_parser("lambda")
    q.add_argument("--f", required=True)
    q.add_argument("--out", required=True)
    q = ss.add_parser("torus")
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--rho", type=float, default=1.0)
    q.add_argument("--z", required=True)
    q.add_argument("--nodes", type=int, default=16)
    q.add_argument("--rtol", type=float, default=None)
    q = ss.add_parser("contour")
    q.add_argument("--f", required=True)
    q.add_argument("--z", required=True)
    q.add_argument("--center", default="0")
    q.add_argument("--radius", type=float, default=1.0)
    q.add_argument("--nodes", type=int, default=32)
    q.add_argument("--rtol", type=float, default=None)

    v = sub.add_parser("verify", help="run cross-validation suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--grid", type=int, default=256)
    v.add_argument("--report")
    return p


def _config(args) -> RunConfig:
    cmd = args.command
    if cmd == "dual":
        return RunConfig(cmd, (args.domain,), (args.out,))
    if cmd == "separates":
        return RunConfig(cmd, (args.domain,), (args.cert_out,), {"ns": args.ns, "ntheta": args.ntheta})
    if cmd == "hstar":
        return RunConfig(cmd, (args.g,), (args.out, args.svg), {"grid": args.grid})
    if cmd == "star":
        return RunConfig(cmd, (args.d, args.g), (args.out, args.svg), {"grid": args.grid})
    if cmd == "series":
        ins = tuple(getattr(args, k) for k in ("f", "g") if getattr(args, k, None))
        return RunConfig(cmd, ins, (getattr(args, "out", None),), rtol=getattr(args, "rtol", None))
    if cmd == "verify":
        return RunConfig(cmd, (), (args.report,), {"grid": args.grid}, seed=args.seed)
    raise InvalidArgument(f"unknown command {cmd!r}")


def _cmd_dual(args) -> int:
    pts = dual_boundary(io.load_domain(args.domain), args.samples)
    io.write_points_csv(args.out, pts)
    print(f"dual: {len(pts)} boundary points -> {args.out}")
    return 0


def _cmd_separates(args) -> int:
    D = io.load_domain(args.domain)
    z = io.parse_complex_tuple(args.z)
    refine = args.max_refine if args.max_refine is not None else _max_refine_default()
    grid = LogPolarGrid(args.smin, args.smax, args.ns, args.ntheta, refine)
    verdict = separates(D, z, grid)
    if not verdict.decided:
        print(f"separates: Undetermined {verdict.resolution_reached}")
        return 1
    cert = verdict.loop if verdict.kind == "Separated" else verdict.path
    if args.cert_out:
        io.write_polyline_csv(args.cert_out, cert)
    print(f"separates: {verdict.kind} (grid {verdict.grid.ns}x{verdict.grid.ntheta}, certificate {len(cert)} vertices)")
    return 0


def _emit_mask(label, res, args) -> int:
    io.write_mask_csv(args.out, res.mask)
    if args.svg:
        io.write_svg(args.svg, res.mask, title=label)
    m = res.mask
    print(f"{label}: IN {m.count(CellState.IN)}, MIXED {m.count(CellState.MIXED)}, "
          f"OUT {m.count(CellState.OUT)} cells over [0,{m.x_extent:g}]x[0,{m.y_extent:g}] -> {args.out}")
    return 0


def _cmd_hstar(args) -> int:
    return _emit_mask("hstar", h_star_shadow(io.load_domain(args.g), args.grid), args)


def _cmd_star(args) -> int:
    D, G = io.load_domain(args.d), io.load_domain(args.g)
    return _emit_mask("star", star_shadow(D, G, nx=args.grid), args)


def _cmd_series(args) -> int:
    op = args.op
    if op in ("hadamard", "weighted"):
        f, g = io.read_series_csv(args.f), io.read_series_csv(args.g)
        out = hadamard(f, g) if op == "hadamard" else weighted_hadamard(f, g)
    elif op == "hxi":
        out = h_xi_coeffs(io.parse_complex_tuple(args.xi), args.cap)
    elif op == "lambda":
        out = lambda_op(io.read_series_csv(args.f))
    else:
        rtol = args.rtol or CONTOUR_RTOL
        z = io.parse_complex_tuple(args.z)
        f = io.read_series_csv(args.f)
        if op == "torus":
            res = torus_hadamard(f, io.read_series_csv(args.g), args.rho, z, args.nodes, rtol)
        else:
            gamma = Circle(io.parse_complex(args.center), args.radius, args.nodes)
            res = contour_h_star(f, z, gamma, rtol=rtol)
        v = res.value
        print(f"series {op}: value {v.real!r} {v.imag!r} error {res.error!r} nodes {res.nodes}")
        return 0
    io.write_series_csv(args.out, out)
    print(f"series {op}: cap {out.cap} -> {args.out}")
    return 0


def _cmd_verify(args) -> int:
    reports = run_suites(args.suite, args.seed, args.grid)
    if args.report:
        payload = {"seed": args.seed, "grid": args.grid, "reports": [r.to_dict() for r in reports]}
        Path(args.report).write_text(
            json.dumps(payload, indent=2, sort_keys=True, default=jsonable) + "\n", encoding="utf-8"
        )
    ok = all(r.ok for r in reports)
    counts = ", ".join(f"{r.suite} {r.summary['passed']}/{r.summary['cases'] - r.summary['controls']}" for r in reports)
    print(f"verify: {'ok' if ok else 'FAILED'} ({counts})")
    return 0 if ok else 1


COMMANDS = {
    "dual": _cmd_dual,
    "separates": _cmd_separates,
    "hstar": _cmd_hstar,
    "star": _cmd_star,
    "series": _cmd_series,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        cfg.threads = args.threads
        cfg.validate()
        return COMMANDS[args.command](args)
    except InternalError:
        raise
    except QuadratureFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (HadamardError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
