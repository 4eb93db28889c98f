"""Command-line interface: ``spheredisc <subcommand> ...``.

Exit status: 0 success, 1 not certified or failed, 2 input error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from . import io
from .covering import CoverInstance, find_uncovered_point
from .errors import BudgetExhausted, SphereDiscError
from .geometry import cap_angle_from_volume, cap_volume, gaussian_tail, gaussian_tail_inverse
from .hardness import parse_formula, reduce_nae_e3sat
from .komlos import spherical_komlos
from .packing import generate_packing
from .solver import SolverConfig, solve

BOUND_SLACK = 1e-6


def _num(x) -> str:
    return f"{float(x):.17g}"


def _emit(out, key, value) -> None:
    if isinstance(value, (float, np.floating)):
        value = _num(value)
    print(f"{key} {value}", file=out)


def _config(args) -> SolverConfig:
    return SolverConfig(T=args.T, time_limit=getattr(args, "time_limit", None))


def _emit_bound(out, b) -> None:
    _emit(out, "guarantee", b.value)
    _emit(out, "term_main", b.term_main)
    _emit(out, "term_stepsize", b.term_stepsize)
    _emit(out, "term_log3", b.term_log3)
    _emit(out, "T", b.T)


def cmd_solve(args, out) -> int:
    V = io.parse_vectors(io.read_text(args.input))
    res = solve(V, _config(args))
    _emit(out, "n", V.shape[1])
    _emit(out, "m", V.shape[0])
    _emit(out, "m_padded", res.m_padded)
    _emit(out, "value", res.value)
    _emit_bound(out, res.bound)
    _emit(out, "trivial", str(res.trivial).lower())
    if args.output:
        io.write_text(args.output, io.format_vectors(res.x))
    if args.trace:
        res.trace.to_csv(args.trace)
    return 0 if res.value <= res.bound.value + BOUND_SLACK else 1


def cmd_witness(args, out) -> int:
    kind, level, poles = io.parse_caps(io.read_text(args.input))
    n = poles.shape[1]
    angle = level if kind == "theta" else cap_angle_from_volume(n, level)
    rep = find_uncovered_point(CoverInstance.caps(poles, angle), _config(args))
    _emit(out, "angle", angle)
    _emit(out, "cap_volume", cap_volume(n, angle))
    _emit(out, "max_inner", rep.max_inner)
    _emit(out, "threshold", rep.threshold)
    _emit(out, "certified", str(rep.certified).lower())
    _emit_bound(out, rep.certified_bound)
    if args.output:
        io.write_text(args.output, io.format_vectors(rep.witness))
    return 0 if rep.certified else 1


def cmd_pack(args, out) -> int:
    res = generate_packing(args.n, args.m, _config(args))
    _emit(out, "max_pair_inner", res.max_pair_inner)
    _emit(out, "radius", res.radius)
    _emit(out, "density", res.density)
    _emit_bound(out, res.certified_bound)
    if args.output:
        io.write_text(args.output, io.format_vectors(res.points))
    return 0 if res.max_pair_inner <= res.certified_bound.value + BOUND_SLACK else 1


def cmd_komlos(args, out) -> int:
    W = io.parse_matrix(io.read_text(args.input))
    try:
        res = spherical_komlos(W, args.seed, args.budget)
    except BudgetExhausted as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    n = W.shape[1]
    _emit(out, "certified_K", res.certified_K)
    _emit(out, "certified_inf_norm", res.certified_K / math.sqrt(n))
    _emit(out, "inf_norm", res.discrepancy)
    _emit(out, "heavy_rows", res.heavy_rows.size)
    if args.output:
        io.write_text(args.output, io.format_vectors(res.x))
    return 0 if res.discrepancy <= res.certified_K / math.sqrt(n) else 1


def cmd_reduce(args, out) -> int:
    inst = reduce_nae_e3sat(parse_formula(io.read_text(args.input)))
    text = io.format_vectors(inst.vectors)
    if args.output:
        io.write_text(args.output, text)
    else:
        out.write(text)
    return 0


def cmd_gauss(args, out) -> int:
    if args.t is not None:
        _emit(out, "tail", gaussian_tail(args.t))
    else:
        numeric, asym = gaussian_tail_inverse(args.delta)
        _emit(out, "inverse", numeric)
        _emit(out, "asymptotic", asym)
    return 0


def cmd_capvol(args, out) -> int:
    if args.theta is not None:
        _emit(out, "volume", cap_volume(args.n, args.theta))
    else:
        _emit(out, "angle", cap_angle_from_volume(args.n, args.delta))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spheredisc", description="Spherical discrepancy toolkit")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_opts(sp):
        sp.add_argument("--T", type=int, default=None, help="iteration count (default: certified-accuracy rule)")
        sp.add_argument("--time-limit", type=float, default=None, help="abort a solve after this many seconds")

    sp = sub.add_parser("solve", help="vectors file -> witness, value and certified bound")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", help="write the unit witness here")
    sp.add_argument("--trace", help="write the trace CSV here")
    solver_opts(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("witness", help="caps file -> uncovered point report")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output")
    solver_opts(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("pack", help="generate m separated points in dimension n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--output")
    solver_opts(sp)
    sp.set_defaults(func=cmd_pack)

    sp = sub.add_parser("komlos", help="matrix file -> unit vector with small ||Wx||_inf")
    sp.add_argument("--input", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_komlos)

    sp = sub.add_parser("reduce", help="NAE-3SAT formula -> vectors file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("gauss", help="Gaussian tail or its inverse")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", type=float)
    g.add_argument("--delta", type=float)
    sp.set_defaults(func=cmd_gauss)

    sp = sub.add_parser("capvol", help="cap volume from angle, or angle from volume")
    sp.add_argument("--n", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", type=float)
    g.add_argument("--delta", type=float)
    sp.set_defaults(func=cmd_capvol)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except (SphereDiscError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
