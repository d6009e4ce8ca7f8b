"""Command-line driver: ``gridkk {order,shadow,compress,minshadow,verify}``.

Exit codes are 0 on success or a passing report, 1 when a report lists
violations and 2 on usage, parse or budget errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import verify as V
from .compression import compress_fixpoint
from .grid import GridShape, format_point, parse_point
from .io import format_csv, format_set, parse_sizes, read_set, write_set
from .order import chain, cmp_shadow, rank, successor, unrank
from .shadow import ShadowKind, shadow

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

SHADOW_KINDS = {
    "d": ShadowKind.D_LOWER,
    "d+": ShadowKind.D_UPPER,
    "binary-lower": ShadowKind.BINARY_LOWER,
    "binary-upper": ShadowKind.BINARY_UPPER,
    "gamma": ShadowKind.GAMMA,
}

VERIFY_TARGETS = (
    "t1",
    "t2",
    "compression",
    "claim3",
    "claim11",
    "claim12",
    "kk-coincide",
    "clements-lindstrom",
    "extremal-families",
)


class UsageError(ValueError):
    pass


def _bounds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad bounds {text!r}; expected e.g. 2,2") from None


def _shape_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="number of coordinates")
    p.add_argument("--k", type=int, help="alphabet size")
    p.add_argument("--bounds", type=_bounds, help="per-axis bounds k_1,...,k_n (gamma grids)")


def _format_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    g.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.add_argument("--out", type=Path, help="write the main output here instead of stdout")


def _shape(args, need_k: bool = True) -> GridShape:
    if args.bounds is not None:
        if args.n is not None and args.n != len(args.bounds):
            raise UsageError(f"--n {args.n} does not match {len(args.bounds)} bounds")
        return GridShape.from_bounds(args.bounds)
    if args.n is None or (need_k and args.k is None):
        raise UsageError("shape flags --n and --k (or --bounds) are required")
    return GridShape(args.n, args.k)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- order --------------------------------------------------------------------


def cmd_order(args) -> int:
    shape = _shape(args)
    want = {"rank": 1, "unrank": 1, "next": 1, "cmp": 2, "dump": 0}[args.sub]
    if len(args.points) != want:
        raise UsageError(f"order {args.sub} takes {want} operand(s)")
    pts = [] if args.sub == "unrank" else [parse_point(t, shape) for t in args.points]
    if args.sub == "rank":
        result: object = rank(pts[0], shape)
    elif args.sub == "unrank":
        try:
            i = int(args.points[0])
        except ValueError:
            raise UsageError(f"bad index {args.points[0]!r}") from None
        result = format_point(unrank(i, shape), shape)
    elif args.sub == "next":
        nxt = successor(pts[0], shape)
        result = "END" if nxt is None else format_point(nxt, shape)
    elif args.sub == "cmp":
        result = "<=>"[cmp_shadow(pts[0], pts[1]) + 1]
    else:
        result = [format_point(p, shape) for p in chain(shape).points()]
    if args.fmt == "json":
        _emit(args, json.dumps(result) + "\n")
    elif isinstance(result, list):
        _emit(args, "".join(line + "\n" for line in result))
    else:
        _emit(args, f"{result}\n")
    return EXIT_OK


# -- shadow / compress -------------------------------------------------------


def _read_input(path: str, shape: GridShape):
    return read_set(sys.stdin if path == "-" else path, shape)


def cmd_shadow(args) -> int:
    shape = _shape(args)
    family = _read_input(args.input, shape)
    _emit(args, format_set(shadow(family, SHADOW_KINDS[args.kind])))
    return EXIT_OK


def cmd_compress(args) -> int:
    shape = _shape(args)
    trace = compress_fixpoint(_read_input(args.input, shape))
    sys.stdout.write(json.dumps(trace.to_dict(), indent=2) + "\n")
    if args.out:
        write_set(trace.final, args.out)
    return EXIT_OK


# -- minshadow ----------------------------------------------------------------


def cmd_minshadow(args) -> int:
    sizes = parse_sizes(args.sizes)
    if args.r is None:
        shape = _shape(args)
        prof = V.shadow_profile(shape)
        if sizes.stop - 1 > shape.size:
            raise UsageError(f"sizes exceed |[k]^n| = {shape.size}")
        rows = [(m, int(prof[m])) for m in sizes]
    else:
        if args.n is None:
            raise UsageError("--n is required")
        rows = [(m, V.min_d_shadow_ranked(args.n, args.r, m, args.k)) for m in sizes]
    if args.fmt == "json":
        _emit(args, json.dumps([{"m": m, "min_shadow": v} for m, v in rows]) + "\n")
    else:
        _emit(args, format_csv(("m", "min_shadow"), rows))
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def _mode(args, default: V.Mode = V.EXHAUSTIVE) -> V.Mode:
    if args.exhaustive and args.samples is not None:
        raise UsageError("choose one of --exhaustive and --samples")
    if args.samples is not None:
        return V.Mode.sampled(args.samples, args.seed)
    return default


def _need(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.target} needs {' '.join(missing)}")


def run_verify(args) -> V.VerifyReport:
    budget = V.Budget(args.budget, args.soft_seconds)
    t, be = args.target, args.backend
    if t == "t1":
        return V.verify_grid_minimum(_shape(args), _mode(args), budget, be)
    if t == "t2":
        _need(args, "n", "r", "k")
        return V.verify_slice_minimum(args.n, args.r, args.k, _mode(args), budget, be)
    if t == "compression":
        return V.verify_compression(_shape(args), _mode(args), budget)
    _mode(args)
    if t == "claim3":
        _need(args, "k")
        return V.verify_plane_formula(args.k, budget)
    if t == "claim11":
        return V.verify_successor_steps(_shape(args), budget)
    if t == "claim12":
        return V.verify_run_equality(_shape(args), budget)
    if t == "kk-coincide":
        _need(args, "n")
        return V.verify_kk_coincide(args.n, budget)
    if t == "clements-lindstrom":
        _need(args, "bounds")
        return V.verify_clements_lindstrom(args.bounds, args.r, budget, be)
    return V.verify_extremal_families(_shape(args), args.r, budget, be)


def cmd_verify(args) -> int:
    report = run_verify(args)
    if args.fmt == "text":
        _emit(args, report.summary() + "\n")
    else:
        _emit(args, report.to_json())
    return EXIT_OK if report.passed else EXIT_VIOLATION


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridkk", description="Shadow order, shadows and Kruskal-Katona checks on [k]^n.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log campaign progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="rank, unrank, successor, compare or list the shadow order")
    p.add_argument("sub", choices=("rank", "unrank", "next", "cmp", "dump"))
    p.add_argument("points", nargs="*", help="points (digits or comma form) or an index for unrank")
    _shape_flags(p)
    _format_flags(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("shadow", help="shadow of a set file")
    p.add_argument("input", help="set file, or - for stdin")
    p.add_argument("--kind", choices=sorted(SHADOW_KINDS), default="d")
    _shape_flags(p)
    _format_flags(p)
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("compress", help="compress a set file to a fixpoint; prints the trace")
    p.add_argument("input", help="set file, or - for stdin")
    _shape_flags(p)
    p.add_argument("--out", type=Path, help="write the final set file here")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("minshadow", help="table of least d-shadows per family size")
    _shape_flags(p)
    p.add_argument("--r", type=int, help="restrict to points with r nonzero coordinates")
    p.add_argument("--sizes", required=True, help="a..b (inclusive) or a single size")
    _format_flags(p)
    p.set_defaults(func=cmd_minshadow)

    p = sub.add_parser("verify", help="run a verification campaign and print its report")
    p.add_argument("target", choices=VERIFY_TARGETS)
    _shape_flags(p)
    p.add_argument("--r", type=int)
    mode = p.add_argument_group("mode")
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    mode.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=V.DEFAULT_FAMILY_BUDGET, help="family budget (default 2^26)")
    p.add_argument("--soft-seconds", type=float, default=V.DEFAULT_SOFT_SECONDS, help="warn past this many seconds")
    p.add_argument("--backend", choices=("numba", "numpy"), help="kernel backend (default from GRIDKK_DISABLE_JIT)")
    _format_flags(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    # points may follow the shape flags, which a plain nargs="*" would reject
    args, extra = parser.parse_known_args(argv)
    if extra and (args.command != "order" or any(e.startswith("-") and not e.lstrip("-").isdigit() for e in extra)):
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    if extra:
        args.points = list(args.points) + extra
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"gridkk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
