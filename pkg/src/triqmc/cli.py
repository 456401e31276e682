"""Command-line front end.

Exit codes: 0 on success, 2 for usage errors, 3 for runtime failures.
``TRIQMC_THREADS`` caps the worker threads used for sweeps and replicates.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .discrepancy import parallelogram_discrepancy, parallelogram_discrepancy_grid, pc_discrepancy
from .generators import GENERATOR_KINDS, Generator
from .geometry import SampleSet, make_triangle, reference_triangle
from .io import points_to_csv, read_points_csv
from .lattice import QuadraticIrrationalTangent, default_angle
from .quadrature import convergence_study, fmt_float, get_integrand, rows_to_csv, rows_to_json
from .vdc import DEFAULT_DEPTH

EXIT_USAGE = 2
EXIT_RUNTIME = 3

TRIANGLE_NAMES = {
    "equilateral": "equilateral_unit_area",
    "equilateral_unit_area": "equilateral_unit_area",
    "right": "right_unit",
    "right_unit": "right_unit",
    "pc": "pillards_cools",
    "pillards_cools": "pillards_cools",
}


class UsageError(Exception):
    pass


def parse_triangle(spec: str):
    if spec in TRIANGLE_NAMES:
        return reference_triangle(TRIANGLE_NAMES[spec])
    try:
        v = [float(x) for x in spec.split(",")]
    except ValueError:
        v = []
    if len(v) != 6:
        raise UsageError(f"triangle must be one of {sorted(TRIANGLE_NAMES)} or six comma-separated numbers")
    return make_triangle(v[0:2], v[2:4], v[4:6])


def parse_n_list(spec: str) -> list[int]:
    """``64``, ``16,64,256`` or ``16..2048`` (doubling from the first value)."""
    try:
        if ".." in spec:
            lo, hi = (int(x) for x in spec.split(".."))
            out = []
            while lo <= hi and lo > 0:
                out.append(lo)
                lo *= 2
        else:
            out = [int(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"bad N specification {spec!r}") from None
    if not out or min(out) < 1:
        raise UsageError("N values must be positive integers")
    return out


def parse_angle(args):
    if args.angle_rad is not None:
        if args.angle_tan is not None:
            raise UsageError("give either --angle-tan or --angle-rad, not both")
        if not args.unsafe_angle:
            raise UsageError("--angle-rad requires --unsafe-angle (no discrepancy guarantee)")
        return args.angle_rad
    if args.angle_tan is None:
        return default_angle()
    try:
        a, b, c, d = (int(x) for x in args.angle_tan.split(","))
        return QuadraticIrrationalTangent(a, b, c, d)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--angle-tan expects a,b,c,d integers describing (a+b*sqrt(c))/d: {exc}") from None


def threads() -> int:
    raw = os.environ.get("TRIQMC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"TRIQMC_THREADS must be a positive integer, got {raw!r}")
    return n


def build_generator(args) -> Generator:
    return Generator(
        args.gen,
        domain=parse_triangle(args.triangle),
        angle=parse_angle(args),
        unsafe_angle=args.unsafe_angle,
        depth=args.depth,
        leaf=args.leaf,
        exact_count=args.exact_count,
        start=args.start,
    )


def single_n(args) -> int:
    ns = parse_n_list(args.n)
    if len(ns) != 1:
        raise UsageError("this command takes a single --n")
    return ns[0]


def _check_lattice_n(gen: Generator, ns) -> None:
    if gen.kind.startswith("lattice") and min(ns) < 2:
        raise UsageError("lattice generators need N >= 2")


# commands ----------------------------------------------------------------


def cmd_generate(args) -> str:
    gen = build_generator(args)
    n = single_n(args)
    _check_lattice_n(gen, [n])
    return points_to_csv(gen.sample(n, args.seed).points)


def _report(ps: SampleSet, args):
    if args.family == "anchored_box":
        return pc_discrepancy(ps)
    if args.grid is not None:
        return parallelogram_discrepancy_grid(ps, args.grid)
    return parallelogram_discrepancy(ps)


def cmd_discrepancy(args) -> str:
    if args.grid is not None and args.grid < 2:
        raise UsageError("--grid must be at least 2")
    if args.points is not None:
        if args.n is not None:
            raise UsageError("--points and --n are mutually exclusive")
        pts = read_points_csv(args.points)
        ps = SampleSet(parse_triangle(args.triangle), pts, f"file:{args.points}")
        ps.check_inside()
        return json.dumps(_report(ps, args).to_dict(), indent=2) + "\n"

    if args.n is None:
        raise UsageError("give --n (or --n-list) or --points")
    gen = build_generator(args)
    ns = parse_n_list(args.n)
    _check_lattice_n(gen, ns)

    def run(n):
        return n, _report(gen.sample(n, args.seed), args)

    workers = threads()
    if workers > 1 and len(ns) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, ns))
    else:
        results = [run(n) for n in ns]

    if len(ns) == 1 and args.format == "json":
        return json.dumps(results[0][1].to_dict(), indent=2) + "\n"
    if args.format == "json":
        return json.dumps([{"N": n, **rep.to_dict()} for n, rep in results], indent=2) + "\n"
    lines = ["N,n_points,value,approximate,ref_inv_n,ref_log_n_over_n"]
    for n, rep in results:
        lines.append(
            ",".join(
                [
                    str(n),
                    str(rep.n_points),
                    fmt_float(rep.value),
                    str(rep.approximate).lower(),
                    fmt_float(1.0 / n),
                    fmt_float(math.log(n) / n),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _study(args, ns) -> str:
    gen = build_generator(args)
    _check_lattice_n(gen, ns)
    try:
        f = get_integrand(args.f, gen.domain)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    rows = convergence_study(gen, f, ns, R=args.R, seed=args.seed if args.seed is not None else 0, workers=threads())
    return rows_to_json(rows) + "\n" if args.format == "json" else rows_to_csv(rows)


def cmd_integrate(args) -> str:
    return _study(args, [single_n(args)])


def cmd_converge(args) -> str:
    return _study(args, parse_n_list(args.n))


# parser ------------------------------------------------------------------


def _add_generator_opts(p: argparse.ArgumentParser, n_required: bool = True) -> None:
    p.add_argument("--gen", choices=GENERATOR_KINDS, default="vdc", help="point generator")
    p.add_argument("--triangle", default="equilateral", help="named triangle or x1,y1,x2,y2,x3,y3")
    p.add_argument("--n", "--n-list", dest="n", required=n_required, help="N, N1,N2,... or LO..HI (doubling)")
    p.add_argument("--seed", type=int, default=None, help="seed for scrambling or random shifts")
    p.add_argument("--angle-tan", default=None, metavar="A,B,C,D", help="tangent (A+B*sqrt(C))/D")
    p.add_argument("--angle-rad", type=float, default=None, help="raw lattice angle (needs --unsafe-angle)")
    p.add_argument("--unsafe-angle", action="store_true")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="scramble depth in base-4 digits")
    p.add_argument("--leaf", choices=("centroid", "uniform_leaf"), default="uniform_leaf")
    p.add_argument("--exact-count", action="store_true", help="trim or pad lattices to exactly N")
    p.add_argument("--start", type=int, default=0, help="first van der Corput index")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triqmc", description="Quasi-Monte Carlo sampling on triangles")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a point set as x,y CSV")
    _add_generator_opts(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("discrepancy", help="parallelogram or anchored-box discrepancy")
    _add_generator_opts(p, n_required=False)
    p.add_argument("--points", default=None, help="read points from an x,y CSV instead")
    p.add_argument("--grid", type=int, default=None, help="grid resolution (approximate lower bound)")
    p.add_argument("--family", choices=("parallelogram", "anchored_box"), default="parallelogram")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.set_defaults(func=cmd_discrepancy)

    for name, func, help_ in (
        ("integrate", cmd_integrate, "integrate a built-in function once"),
        ("converge", cmd_converge, "error against N for a built-in function"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_generator_opts(p)
        p.add_argument("--f", required=True, help="built-in integrand name")
        p.add_argument("--R", type=int, default=1, help="replicates for randomized generators")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "format", "") is None:
            args.format = "json" if args.n is None or len(parse_n_list(args.n)) == 1 else "csv"
        if getattr(args, "R", 1) < 1:
            raise UsageError("--R must be at least 1")
        if args.depth < 1:
            raise UsageError("--depth must be at least 1")
        if args.seed is None and args.gen in ("vdc-scrambled", "lattice-shifted"):
            raise UsageError(f"--gen {args.gen} requires --seed")
        text = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"triqmc: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
