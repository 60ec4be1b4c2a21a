"""Command-line interface.

Subcommands: solve (file-based pencil), bench tridiag / bench pentadiag
(paper-style sweeps), selftest (quick invariant checks).
Exit codes: 0 all verified, 2 partial verification, 3 configuration error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, EigencloseError
from .experiments import ExperimentConfig, exit_status, run_experiment


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="eigenclose",
        description="Verified enclosure of generalized Hermitian eigenpairs "
                    "in an interval via contour-integral complex moments.")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="verify a pencil from Matrix Market files")
    ps.add_argument("--matrix-a", required=True)
    ps.add_argument("--matrix-b", required=True)
    ps.add_argument("--interval", required=True,
                    help="target interval as 'a,b'")
    ps.add_argument("--m", type=int, required=True,
                    help="number of eigenvalues in the interval")
    ps.add_argument("--L", type=int, required=True)
    ps.add_argument("--M", type=int, required=True)
    ps.add_argument("--delta", type=float, default=1e-15)
    ps.add_argument("--approach", default="rr", choices=["rr", "hankel"])
    ps.add_argument("--vectors", action="store_true")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", default="")

    pb = sub.add_parser("bench", help="run a generated-problem sweep")
    bsub = pb.add_subparsers(dest="family", required=True)

    bt = bsub.add_parser("tridiag")
    bt.add_argument("--lmin", type=int, default=5)
    bt.add_argument("--lmax", type=int, default=10)
    bt.add_argument("--approach", default="rr,hankel")
    bt.add_argument("--seed", type=int, default=0)
    bt.add_argument("--vectors", action="store_true")
    bt.add_argument("--out", default="")

    bp = bsub.add_parser("pentadiag")
    bp.add_argument("--b100", default="0,1e-16,1e-12,1e-8,1e-4,1e-2,1",
                    help="comma-separated corner values")
    bp.add_argument("--approach", default="rr,hankel")
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--vectors", action="store_true")
    bp.add_argument("--out", default="")

    sub.add_parser("selftest", help="run quick invariant checks")
    return parser


def _cmd_solve(args):
    a, b = (float(t) for t in args.interval.split(","))
    config = ExperimentConfig(
        family="file", matrix_a=args.matrix_a, matrix_b=args.matrix_b,
        interval=(a, b), m=args.m, L=args.L, M=args.M, delta=args.delta,
        seed=args.seed, approaches=(args.approach,),
        want_vectors=args.vectors, out_dir=args.out)
    rows, _ = run_experiment(config)
    _print_rows(rows)
    return exit_status(rows)


def _cmd_bench_tridiag(args):
    config = ExperimentConfig(
        family="tridiag", l_values=tuple(range(args.lmin, args.lmax + 1)),
        seed=args.seed, approaches=tuple(args.approach.split(",")),
        want_vectors=args.vectors, out_dir=args.out)
    rows, _ = run_experiment(config)
    _print_rows(rows)
    return exit_status(rows)


def _cmd_bench_pentadiag(args):
    values = tuple(float(t) for t in args.b100.split(","))
    config = ExperimentConfig(
        family="pentadiag", b100_values=values, seed=args.seed,
        approaches=tuple(args.approach.split(",")),
        want_vectors=args.vectors, out_dir=args.out)
    rows, _ = run_experiment(config)
    _print_rows(rows)
    return exit_status(rows)


def _print_rows(rows):
    for r in rows:
        lam = f"[{r['lam_inf']}, {r['lam_sup']}]" if r["lam_inf"] else "-"
        vec = f" vec_rad={r['vec_max_rad']}" if r["vec_max_rad"] else ""
        print(f"{r['family']}({r['param']}) {r['approach']} N={r['N']} "
              f"#{r['index']} {r['status']}{' ' + r['reason'] if r['reason'] else ''} "
              f"lambda={lam}{vec}")


def _cmd_selftest():
    from .selftest import run_selftest
    return run_selftest()


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench" and args.family == "tridiag":
            return _cmd_bench_tridiag(args)
        if args.command == "bench" and args.family == "pentadiag":
            return _cmd_bench_pentadiag(args)
        if args.command == "selftest":
            return _cmd_selftest()
        return 3
    except (ConfigError, OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3
    except EigencloseError as exc:
        print(f"verification failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
