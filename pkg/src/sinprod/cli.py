"""Command-line interface.

Every subcommand computes through the library and renders through the report
module; nothing numerical lives here. Exit code is 0 only when the run
produced no errors and every pass/fail flag in the output is a pass. Angle
arguments accept the textual grammar plus the keyword `constructed` for the
built-in zero of the limit function.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Optional

from . import angles, measure, product, quadrature, report, special, usc
from .errors import SinprodError


def _parse_angle_arg(spec: str):
    if spec.strip() == "constructed":
        return special.constructed_zero_angle()
    return angles.parse_angle(spec)


def run_config(args: argparse.Namespace) -> report.RunConfig:
    return report.RunConfig(
        command=args.command,
        seed=getattr(args, "seed", report.DEFAULT_SEED),
        workers=getattr(args, "workers", 0),
        fmt=args.format,
        output=args.output,
    )


def _render(args: argparse.Namespace, csv_text: str, json_text: str) -> None:
    cfg = run_config(args)
    report.write_output(json_text if cfg.fmt == "json" else csv_text, cfg.output)


def cmd_eval(args: argparse.Namespace) -> int:
    x = _parse_angle_arg(args.x)
    enc = product.evaluate_limit(
        x, args.depth, want_certificate=args.certify, k_max=args.kmax
    )
    _render(args, report.render_enclosure_csv(enc), report.render_enclosure_json(enc))
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    rows = quadrature.convergence_table(
        args.kmin, args.kmax, a=args.a, b=args.b, worker_count=args.workers
    )
    fit = None
    if args.fit:
        lo, sep, hi = args.window.partition(":")
        if not sep or not lo.isdigit() or not hi.isdigit():
            raise SinprodError(f"bad fit window {args.window!r}, expected LO:HI")
        fit = quadrature.fit_ab(rows, (int(lo), int(hi)))
    _render(args, report.render_table_csv(rows, fit), report.render_table_json(rows, fit))
    if args.figure:
        report.save_table_figure(args.figure, rows)
    return 0


def cmd_zeros(args: argparse.Namespace) -> int:
    steps = special.special_depth_chain(args.jmax)
    reached = special.verify_constructed_zero(args.threshold, j_max=args.jmax)
    _render(
        args,
        report.render_chain_csv(steps, args.threshold, reached),
        report.render_chain_json(steps, args.threshold, reached),
    )
    return 0 if reached is not None and all(s.within_bound for s in steps) else 1


def cmd_measure(args: argparse.Namespace) -> int:
    if args.bk:
        est = measure.superlevel_measure(args.k, grid_points=args.grid)
    else:
        est = measure.empirical_small_value_measure(
            args.k, n_depth=args.depth, samples=args.samples, seed=args.seed
        )
    _render(args, report.render_measure_csv(est), report.render_measure_json(est))
    return 0 if est.passes else 1


def cmd_usc(args: argparse.Namespace) -> int:
    x = _parse_angle_arg(args.x)
    rep = usc.check_usc(
        x,
        args.eps,
        trials=args.trials,
        seed=args.seed,
        n_ref=args.nref,
        strict=args.strict,
    )
    _render(args, report.render_usc_csv(rep), report.render_usc_json(rep))
    return 0 if rep.violations == 0 else 1


def cmd_layercake(args: argparse.Namespace) -> int:
    x_points = args.xpoints if args.xpoints is not None else 1 << args.k
    value = measure.layer_cake_integral(args.k, x_points=x_points, y_points=args.ypoints)
    reference: Optional[float] = None
    diff: Optional[float] = None
    passes = True
    if args.k >= 1:
        # midpoint rule at depth k-1 integrates the same truncation over the
        # same node set, so the two must agree to quadrature error
        reference = quadrature.midpoint_estimate(args.k - 1, worker_count=args.workers)
        diff = abs(value - reference)
        passes = diff <= args.tolerance
    _render(
        args,
        report.render_layercake_csv(args.k, value, reference, diff, passes),
        report.render_layercake_json(args.k, value, reference, diff, passes),
    )
    return 0 if passes else 1


def cmd_plotdata(args: argparse.Namespace) -> int:
    n = args.points
    xs: list[float] = []
    ys: list[float] = []
    for i in range(n):
        frac = Fraction(i, n - 1)
        xs.append(float(frac) * math.pi)
        if i == 0 or i == n - 1:
            # endpoints are exact zeros of every truncation
            ys.append(0.0)
            continue
        x = angles.angle_from_half_turns(frac)
        ys.append(product.partial_product(x, args.depth).value)
    _render(args, report.render_pairs_csv(xs, ys), report.render_pairs_json(xs, ys))
    if args.figure:
        report.save_pairs_figure(args.figure, xs, ys, args.depth)
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _add_io_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )
    sub.add_argument("--output", default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sinprod",
        description="Evaluate the infinite sine product, its integral, and its zero set.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("eval", help="evaluate the product at an angle")
    p.add_argument("--x", required=True, help="angle (grammar or 'constructed')")
    p.add_argument("--depth", type=_positive_int, default=64, help="truncation depth")
    p.add_argument("--certify", action="store_true", help="attach a certified lower bound")
    p.add_argument("--kmax", type=_positive_int, default=12, help="clearance search limit")
    _add_io_options(p)
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("table", help="midpoint convergence table")
    p.add_argument("--kmin", type=_positive_int, required=True, help="first dyadic level")
    p.add_argument("--kmax", type=_positive_int, required=True, help="last dyadic level")
    p.add_argument("--a", type=float, default=0.4044, help="extrapolation coefficient")
    p.add_argument("--b", type=float, default=0.27, help="extrapolation shift")
    p.add_argument("--fit", action="store_true", help="fit the extrapolation model")
    p.add_argument("--window", default=None, help="fit window as LO:HI (defaults to full range)")
    p.add_argument("--workers", type=_nonnegative_int, default=0, help="0 = auto")
    p.add_argument("--figure", default=None, help="also render a PNG to this path")
    _add_io_options(p)
    p.set_defaults(func=cmd_table)

    p = subs.add_parser("zeros", help="constructed-zero factor chain")
    p.add_argument("--threshold", type=float, required=True, help="target partial value")
    p.add_argument("--jmax", type=_nonnegative_int, default=6, help="last chain index")
    _add_io_options(p)
    p.set_defaults(func=cmd_zeros)

    p = subs.add_parser("measure", help="measure of the small-value set")
    p.add_argument("--k", type=_nonnegative_int, required=True, help="truncation level")
    p.add_argument("--depth", type=_positive_int, default=64, help="bits per sample")
    p.add_argument("--samples", type=_positive_int, default=1_000_000)
    p.add_argument("--seed", type=_nonnegative_int, default=report.DEFAULT_SEED)
    p.add_argument("--bk", action="store_true", help="superlevel-set measure instead")
    p.add_argument("--grid", type=_positive_int, default=1 << 20, help="grid points for --bk")
    _add_io_options(p)
    p.set_defaults(func=cmd_measure)

    p = subs.add_parser("usc", help="semicontinuity witness and randomized check")
    p.add_argument("--x", required=True, help="angle (grammar or 'constructed')")
    p.add_argument("--eps", type=float, required=True, help="semicontinuity margin")
    p.add_argument("--trials", type=_nonnegative_int, default=1000)
    p.add_argument("--seed", type=_nonnegative_int, default=report.DEFAULT_SEED)
    p.add_argument("--nref", type=_positive_int, default=None, help="reference depth override")
    p.add_argument("--strict", action="store_true", help="fail without a certificate")
    _add_io_options(p)
    p.set_defaults(func=cmd_usc)

    p = subs.add_parser("layercake", help="layer-cake integral with midpoint cross-check")
    p.add_argument("--k", type=_nonnegative_int, required=True, help="truncation level")
    p.add_argument("--xpoints", type=_positive_int, default=None, help="default 2^k")
    p.add_argument("--ypoints", type=_positive_int, default=8193)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--workers", type=_nonnegative_int, default=0, help="0 = auto")
    _add_io_options(p)
    p.set_defaults(func=cmd_layercake)

    p = subs.add_parser("plotdata", help="sample a truncation on a uniform grid")
    p.add_argument("--points", type=_positive_int, default=4096)
    p.add_argument("--depth", type=_positive_int, default=20, help="truncation depth")
    p.add_argument("--figure", default=None, help="also render a PNG to this path")
    _add_io_options(p)
    p.set_defaults(func=cmd_plotdata)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "table":
        if args.kmin > args.kmax:
            parser.error("--kmin must not exceed --kmax")
        if args.window is None:
            args.window = f"{args.kmin}:{args.kmax}"
    if args.command == "plotdata" and args.points < 2:
        parser.error("--points must be at least 2")
    try:
        return args.func(args)
    except SinprodError as exc:
        print(f"sinprod: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
