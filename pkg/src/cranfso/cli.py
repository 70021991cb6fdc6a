"""Command-line front end.

    cranfso run      [options]                 all schemes, no sweep
    cranfso sweep    --axis {alpha0,d_fr,kappa} [--values v ...] [options]
    cranfso baseline --scheme {sq,vq} [options]

Exit codes: 0 success, 2 invalid configuration or arguments, 3 more than 5% of
the work items failed, 4 output could not be written.
"""
from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigError
from .harness import ExperimentSpec, emit_results, run_experiment, write_results

EXIT_OK, EXIT_CONFIG, EXIT_FAILURES, EXIT_IO = 0, 2, 3, 4


def _u64(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--seed", type=_u64, default=0, help="master seed (default 0)")
    common.add_argument("--trials", type=_positive_int, help="number of fading blocks")
    common.add_argument("--workers", type=_positive_int, default=1, help="worker processes")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--paper-scale", action="store_true",
                        help="K=8, N=8, L=64 and 1000 trials instead of the desk profile")

    parser = argparse.ArgumentParser(prog="cranfso",
                                     description="Hybrid RF/FSO fronthaul C-RAN uplink sum-rate simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="hybrid scheme and both FSO-only baselines")
    sw = sub.add_parser("sweep", parents=[common], help="sweep alpha0, d_fr or kappa")
    sw.add_argument("--axis", choices=("alpha0", "d_fr", "kappa"), required=True)
    sw.add_argument("--values", type=float, nargs="+",
                    help="sweep values (alpha0 default: 21-point grid; kappa: 4.2e-3 42e-3 125e-3)")
    bl = sub.add_parser("baseline", parents=[common], help="one FSO-only baseline")
    bl.add_argument("--scheme", choices=("sq", "vq"), required=True)
    return parser


def spec_from_args(args):
    cfg = load_config(args.config, full_scale=args.paper_scale)
    kwargs = dict(system=cfg.system, geometry=cfg.geometry,
                  trials=args.trials if args.trials is not None else cfg.trials,
                  seed=args.seed, workers=args.workers)
    if args.command == "sweep":
        kwargs.update(axis=args.axis, values=tuple(args.values or ()))
    elif args.command == "baseline":
        kwargs.update(schemes=("fso_sq",) if args.scheme == "sq" else ("fso_vq",))
    return ExperimentSpec(**kwargs)


def _print_summary(result, stream):
    print("sweep,scheme,mean_c_sum_mbps,mean_alpha0,trials,excluded", file=stream)
    for (sweep, scheme), s in sorted(result.summary.items(),
                                     key=lambda kv: (-1.0 if kv[0][0] is None else kv[0][0], kv[0][1])):
        sv = "" if sweep is None else f"{sweep:.9g}"
        print(f"{sv},{scheme},{s['mean_c_sum_mbps']:.6g},{s['mean_alpha0']:.4g},{s['trials']},{s['excluded']}",
              file=stream)
    print(f"failed work items: {result.failures}/{result.work_items}", file=stream)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = run_experiment(spec)
    try:
        if args.out:
            emit_results(result.records, args.format, args.out)
        else:
            write_results(result.records, args.format, sys.stdout)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    _print_summary(result, sys.stderr)
    if not result.passed:
        print(f"error: {result.failure_rate:.1%} of work items failed (limit 5%)", file=sys.stderr)
        return EXIT_FAILURES
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
