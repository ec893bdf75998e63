"""Command line: ``prioswitch {run,sweep,validate}``."""

from __future__ import annotations

import argparse
import sys
import time

from .config import ExperimentConfig, parse_config, parse_seeds
from .engine import ConfigError
from .experiment import (format_validation, run_single, run_sweep, validate,
                         write_validation)
from .simulation import KERNEL
from .switch import TrafficClass
from .traffic import ArrivalMode


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    common.add_argument("--out-dir", metavar="PATH", default="results",
                        help="directory for CSV output (default: results)")
    common.add_argument("--hp-arrivals", choices=[m.value for m in ArrivalMode],
                        help="override the HP arrival process")
    common.add_argument("--seeds", metavar="LIST",
                        help="override seeds, comma or space separated")
    common.add_argument("--jobs", type=int, default=1,
                        help="worker processes for independent runs (default 1)")
    common.add_argument("--engine", choices=["fast", "events"], default="fast",
                        help="array kernel (default) or the event-calendar model")

    parser = argparse.ArgumentParser(
        prog="prioswitch",
        description="Strict-priority Ethernet switch simulator (HP/LP traffic).")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common],
                   help="simulate hp_load x each lp_load over all seeds")
    sub.add_parser("sweep", parents=[common],
                   help="simulate every sweep HP load x each lp_load over all seeds")
    sub.add_parser("validate", parents=[common],
                   help="compare Poisson-mode mean waits with the M/G/1 priority formulas")
    return parser


def load_config(args) -> ExperimentConfig:
    config = parse_config(args.config) if args.config else ExperimentConfig()
    changes = {}
    if args.hp_arrivals:
        changes["hp_arrivals"] = ArrivalMode(args.hp_arrivals)
    if args.seeds:
        try:
            changes["seeds"] = parse_seeds(args.seeds)
        except ValueError as exc:
            raise ConfigError(f"--seeds: {exc}") from None
    return config.replace(**changes) if changes else config


def _print_points(points, out=None):
    out = out or sys.stdout
    print(f"{'hp_load':>7} {'lp_load':>7} {'class':>5} {'mean_ns':>12} {'pdv_ns':>10} "
          f"{'plr':>9} {'eff_load':>8}", file=out)
    for pt in points:
        summary = pt.summary
        for cls in TrafficClass:
            if summary is None:
                s = pt.runs[0][cls]
                mean = s.mean_latency / 1000 if s.mean_latency is not None else None
                pdv = s.pdv / 1000 if s.pdv is not None else None
                plr, eff = s.plr, s.effective_load
            else:
                agg = summary[cls]
                mean, pdv = agg["mean_latency_ns"].mean, agg["pdv_ns"].mean
                plr, eff = agg["plr"].mean, agg["effective_load"].mean
            print(f"{pt.hp_load:>7g} {pt.lp_load:>7g} {cls.value:>5} "
                  f"{'-' if mean is None else f'{mean:.3f}':>12} "
                  f"{'-' if pdv is None else f'{pdv:.3f}':>10} {plr:>9.6f} "
                  f"{'-' if eff is None else f'{eff:.4f}':>8}", file=out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
    except (ConfigError, OSError) as exc:
        print(f"prioswitch: {exc}", file=sys.stderr)
        return 2

    started = time.perf_counter()
    try:
        if args.command == "validate":
            rows = validate(config, jobs=args.jobs, path=args.engine)
            write_validation(rows, args.out_dir)
            print(format_validation(rows))
            code = 1 if any(r.status == "fail" for r in rows) else 0
        else:
            runner = run_sweep if args.command == "sweep" else run_single
            points = runner(config, args.out_dir, jobs=args.jobs, path=args.engine)
            _print_points(points)
            code = 0
    except OSError as exc:
        print(f"prioswitch: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started
    print(f"[{args.command}: {elapsed:.2f}s, kernel={KERNEL}, engine={args.engine}, "
          f"output in {args.out_dir}]", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
