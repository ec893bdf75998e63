"""Compare the compiled kernel, its pure-Python fallback and the event-calendar
model on the same runs.

    python benchmarks/bench_kernels.py [--packets N] [--repeat R] [--events]
"""

import argparse
import statistics
import time

from prioswitch.simulation import KERNELS, RunPlan, run_events, run_fast
from prioswitch.traffic import hp_default, lp_default


def timed(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        samples.append(time.perf_counter() - t0)
    return result, min(samples), statistics.median(samples)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--packets", type=int, default=40_000, help="packets per class")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--hp-load", type=float, default=0.4)
    ap.add_argument("--lp-load", type=float, default=0.4)
    ap.add_argument("--seed", type=int, default=907)
    ap.add_argument("--events", action="store_true", help="also time the event-calendar model")
    args = ap.parse_args(argv)

    plan = RunPlan(hp_default(args.hp_load), lp_default(args.lp_load),
                   hp_budget=args.packets, lp_budget=args.packets)
    rows = []
    for name in sorted(KERNELS):
        stats, best, med = timed(lambda: run_fast(plan, args.seed, name), args.repeat)
        rows.append((name, best, med, stats))
    if args.events:
        stats, best, med = timed(lambda: run_events(plan, args.seed)[0], 1)
        rows.append(("events", best, med, stats))

    ref = rows[0][3]
    base = min(r[1] for r in rows)
    print(f"{2 * args.packets} packets, hp {args.hp_load}, lp {args.lp_load}, seed {args.seed}")
    print(f"{'backend':>10} {'best_ms':>10} {'median_ms':>10} {'slowdown':>9} {'same':>5}")
    for name, best, med, stats in rows:
        same = stats.hp == ref.hp and stats.lp == ref.lp
        print(f"{name:>10} {best * 1e3:10.2f} {med * 1e3:10.2f} {best / base:8.1f}x {str(same):>5}")


if __name__ == "__main__":
    main()
