"""Load sweeps, CSV emission and oracle validation."""

from __future__ import annotations

import csv
import dataclasses
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .config import ExperimentConfig
from .metrics import METRICS, METRIC_NAMES, aggregate
from .oracle import fixed_moments, lp_moments_uniform, nonpreemptive_priority_waits
from .simulation import RunPlan, simulate
from .switch import TrafficClass
from .traffic import ArrivalMode

RUN_HEADER = ("hp_load", "lp_load", "seed", "class") + METRIC_NAMES
AGGREGATE_HEADER = (("hp_load", "lp_load", "n", "class") + METRIC_NAMES
                    + tuple(f"{m}_ci95" for m in METRIC_NAMES))
VALIDATION_BUFFER = 2**30


def _simulate_task(args):
    plan, seed, path = args
    return simulate(plan, seed, path)


def run_plans(tasks, jobs: int = 1, path: str = "fast") -> list:
    """Run (plan, seed) pairs, optionally across processes; results keep task order."""
    work = [(plan, seed, path) for plan, seed in tasks]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_simulate_task, work, chunksize=4))
    return [_simulate_task(w) for w in work]


@dataclass
class Point:
    hp_load: float
    lp_load: float
    runs: list

    @property
    def summary(self):
        return aggregate(self.runs) if len(self.runs) >= 2 else None


def run_points(config: ExperimentConfig, hp_loads, jobs: int = 1, path: str = "fast") -> list:
    """One Point per (lp_load, hp_load), each holding a run per seed, sorted."""
    grid = [(hp, lp) for lp in sorted(config.lp_load) for hp in hp_loads]
    seeds = sorted(config.seeds)
    tasks = [(config.plan(hp, lp), seed) for hp, lp in grid for seed in seeds]
    results = iter(run_plans(tasks, jobs, path))
    return [Point(hp, lp, [next(results) for _ in seeds]) for hp, lp in grid]


def _fmt(name, value):
    if value is None:
        return ""
    if name.endswith("_ns") or name.endswith("_ns_ci95"):
        return f"{value:.3f}"
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def _load(x):
    return f"{x:g}"


def run_rows(points):
    for pt in points:
        for run in pt.runs:
            for cls in TrafficClass:
                s = run[cls]
                yield [_load(pt.hp_load), _load(pt.lp_load), str(run.seed), cls.value] + [
                    _fmt(name, get(s)) for name, get in METRICS]


def aggregate_rows(points):
    for pt in points:
        summary = pt.summary
        if summary is None:
            continue
        for cls in TrafficClass:
            agg = summary[cls]
            means = [_fmt(m, agg[m].mean) for m in METRIC_NAMES]
            halves = [_fmt(m + "_ci95", agg[m].half_width) for m in METRIC_NAMES]
            yield [_load(pt.hp_load), _load(pt.lp_load), str(agg.n), cls.value] + means + halves


def write_csv(path: Path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_points(points, out_dir, prefix: str):
    out_dir = Path(out_dir)
    runs = write_csv(out_dir / f"{prefix}_runs.csv", RUN_HEADER, run_rows(points))
    agg = write_csv(out_dir / f"{prefix}_aggregate.csv", AGGREGATE_HEADER,
                    aggregate_rows(points))
    return runs, agg


def run_sweep(config: ExperimentConfig, out_dir, jobs: int = 1, path: str = "fast"):
    """Every sweep HP load x every LP load x every seed; writes sweep_runs.csv
    and sweep_aggregate.csv, returns the points."""
    points = run_points(config, config.sweep_loads, jobs, path)
    write_points(points, out_dir, "sweep")
    return points


def run_single(config: ExperimentConfig, out_dir=None, jobs: int = 1, path: str = "fast"):
    points = run_points(config, [config.hp_load], jobs, path)
    if out_dir is not None:
        write_points(points, out_dir, "run")
    return points


# ---------------------------------------------------------------------------
# oracle validation

@dataclass
class ValidationRow:
    hp_load: float
    lp_load: float
    cls: TrafficClass
    status: str  # pass, fail, unstable, absent
    oracle_ns: float | None = None
    sim_ns: float | None = None
    half_width_ns: float | None = None


def matched_budgets(plan: RunPlan, budget: int) -> tuple:
    """Per-class packet counts whose expected arrival spans coincide.

    The slower class gets `budget` packets and the faster one proportionally
    more, so both classes compete for the whole run and neither drops below
    `budget`.
    """
    rates = {cls: plan.config_for(cls).rate(plan.link_rate)
             for cls in TrafficClass if plan.config_for(cls).load > 0}
    slowest = min(rates.values())
    counts = {cls: round(budget * r / slowest) for cls, r in rates.items()}
    return counts.get(TrafficClass.HP, 0), counts.get(TrafficClass.LP, 0)


def validation_plan(config: ExperimentConfig, hp_load: float, lp_load: float) -> RunPlan:
    cfg = config.replace(hp_arrivals=ArrivalMode.POISSON, lp_arrivals=ArrivalMode.POISSON,
                         buffer_bytes=VALIDATION_BUFFER)
    plan = _plan_allowing_zero(cfg, hp_load, lp_load)
    hp_budget, lp_budget = matched_budgets(plan, config.packets_per_class)
    return dataclasses.replace(plan, hp_budget=hp_budget, lp_budget=lp_budget)


def _plan_allowing_zero(cfg, hp_load, lp_load):
    # ExperimentConfig rejects zero loads; validation points may switch a class off
    base = cfg.plan(hp_load or 0.5, lp_load or 0.5)
    return dataclasses.replace(
        base, hp=dataclasses.replace(base.hp, load=hp_load),
        lp=dataclasses.replace(base.lp, load=lp_load))


def oracle_for(plan: RunPlan):
    lp_size = plan.lp.size_model
    hp = fixed_moments(plan.hp.size_model.size, plan.link_rate, plan.hp.load)
    lp = lp_moments_uniform(lp_size.lo, lp_size.hi, plan.link_rate, plan.lp.load)
    return nonpreemptive_priority_waits(hp, lp)


def validate(config: ExperimentConfig, jobs: int = 1, path: str = "fast") -> list:
    """Compare simulated mean waits with the priority M/G/1 formulas.

    Poisson arrivals for both classes, 1 GiB buffers, horizon-matched
    budgets. A class passes when the oracle lies inside the simulated 95% CI.
    Points with total load >= 1 are reported as unstable and not simulated.
    """
    seeds = sorted(config.seeds)
    rows, tasks, pending = [], [], []
    for hp_load, lp_load in config.validate_points:
        plan = validation_plan(config, hp_load, lp_load)
        oracle = oracle_for(plan)
        if not oracle.stable:
            rows.extend(ValidationRow(hp_load, lp_load, cls, "unstable") for cls in TrafficClass)
            continue
        pending.append((hp_load, lp_load, plan, oracle, len(rows)))
        rows.extend([None, None])
        tasks.extend((plan, seed) for seed in seeds)

    results = iter(run_plans(tasks, jobs, path))
    for hp_load, lp_load, plan, oracle, slot in pending:
        runs = [next(results) for _ in seeds]
        summary = aggregate(runs)
        for i, cls in enumerate(TrafficClass):
            load = plan.config_for(cls).load
            target = oracle.w_hp if cls is TrafficClass.HP else oracle.w_lp
            target_ns = target * 1e9
            if load == 0:
                rows[slot + i] = ValidationRow(hp_load, lp_load, cls, "absent", target_ns)
                continue
            est = summary[cls]["mean_latency_ns"]
            ok = est.mean is not None and est.contains(target_ns)
            rows[slot + i] = ValidationRow(hp_load, lp_load, cls, "pass" if ok else "fail",
                                           target_ns, est.mean, est.half_width)
    return rows


def format_validation(rows) -> str:
    def num(x):
        return "-" if x is None or math.isinf(x) else f"{x:.3f}"
    lines = [f"{'hp_load':>7} {'lp_load':>7} {'class':>5} {'oracle_ns':>11} "
             f"{'sim_ns':>11} {'ci95_ns':>9}  status"]
    for r in rows:
        lines.append(f"{r.hp_load:>7g} {r.lp_load:>7g} {r.cls.value:>5} {num(r.oracle_ns):>11} "
                     f"{num(r.sim_ns):>11} {num(r.half_width_ns):>9}  {r.status}")
    failed = sum(r.status == "fail" for r in rows)
    lines.append(f"{len(rows) - failed} of {len(rows)} rows ok, {failed} failed")
    return "\n".join(lines)


VALIDATION_HEADER = ("hp_load", "lp_load", "class", "oracle_wait_ns", "sim_mean_wait_ns",
                     "ci95_ns", "status")


def write_validation(rows, out_dir) -> Path:
    return write_csv(Path(out_dir) / "validate.csv", VALIDATION_HEADER, (
        [_load(r.hp_load), _load(r.lp_load), r.cls.value,
         _fmt("oracle_ns", None if r.oracle_ns is None or math.isinf(r.oracle_ns) else r.oracle_ns),
         _fmt("sim_ns", r.sim_ns), _fmt("ci95_ns", r.half_width_ns), r.status]
        for r in rows))

