"""Per-run latency/PDV/PLR collection and cross-seed aggregation."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Any

from scipy import stats as _st

from .engine import PS_PER_NS, PS_PER_SECOND, ConfigError
from .switch import Packet, TrafficClass


@dataclass
class ClassStats:
    cls: TrafficClass
    generated: int = 0
    departed: int = 0
    dropped: int = 0
    latency_sum: int = 0
    latency_min: int | None = None
    latency_max: int | None = None
    # time integral of the number of waiting packets, in packet*ps
    queue_area: int = 0
    offered_bits: int = 0
    first_arrival: int | None = None
    last_arrival: int | None = None
    link_rate: int = 10 * 10**9

    @property
    def plr(self) -> float:
        return self.dropped / self.generated if self.generated else 0.0

    @property
    def mean_latency(self) -> float | None:
        """Mean wait in ps, None if nothing departed."""
        return self.latency_sum / self.departed if self.departed else None

    @property
    def pdv(self) -> int | None:
        if self.latency_max is None:
            return None
        return self.latency_max - self.latency_min

    @property
    def effective_load(self) -> float | None:
        if self.generated < 2 or self.first_arrival is None \
                or self.last_arrival <= self.first_arrival:
            return None
        span = self.last_arrival - self.first_arrival
        return self.offered_bits * PS_PER_SECOND / span / self.link_rate


@dataclass
class RunStats:
    seed: int
    hp: ClassStats
    lp: ClassStats
    end_time: int
    plan: Any = None

    def __getitem__(self, cls) -> ClassStats:
        return self.hp if TrafficClass(cls) is TrafficClass.HP else self.lp

    @property
    def classes(self):
        return (self.hp, self.lp)


class ClassCollector:
    """Streaming accumulators for one class; no per-packet retention."""

    def __init__(self, cls: TrafficClass, link_rate: int):
        self.s = ClassStats(cls, link_rate=link_rate)

    def record_arrival(self, packet: Packet):
        s = self.s
        s.generated += 1
        s.offered_bits += 8 * packet.size
        if s.first_arrival is None:
            s.first_arrival = packet.arrival
        s.last_arrival = packet.arrival

    def record_departure(self, packet: Packet):
        if packet.service_start is None or packet.departure is None:
            raise RuntimeError(f"packet {packet.id} departed without timestamps")
        s = self.s
        wait = packet.service_start - packet.arrival
        s.departed += 1
        s.latency_sum += wait
        if s.latency_min is None or wait < s.latency_min:
            s.latency_min = wait
        if s.latency_max is None or wait > s.latency_max:
            s.latency_max = wait


class Collector:
    """Both classes plus the queue-occupancy integral used for Little's law."""

    def __init__(self, link_rate: int):
        self.hp = ClassCollector(TrafficClass.HP, link_rate)
        self.lp = ClassCollector(TrafficClass.LP, link_rate)
        self._t = 0

    def for_class(self, cls: TrafficClass) -> ClassCollector:
        return self.hp if cls is TrafficClass.HP else self.lp

    def record_departure(self, packet: Packet):
        self.for_class(packet.cls).record_departure(packet)

    def observe(self, now: int, n_hp: int, n_lp: int):
        """Integrate queue lengths up to `now`; call before changing the queues."""
        dt = now - self._t
        self.hp.s.queue_area += n_hp * dt
        self.lp.s.queue_area += n_lp * dt
        self._t = now

    def close(self, now: int):
        self.observe(now, 0, 0)


def finalize_run(collector: Collector, generators, switch, seed: int,
                 plan: Any = None) -> RunStats:
    """Turn a drained simulation into RunStats.

    `generators` are the traffic sources; every one must be exhausted and the
    switch must hold no packet.
    """
    if not all(g.state.exhausted for g in generators) or not switch.drained:
        raise RuntimeError("finalize_run called before the simulation drained")
    now = switch.calendar.now
    collector.close(now)
    collector.hp.s.dropped = switch.hp.dropped
    collector.lp.s.dropped = switch.lp.dropped
    run = RunStats(seed, collector.hp.s, collector.lp.s, now, plan)
    for s in run.classes:
        assert s.departed + s.dropped == s.generated
    return run


# (column name, accessor) for every metric that is aggregated and written out
def _ns(v):
    return None if v is None else v / PS_PER_NS


METRICS = (
    ("generated", lambda s: s.generated),
    ("departed", lambda s: s.departed),
    ("dropped", lambda s: s.dropped),
    ("plr", lambda s: s.plr),
    ("mean_latency_ns", lambda s: _ns(s.mean_latency)),
    ("min_latency_ns", lambda s: _ns(s.latency_min)),
    ("max_latency_ns", lambda s: _ns(s.latency_max)),
    ("pdv_ns", lambda s: _ns(s.pdv)),
    ("effective_load", lambda s: s.effective_load),
)
METRIC_NAMES = tuple(name for name, _ in METRICS)


def t_quantile(n: int, level: float = 0.95) -> float:
    """Two-sided Student-t critical value for n samples."""
    return float(_st.t.ppf(0.5 + level / 2, n - 1))


@dataclass
class Estimate:
    mean: float | None
    sd: float | None
    half_width: float | None

    @property
    def low(self):
        return self.mean - self.half_width

    @property
    def high(self):
        return self.mean + self.half_width

    def contains(self, value: float) -> bool:
        return self.low <= value <= self.high


def estimate(values) -> Estimate:
    """Sample mean with a 95% Student-t half-width; n >= 2."""
    values = list(values)
    n = len(values)
    if n < 2:
        raise ConfigError("a confidence interval needs at least 2 runs")
    if any(v is None for v in values):
        return Estimate(None, None, None)
    mean = math.fsum(values) / n
    if all(v == values[0] for v in values):
        return Estimate(float(values[0]), 0.0, 0.0)
    sd = statistics.stdev(values)
    return Estimate(mean, sd, t_quantile(n) * sd / math.sqrt(n))


@dataclass
class AggregateStats:
    cls: TrafficClass
    n: int
    seeds: tuple
    metrics: dict = field(default_factory=dict)

    def __getitem__(self, name) -> Estimate:
        return self.metrics[name]


def aggregate(runs) -> dict:
    """Reduce replications of one configuration to {class: AggregateStats}.

    Runs are sorted by seed first, so the result does not depend on the
    order in which parallel workers finished.
    """
    runs = sorted(runs, key=lambda r: r.seed)
    if len(runs) < 2:
        raise ConfigError("aggregate needs at least 2 runs")
    plans = {r.plan for r in runs}
    if len(plans) > 1:
        raise ConfigError("aggregate got runs from different configurations")
    seeds = tuple(r.seed for r in runs)
    if len(set(seeds)) != len(seeds):
        raise ConfigError("aggregate got duplicate seeds")
    out = {}
    for cls in TrafficClass:
        per_class = [r[cls] for r in runs]
        out[cls] = AggregateStats(cls, len(runs), seeds, {
            name: estimate(get(s) for s in per_class) for name, get in METRICS})
    return out
