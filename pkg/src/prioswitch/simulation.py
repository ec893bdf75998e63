"""One seeded simulation run.

Two execution paths produce bit-identical `RunStats`:

* ``"fast"``: arrivals are drawn as arrays and fed to `run_arrays`, taken
  from the compiled `_kernel` extension when it is importable and from
  `_kernel_py` otherwise;
* ``"events"``: the event-calendar model (`Calendar` + `Switch` + `Source`)
  with optional invariant checks and per-packet traces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernel_py
from .engine import Calendar, ConfigError, EventKind, RngStreams
from .metrics import ClassStats, Collector, RunStats, finalize_run
from .switch import (DEFAULT_BUFFER_BYTES, DEFAULT_LINK_RATE, Packet, Switch,
                     TrafficClass)
from .traffic import (Source, TrafficClassConfig, draw_arrivals, hp_default,
                      lp_default, serialization_times)

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNELS = {"python": _kernel_py.run_arrays}
if _compiled is not None:
    KERNELS["compiled"] = _compiled.run_arrays
KERNEL = "compiled" if _compiled is not None else "python"


@dataclass(frozen=True)
class RunPlan:
    """Everything that defines a run except the seed."""

    hp: TrafficClassConfig = field(default_factory=lambda: hp_default(0.4))
    lp: TrafficClassConfig = field(default_factory=lambda: lp_default(0.4))
    link_rate: int = DEFAULT_LINK_RATE
    hp_buffer: int = DEFAULT_BUFFER_BYTES
    lp_buffer: int = DEFAULT_BUFFER_BYTES
    hp_budget: int = 40_000
    lp_budget: int = 40_000

    def __post_init__(self):
        if self.link_rate <= 0:
            raise ConfigError("link rate must be > 0")
        if self.hp_budget < 0 or self.lp_budget < 0:
            raise ConfigError("packet budgets must be >= 0")

    def config_for(self, cls: TrafficClass) -> TrafficClassConfig:
        return self.hp if cls is TrafficClass.HP else self.lp

    def budget_for(self, cls: TrafficClass) -> int:
        return self.hp_budget if cls is TrafficClass.HP else self.lp_budget


def simulate(plan: RunPlan, seed: int, path: str = "fast", kernel: str | None = None) -> RunStats:
    if path == "fast":
        return run_fast(plan, seed, kernel)
    if path == "events":
        return run_events(plan, seed)[0]
    raise ConfigError(f"unknown simulation path {path!r}")


def run_fast(plan: RunPlan, seed: int, kernel: str | None = None, return_starts: bool = False):
    streams = RngStreams.from_seed(seed)
    arrivals = {cls: draw_arrivals(plan.config_for(cls), streams, plan.link_rate,
                                   plan.budget_for(cls))
                for cls in TrafficClass}
    hp, lp = arrivals[TrafficClass.HP], arrivals[TrafficClass.LP]
    run_arrays = KERNELS[kernel or KERNEL]
    hp_start, lp_start, counters, end = run_arrays(
        hp.times, hp.sizes, serialization_times(hp.sizes, plan.link_rate),
        lp.times, lp.sizes, serialization_times(lp.sizes, plan.link_rate),
        plan.hp_buffer, plan.lp_buffer)

    classes = []
    for cls, arr, cnt in zip(TrafficClass, (hp, lp), counters):
        departed, dropped, lat_sum, lat_min, lat_max, area = (int(v) for v in cnt)
        n = len(arr)
        classes.append(ClassStats(
            cls, generated=n, departed=departed, dropped=dropped, latency_sum=lat_sum,
            latency_min=lat_min if departed else None,
            latency_max=lat_max if departed else None,
            queue_area=area, offered_bits=8 * int(arr.sizes.sum()),
            first_arrival=int(arr.times[0]) if n else None,
            last_arrival=int(arr.times[-1]) if n else None,
            link_rate=plan.link_rate))
    run = RunStats(seed, classes[0], classes[1], int(end), plan)
    if return_starts:
        return run, arrivals, (np.asarray(hp_start), np.asarray(lp_start))
    return run


_ARRIVAL_KIND = {TrafficClass.HP: EventKind.HP_ARRIVAL, TrafficClass.LP: EventKind.LP_ARRIVAL}


def run_events(plan: RunPlan, seed: int, check: bool = False, trace: bool = False):
    """Event-calendar run. Returns (RunStats, packets) where packets is the
    list of every generated packet when `trace` is set, else None."""
    streams = RngStreams.from_seed(seed)
    calendar = Calendar()
    collector = Collector(plan.link_rate)
    switch = Switch(calendar, collector, plan.link_rate, plan.hp_buffer, plan.lp_buffer,
                    check=check)
    sources = {cls: Source(plan.config_for(cls), streams, plan.link_rate,
                           plan.budget_for(cls))
               for cls in TrafficClass}
    ids = itertools.count()
    packets = [] if trace else None

    def emit(cls):
        nxt = sources[cls].next()
        if nxt is None:
            calendar.schedule(calendar.now, EventKind.GENERATOR_STOP, cls)
            return
        time, size = nxt
        packet = Packet(next(ids), cls, size, time)
        if trace:
            packets.append(packet)
        calendar.schedule(time, _ARRIVAL_KIND[cls], packet)

    for cls in TrafficClass:
        emit(cls)

    last = -1
    while (event := calendar.next_event()) is not None:
        if check:
            assert event.time >= last
            last = event.time
        if event.kind is EventKind.SERVICE_COMPLETION:
            switch.on_service_complete(event.payload)
        elif event.kind is EventKind.GENERATOR_STOP:
            continue
        else:
            packet = event.payload
            collector.for_class(packet.cls).record_arrival(packet)
            switch.on_arrival(packet)
            emit(packet.cls)
        if check:
            _check_conservation(collector, switch)

    run = finalize_run(collector, list(sources.values()), switch, seed, plan)
    return run, packets


def _check_conservation(collector, switch):
    busy = switch.in_service
    for cls in TrafficClass:
        s = collector.for_class(cls).s
        queue = switch.queue_for(cls)
        in_service = int(busy is not None and busy.cls is cls)
        assert s.generated == s.departed + queue.dropped + len(queue) + in_service, cls
