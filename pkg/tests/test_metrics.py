import math
import statistics

import pytest
from hypothesis import given, strategies as st

from prioswitch.engine import Calendar, ConfigError
from prioswitch.metrics import (ClassCollector, ClassStats, Collector, RunStats, aggregate,
                                estimate, finalize_run, t_quantile)
from prioswitch.switch import Packet, Switch, TrafficClass

HP, LP = TrafficClass.HP, TrafficClass.LP
NS = 1000


def departed(wait, cls=HP):
    return Packet(0, cls, 100, 1000, 1000 + wait, 1000 + wait + 80)


def test_latency_summary():
    c = ClassCollector(HP, 10**10)
    for w in (0, 100 * NS, 200 * NS):
        c.record_departure(departed(w))
    assert c.s.mean_latency == 100 * NS
    assert c.s.pdv == 200 * NS


def test_single_departure_pdv_zero():
    c = ClassCollector(LP, 10**10)
    c.record_departure(departed(5 * NS, LP))
    assert c.s.pdv == 0


def test_no_departures_is_absent():
    s = ClassStats(HP)
    assert s.mean_latency is None and s.pdv is None and s.latency_min is None


def test_unset_timestamps_rejected():
    with pytest.raises(RuntimeError):
        ClassCollector(HP, 10**10).record_departure(Packet(0, HP, 100, 0))


@given(st.lists(st.integers(0, 10**13), min_size=1, max_size=200))
def test_streaming_mean_matches_batch(waits):
    c = ClassCollector(LP, 10**10)
    for w in waits:
        c.record_departure(departed(w, LP))
    assert abs(c.s.mean_latency - statistics.fmean(waits)) <= 1
    assert c.s.latency_min == min(waits) and c.s.latency_max == max(waits)


def test_plr():
    assert ClassStats(HP, generated=10, departed=8, dropped=2).plr == 0.2
    assert ClassStats(LP, generated=40_000, departed=39_996, dropped=4).plr == 0.0001
    assert ClassStats(HP, generated=40_000, departed=40_000).plr == 0


class _Gen:
    def __init__(self, exhausted):
        self.state = type("S", (), {"exhausted": exhausted})()


def test_finalize_requires_drained_state():
    cal = Calendar()
    col = Collector(10**10)
    sw = Switch(cal, col)
    sw.hp.offer(Packet(0, HP, 100, 0))
    with pytest.raises(RuntimeError):
        finalize_run(col, [_Gen(True)], sw, 1)
    with pytest.raises(RuntimeError):
        finalize_run(Collector(10**10), [_Gen(False)], Switch(Calendar(), col), 1)


def run_with(seed, value, plan="p"):
    s = ClassStats(HP, generated=10, departed=10, latency_sum=int(value * 10 * NS),
                   latency_min=0, latency_max=int(value * NS))
    return RunStats(seed, s, ClassStats(LP), 0, plan)


def test_identical_runs_zero_half_width():
    agg = aggregate([run_with(s, 3.0) for s in range(10)])
    est = agg[HP]["pdv_ns"]
    assert est.mean == 3.0 and est.half_width == 0.0


def test_one_to_ten():
    values = list(range(1, 11))
    # oracle: hand formula with the tabulated t(0.975, 9) = 2.262
    sd = math.sqrt(sum((v - 5.5) ** 2 for v in values) / 9)
    assert sd == pytest.approx(3.02765, abs=1e-5)
    est = estimate(values)
    assert est.mean == 5.5
    assert est.half_width == pytest.approx(2.262 * sd / math.sqrt(10), abs=1e-3)
    assert est.half_width == pytest.approx(2.166, abs=1e-3)
    assert t_quantile(10) == pytest.approx(2.262, abs=5e-4)


def test_aggregate_rejects_bad_input():
    with pytest.raises(ConfigError):
        aggregate([run_with(1, 1.0)])
    with pytest.raises(ConfigError):
        aggregate([run_with(1, 1.0, "a"), run_with(2, 1.0, "b")])
    with pytest.raises(ConfigError):
        aggregate([run_with(1, 1.0), run_with(1, 2.0)])


def test_aggregate_order_independent():
    runs = [run_with(s, float(s % 7)) for s in (907, 234, 326, 104, 711)]
    a = aggregate(runs)
    b = aggregate(list(reversed(runs)))
    assert a[HP].metrics == b[HP].metrics
    assert a[HP].seeds == (104, 234, 326, 711, 907)


def test_absent_metric_aggregates_to_absent():
    agg = aggregate([run_with(1, 1.0), run_with(2, 2.0)])
    assert agg[LP]["mean_latency_ns"].mean is None
