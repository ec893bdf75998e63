"""HP and LP packet sources: load-to-rate conversion, arrival gaps, size draws."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .engine import (ConfigError, RngStreams, exp_sample, exp_samples,
                     uniform_int, uniform_ints)
from .switch import TrafficClass, serialization_time


class ArrivalMode(str, Enum):
    POISSON = "poisson"
    SHAPED = "shaped"


@dataclass(frozen=True)
class Fixed:
    size: int

    def __post_init__(self):
        if self.size <= 0:
            raise ConfigError(f"packet size must be > 0, got {self.size}")

    @property
    def mean(self) -> float:
        return float(self.size)

    @property
    def second_moment(self) -> float:
        return float(self.size) ** 2

    @property
    def max_size(self) -> int:
        return self.size


@dataclass(frozen=True)
class DiscreteUniform:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo <= 0:
            raise ConfigError(f"packet size must be > 0, got {self.lo}")
        if self.lo > self.hi:
            raise ConfigError(f"size bounds reversed: {self.lo} > {self.hi}")

    @property
    def mean(self) -> float:
        return (self.lo + self.hi) / 2

    @property
    def second_moment(self) -> float:
        # E[B^2] = Var + mean^2, Var = (n^2 - 1)/12 for n equally likely integers
        n = self.hi - self.lo + 1
        return (n * n - 1) / 12 + self.mean ** 2

    @property
    def max_size(self) -> int:
        return self.hi


SizeModel = Fixed | DiscreteUniform


@dataclass(frozen=True)
class TrafficClassConfig:
    cls: TrafficClass
    load: float
    size_model: SizeModel
    arrival_mode: ArrivalMode = ArrivalMode.POISSON

    def __post_init__(self):
        if not 0 <= self.load < 1:
            raise ConfigError(f"load must be in (0,1), got {self.load}")

    def rate(self, link_rate: int) -> float:
        return load_to_rate(self.load, link_rate, self.size_model.mean)


def hp_default(load: float) -> TrafficClassConfig:
    return TrafficClassConfig(TrafficClass.HP, load, Fixed(1200), ArrivalMode.SHAPED)


def lp_default(load: float) -> TrafficClassConfig:
    return TrafficClassConfig(TrafficClass.LP, load, DiscreteUniform(40, 1500),
                              ArrivalMode.POISSON)


def load_to_rate(load: float, link_capacity: float, mean_size: float) -> float:
    """Packets per second that offer `load` of a link of `link_capacity` bit/s."""
    if not 0 < load < 1:
        raise ConfigError(f"load must be in (0,1), got {load}")
    if link_capacity <= 0 or mean_size <= 0:
        raise ConfigError("link capacity and mean size must be > 0")
    return load * link_capacity / (8 * mean_size)


@dataclass
class GeneratorState:
    next_arrival: int = 0
    packets_emitted: int = 0
    packets_budget: int = 40_000
    last_size: int = 0

    @property
    def exhausted(self) -> bool:
        return self.packets_emitted >= self.packets_budget


def next_hp_arrival(state: GeneratorState, streams: RngStreams, rate: float,
                    min_spacing: int = 0, size: int = 1200):
    """Advance the HP source by one packet.

    Returns the arrival time, or None once the budget is spent. A
    ``min_spacing`` of zero is plain Poisson; a positive value floors every
    gap (shaped mode).
    """
    if state.exhausted:
        return None
    gap = max(exp_sample(streams.hp_arrivals, rate), min_spacing)
    state.next_arrival += gap
    state.packets_emitted += 1
    state.last_size = size
    return state.next_arrival


def next_lp_arrival(state: GeneratorState, streams: RngStreams, rate: float,
                    lo: int = 40, hi: int = 1500):
    """Advance the LP source by one Poisson arrival; returns (time, size) or None."""
    if state.exhausted:
        return None
    state.next_arrival += exp_sample(streams.lp_arrivals, rate)
    state.packets_emitted += 1
    size = uniform_int(streams.lp_sizes, lo, hi)
    state.last_size = size
    return state.next_arrival, size


class Source:
    """Packet-by-packet generator for one class, used by the event-driven path.

    Consumes the random streams in the same order as `draw_arrivals`, so both
    produce identical (time, size) sequences for a seed.
    """

    def __init__(self, config: TrafficClassConfig, streams: RngStreams,
                 link_rate: int, budget: int):
        self.config = config
        self.link_rate = link_rate
        self.state = GeneratorState(packets_budget=budget if config.load > 0 else 0)
        self.rate = config.rate(link_rate) if config.load > 0 else 0.0
        if config.cls is TrafficClass.HP:
            self._gaps, self._sizes = streams.hp_arrivals, streams.hp_sizes
        else:
            self._gaps, self._sizes = streams.lp_arrivals, streams.lp_sizes
        self.first_arrival = None
        self.offered_bits = 0

    def _draw_size(self):
        model = self.config.size_model
        if isinstance(model, Fixed):
            return model.size
        return uniform_int(self._sizes, model.lo, model.hi)

    def next(self):
        """(arrival time, size) of the next packet, or None when exhausted."""
        state = self.state
        if state.exhausted:
            return None
        gap = exp_sample(self._gaps, self.rate)
        size = self._draw_size()
        if self.config.arrival_mode is ArrivalMode.SHAPED:
            # the previous packet must have cleared the ingress link
            prev = state.last_size if state.packets_emitted else size
            gap = max(gap, serialization_time(prev, self.link_rate))
        state.next_arrival += gap
        state.packets_emitted += 1
        state.last_size = size
        if self.first_arrival is None:
            self.first_arrival = state.next_arrival
        self.offered_bits += 8 * size
        return state.next_arrival, size


@dataclass
class Arrivals:
    times: np.ndarray
    sizes: np.ndarray

    def __len__(self):
        return len(self.times)


def draw_arrivals(config: TrafficClassConfig, streams: RngStreams, link_rate: int,
                  budget: int) -> Arrivals:
    """All arrivals of one class for a run, as int64 arrays (ps, bytes)."""
    if config.load == 0 or budget == 0:
        empty = np.zeros(0, dtype=np.int64)
        return Arrivals(empty, empty.copy())
    if config.cls is TrafficClass.HP:
        gap_stream, size_stream = streams.hp_arrivals, streams.hp_sizes
    else:
        gap_stream, size_stream = streams.lp_arrivals, streams.lp_sizes
    gaps = exp_samples(gap_stream, config.rate(link_rate), budget)
    model = config.size_model
    if isinstance(model, Fixed):
        sizes = np.full(budget, model.size, dtype=np.int64)
    else:
        sizes = uniform_ints(size_stream, model.lo, model.hi, budget)
    if config.arrival_mode is ArrivalMode.SHAPED:
        prev = np.concatenate((sizes[:1], sizes[:-1]))
        spacing = serialization_times(prev, link_rate)
        gaps = np.maximum(gaps, spacing)
    return Arrivals(np.cumsum(gaps), sizes)


def serialization_times(sizes: np.ndarray, link_rate: int) -> np.ndarray:
    bits_ps = sizes.astype(np.int64) * (8 * 10**12)
    return (bits_ps + link_rate // 2) // link_rate


def effective_load(arrivals: Arrivals, link_rate: int) -> float | None:
    """Measured offered load: generated bits over the arrival span, per link capacity."""
    if len(arrivals) < 2:
        return None
    span = int(arrivals.times[-1] - arrivals.times[0])
    if span <= 0:
        return None
    return float(arrivals.sizes.sum()) * 8 * 10**12 / span / link_rate
