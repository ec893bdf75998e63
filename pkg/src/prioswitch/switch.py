"""Output port with two byte-bounded FIFO queues and a non-preemptive
strict-priority transmitter."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .engine import PS_PER_SECOND, Calendar, ConfigError, EventKind

DEFAULT_LINK_RATE = 10 * 10**9
DEFAULT_BUFFER_BYTES = 16 * 2**20


class TrafficClass(str, Enum):
    HP = "HP"
    LP = "LP"


def serialization_time(size: int, rate: int) -> int:
    """Time in ps to clock `size` bytes onto a `rate` bit/s link.

    Exact whenever 8e12 * size is a multiple of rate (all integer sizes at
    1, 10, 25, 40 or 100 Gb/s); otherwise rounded to the nearest ps.
    """
    if size <= 0 or rate <= 0:
        raise ConfigError(f"size and rate must be > 0 (size={size}, rate={rate})")
    return (size * 8 * PS_PER_SECOND + rate // 2) // rate


@dataclass(slots=True)
class Packet:
    id: int
    cls: TrafficClass
    size: int
    arrival: int
    service_start: int | None = None
    departure: int | None = None

    @property
    def wait(self) -> int:
        return self.service_start - self.arrival


class ByteQueue:
    """FIFO bounded by total bytes; tail-drops whole packets that don't fit."""

    def __init__(self, capacity: int = DEFAULT_BUFFER_BYTES):
        if capacity <= 0:
            raise ConfigError(f"buffer capacity must be > 0, got {capacity}")
        self.capacity = capacity
        self.fifo = deque()
        self.bytes_used = 0
        self.dropped = 0

    def __len__(self):
        return len(self.fifo)

    def offer(self, packet: Packet) -> bool:
        if self.bytes_used + packet.size > self.capacity:
            self.dropped += 1
            return False
        self.fifo.append(packet)
        self.bytes_used += packet.size
        return True

    def pop(self) -> Packet:
        packet = self.fifo.popleft()
        self.bytes_used -= packet.size
        return packet


class Switch:
    """The switch under test, driven by a `Calendar`.

    `collector` receives `record_departure(packet)` for each transmitted
    packet and `observe(now, n_hp, n_lp)` before every state change so it can
    integrate queue occupancy. With `check=True` every transition asserts the
    scheduling invariants (work conservation, byte accounting,
    non-preemption).
    """

    def __init__(self, calendar: Calendar, collector, link_rate: int = DEFAULT_LINK_RATE,
                 hp_capacity: int = DEFAULT_BUFFER_BYTES,
                 lp_capacity: int = DEFAULT_BUFFER_BYTES, check: bool = False):
        self.calendar = calendar
        self.collector = collector
        self.link_rate = link_rate
        self.hp = ByteQueue(hp_capacity)
        self.lp = ByteQueue(lp_capacity)
        self.in_service: Packet | None = None
        self.completion_time: int | None = None
        self.check = check
        self._last_departure = 0

    def queue_for(self, cls: TrafficClass) -> ByteQueue:
        return self.hp if cls is TrafficClass.HP else self.lp

    @property
    def idle(self) -> bool:
        return self.in_service is None

    @property
    def drained(self) -> bool:
        return self.idle and not self.hp and not self.lp

    def _observe(self):
        self.collector.observe(self.calendar.now, len(self.hp), len(self.lp))

    def on_arrival(self, packet: Packet):
        now = self.calendar.now
        if packet.arrival != now:
            raise RuntimeError(f"packet {packet.id} arrives at {packet.arrival}, clock {now}")
        self._observe()
        self.queue_for(packet.cls).offer(packet)
        if self.idle:
            self.start_service()
        if self.check:
            self._check_state()

    def start_service(self):
        if not self.idle:
            raise RuntimeError("start_service while transmitter busy")
        if self.hp:
            packet = self.hp.pop()
        elif self.lp:
            packet = self.lp.pop()
        else:
            return
        now = self.calendar.now
        if self.check:
            # non-preemption: the previous transmission has ended
            assert now >= self._last_departure
        packet.service_start = now
        self.in_service = packet
        self.completion_time = now + serialization_time(packet.size, self.link_rate)
        self.calendar.schedule(self.completion_time, EventKind.SERVICE_COMPLETION, packet)

    def on_service_complete(self, packet: Packet):
        if packet is not self.in_service or self.calendar.now != self.completion_time:
            raise RuntimeError(f"completion for packet {packet.id} which is not in service")
        self._observe()
        packet.departure = self.calendar.now
        self._last_departure = packet.departure
        self.in_service = None
        self.completion_time = None
        self.collector.record_departure(packet)
        self.start_service()
        if self.check:
            self._check_state()

    def _check_state(self):
        if self.idle:
            assert not self.hp and not self.lp, "transmitter idle while packets wait"
        for q in (self.hp, self.lp):
            assert q.bytes_used == sum(p.size for p in q.fifo) <= q.capacity
