"""Mean waiting times of a two-class non-preemptive priority M/G/1 queue
(Cobham's formulas), used to cross-check the simulator in Poisson mode."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import ConfigError
from .traffic import load_to_rate


@dataclass(frozen=True)
class ClassMoments:
    lam: float  # arrivals per second
    es: float  # E[S], seconds
    es2: float  # E[S^2], seconds^2

    def __post_init__(self):
        if self.lam < 0 or self.es < 0:
            raise ConfigError("arrival rate and service time must be >= 0")
        if self.es2 < self.es ** 2 * (1 - 1e-12):
            raise ConfigError("second moment below squared mean")

    @property
    def rho(self) -> float:
        return self.lam * self.es


@dataclass(frozen=True)
class OracleResult:
    w0: float
    w_hp: float
    w_lp: float
    stable: bool


def _moments(mean_bytes, second_bytes, rate, load):
    if rate <= 0:
        raise ConfigError(f"link rate must be > 0, got {rate}")
    per_byte = 8 / rate
    lam = load_to_rate(load, rate, mean_bytes) if load > 0 else 0.0
    return ClassMoments(lam, mean_bytes * per_byte, second_bytes * per_byte ** 2)


def fixed_moments(size: int, rate: float, load: float) -> ClassMoments:
    return _moments(float(size), float(size) ** 2, rate, load)


def lp_moments_uniform(lo: int, hi: int, rate: float, load: float) -> ClassMoments:
    """Service-time moments for sizes uniform on the integers lo..hi."""
    if lo > hi or lo <= 0:
        raise ConfigError(f"invalid size bounds [{lo}, {hi}]")
    n = hi - lo + 1
    mean = (lo + hi) / 2
    second = (n * n - 1) / 12 + mean * mean
    return _moments(mean, second, rate, load)


def nonpreemptive_priority_waits(hp: ClassMoments, lp: ClassMoments) -> OracleResult:
    """Mean queueing delays (seconds) for HP and LP; inf where unstable."""
    w0 = (hp.lam * hp.es2 + lp.lam * lp.es2) / 2
    s_hp = 1 - hp.rho
    s_all = s_hp - lp.rho
    w_hp = w0 / s_hp if s_hp > 0 else math.inf
    w_lp = w0 / (s_hp * s_all) if s_all > 0 else math.inf
    return OracleResult(w0, w_hp, w_lp, stable=s_all > 0)
