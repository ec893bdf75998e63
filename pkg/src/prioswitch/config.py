"""Experiment configuration: a line-based ``key = value`` file.

Lists are space separated, ``#`` starts a comment, and any key left out
keeps its default (the reference setup: 10 Gb/s link, 1200 B shaped HP
packets, 40-1500 B Poisson LP packets, 16 MiB buffers, 40,000 packets per
class, ten seeds)::

    hp_load = 0.3
    lp_load = 0.4 0.45
    sweep = 0.1 0.2 0.3
    seeds = 907 234 326
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .engine import ConfigError
from .simulation import RunPlan
from .switch import DEFAULT_BUFFER_BYTES, DEFAULT_LINK_RATE, TrafficClass
from .traffic import ArrivalMode, DiscreteUniform, Fixed, TrafficClassConfig

PAPER_SEEDS = (907, 234, 326, 104, 711, 523, 883, 113, 417, 656)
PAPER_SWEEP = tuple(round(0.1 + 0.05 * i, 2) for i in range(11))
PAPER_LP_LOADS = (0.4, 0.45)
VALIDATION_POINTS = ((0.2, 0.3), (0.4, 0.4), (0.5, 0.0))


class ConfigParseError(ConfigError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    link_rate: int = DEFAULT_LINK_RATE
    hp_load: float = 0.4
    lp_load: tuple = PAPER_LP_LOADS
    hp_size: int = 1200
    lp_size_min: int = 40
    lp_size_max: int = 1500
    hp_arrivals: ArrivalMode = ArrivalMode.SHAPED
    lp_arrivals: ArrivalMode = ArrivalMode.POISSON
    buffer_bytes: int = DEFAULT_BUFFER_BYTES
    packets_per_class: int = 40_000
    seeds: tuple = PAPER_SEEDS
    sweep: tuple | None = None
    validate_points: tuple = VALIDATION_POINTS

    def __post_init__(self):
        if self.link_rate <= 0:
            raise ConfigError("link_rate must be > 0")
        for load in (self.hp_load, *self.lp_load, *(self.sweep or ())):
            _check_load(load)
        if not self.lp_load:
            raise ConfigError("lp_load needs at least one value")
        if not self.seeds:
            raise ConfigError("seeds must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        if self.sweep is not None and list(self.sweep) != sorted(self.sweep):
            raise ConfigError("sweep loads must be sorted ascending")
        for hp, lp in self.validate_points:
            if not (0 <= hp < 1 and 0 <= lp < 1) or hp + lp == 0:
                raise ConfigError(f"bad validation point {hp}:{lp}")
        if self.hp_size <= 0 or not 0 < self.lp_size_min <= self.lp_size_max:
            raise ConfigError("packet sizes must be positive with lp_size_min <= lp_size_max")
        if self.buffer_bytes <= 0 or self.packets_per_class <= 0:
            raise ConfigError("buffer_bytes and packets_per_class must be > 0")

    @property
    def sweep_loads(self) -> tuple:
        return self.sweep if self.sweep is not None else PAPER_SWEEP

    def plan(self, hp_load: float, lp_load: float, **overrides) -> RunPlan:
        hp = TrafficClassConfig(TrafficClass.HP, hp_load, Fixed(self.hp_size), self.hp_arrivals)
        lp = TrafficClassConfig(TrafficClass.LP, lp_load,
                                DiscreteUniform(self.lp_size_min, self.lp_size_max),
                                self.lp_arrivals)
        kwargs = dict(hp=hp, lp=lp, link_rate=self.link_rate,
                      hp_buffer=self.buffer_bytes, lp_buffer=self.buffer_bytes,
                      hp_budget=self.packets_per_class, lp_budget=self.packets_per_class)
        kwargs.update(overrides)
        return RunPlan(**kwargs)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


def _check_load(load):
    if not 0 < load < 1:
        raise ConfigError("load must be in (0,1)")


def _number(text: str) -> float:
    return float(text)


def _integer(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _mode(text: str) -> ArrivalMode:
    try:
        return ArrivalMode(text.lower())
    except ValueError:
        raise ValueError(f"arrival mode must be shaped or poisson, got {text!r}") from None


def _pair(text: str) -> tuple:
    hp, sep, lp = text.partition(":")
    if not sep:
        raise ValueError(f"validation point {text!r} must look like HP:LP")
    return float(hp), float(lp)


def _listof(conv):
    return lambda text: tuple(conv(tok) for tok in text.split())


PARSERS = {
    "link_rate": _integer,
    "hp_load": _number,
    "lp_load": _listof(_number),
    "hp_size": _integer,
    "lp_size_min": _integer,
    "lp_size_max": _integer,
    "hp_arrivals": _mode,
    "lp_arrivals": _mode,
    "buffer_bytes": _integer,
    "packets_per_class": _integer,
    "seeds": _listof(_integer),
    "sweep": _listof(_number),
    "validate_points": _listof(_pair),
}


def parse_seeds(text: str) -> tuple:
    return tuple(_integer(tok) for tok in text.replace(",", " ").split())


def parse_text(text: str, source: str = "<config>") -> ExperimentConfig:
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        where = f"{source}:{lineno}"
        if not sep:
            raise ConfigParseError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        if key not in PARSERS:
            raise ConfigParseError(f"{where}: unknown key {key!r}")
        if key in values:
            raise ConfigParseError(f"{where}: duplicate key {key!r}")
        try:
            values[key] = PARSERS[key](value)
        except ValueError as exc:
            raise ConfigParseError(f"{where}: {key}: {exc}") from None
        lines[key] = lineno

    try:
        return ExperimentConfig(**values)
    except ConfigError as exc:
        error = exc
    # name the first line that is invalid on its own, else the last one read
    culprit = max(lines, key=lines.get)
    for key in sorted(lines, key=lines.get):
        try:
            ExperimentConfig(**{key: values[key]})
        except ConfigError:
            culprit = key
            break
    raise ConfigParseError(f"{source}:{lines[culprit]}: {error}") from None


def parse_config(path) -> ExperimentConfig:
    path = Path(path)
    return parse_text(path.read_text(), str(path))
