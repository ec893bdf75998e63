"""Simulator of a non-preemptive strict-priority Ethernet switch port
carrying high-priority (HP) and low-priority (LP) traffic."""

from .engine import ConfigError
from .simulation import KERNEL, RunPlan, simulate
from .switch import TrafficClass

__all__ = ["ConfigError", "KERNEL", "RunPlan", "TrafficClass", "simulate"]
__version__ = "0.1.0"
