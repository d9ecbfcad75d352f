"""Bit-level model of the in-SRAM modular multiplier."""
from .cycles import (
    CycleConfig,
    CycleReport,
    baseline_cycles,
    cycle_model,
    latency_estimate,
)
from .machine import BACKEND, available_backends, finalize, load_operands, sim_modmul
from .sram import NearMemState, Phase, SramModel, WordlineMap

__all__ = [
    "BACKEND", "CycleConfig", "CycleReport", "NearMemState", "Phase", "SramModel",
    "WordlineMap", "available_backends", "baseline_cycles", "cycle_model", "finalize",
    "latency_estimate", "load_operands", "sim_modmul",
]
