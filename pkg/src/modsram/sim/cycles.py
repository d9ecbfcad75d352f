"""Cycle schedule, analytic models and the per-run report."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from ..errors import DomainError, UnsupportedModel

BPNTT_CYCLES_256 = 1465
DEFAULT_FREQ_MHZ = 420.0


@dataclass(frozen=True)
class CycleConfig:
    """Per-phase cycle charges.

    The default schedule spends six cycles per radix-4 iteration and skips the
    overflow latch on the last one, giving ``6 * ceil(n/2) - 1`` main-loop
    cycles. Load and finalization are counted apart from the main loop.
    """

    shift_encode: int = 1
    imc_radix4: int = 1
    writeback_radix4: int = 1
    imc_overflow: int = 1
    writeback_overflow: int = 1
    overflow_latch: int = 1
    skip_final_latch: bool = True
    load: int = 1
    load_condition: int = 1
    finalize_add: int = 1
    finalize_subtract: int = 1
    freq_mhz: float = DEFAULT_FREQ_MHZ

    def iteration_costs(self) -> tuple[int, ...]:
        return (self.shift_encode, self.imc_radix4, self.writeback_radix4,
                self.imc_overflow, self.writeback_overflow, self.overflow_latch)


def cycle_model(n: int) -> int:
    """Analytic main-loop cycles, ``3n - 1``; odd ``n`` is padded to even."""
    if n < 2:
        raise DomainError("cycle model needs n >= 2")
    n += n & 1
    return 3 * n - 1


def baseline_cycles(model: str, n: int) -> int:
    if n < 2:
        raise DomainError("baseline models need n >= 2")
    if model == "mentt":
        return (n + 1) ** 2
    if model == "bpntt":
        if n != 256:
            raise UnsupportedModel("BP-NTT figure exists only for n = 256")
        return BPNTT_CYCLES_256
    raise UnsupportedModel(f"unknown baseline {model!r}")


def latency_estimate(cycles: int, freq_mhz: float) -> float:
    """Microseconds for ``cycles`` at ``freq_mhz``."""
    if freq_mhz <= 0:
        raise DomainError("frequency must be positive")
    return cycles / freq_mhz


def baselines(n: int) -> dict:
    out = {"mentt": baseline_cycles("mentt", n), "bpntt": None}
    if n == 256:
        out["bpntt"] = baseline_cycles("bpntt", n)
    return out


@dataclass(frozen=True)
class CycleReport:
    n: int
    iterations: int
    cycles_total: int
    cycles_finalize: int
    cycles_load: int
    model_cycles: int
    baselines: dict
    latency_us: float
    phases: dict = field(default_factory=dict)

    @classmethod
    def build(cls, n, iterations, cycles_total, cycles_finalize, cycles_load, phases,
              freq_mhz=DEFAULT_FREQ_MHZ) -> CycleReport:
        return cls(
            n=n,
            iterations=iterations,
            cycles_total=cycles_total,
            cycles_finalize=cycles_finalize,
            cycles_load=cycles_load,
            model_cycles=cycle_model(n),
            baselines=baselines(n),
            latency_us=latency_estimate(cycles_total, freq_mhz),
            phases=dict(sorted(phases.items())),
        )

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)
