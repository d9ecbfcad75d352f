"""Operand loading, microprogram dispatch and finalization."""
from __future__ import annotations

import os

from ..arith import FieldElement, Modulus, check_same_modulus
from ..errors import ConfigurationError
from . import _kernel_py
from .cycles import CycleConfig, CycleReport
from .sram import RADIX4_ROW_ORDER, NearMemState, Phase, SramModel, WordlineMap

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

if os.environ.get("MODSRAM_PURE_PYTHON"):
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def _host_tables(b: int, m: Modulus) -> tuple[list[int], list[int]]:
    # host-side precompute, written once per (multiplicand, modulus)
    p = m.p
    radix4 = [d * b % p for d in RADIX4_ROW_ORDER]
    overflow = [(k << (m.n + 1)) % p for k in range(8)]
    return radix4, overflow


def load_operands(a: FieldElement, b: FieldElement, m: Modulus | None = None,
                  cols: int | None = None, strict: bool = False,
                  wordlines: WordlineMap | None = None,
                  cfg: CycleConfig | None = None) -> tuple[SramModel, NearMemState]:
    """Build an array holding the operands and both tables.

    ``cols`` defaults to ``n`` in strict mode and ``n + 1`` otherwise. The
    multiplier is fetched into its register here; when its top bit would read
    as a Booth sign it is conditioned to ``a - p`` by the near-memory
    subtractor.
    """
    m = a.modulus if m is None else m
    check_same_modulus(m, a, b)
    cfg = cfg or CycleConfig()
    n = m.n
    if cols is None:
        cols = n if strict else n + 1
    need = n if strict else n + 1
    if cols < need:
        mode = "strict" if strict else "default"
        raise ConfigurationError(f"n={n} needs {need} columns in {mode} mode, array has {cols}")
    sram = SramModel(cols, wordlines)
    wl = sram.map
    radix4, overflow = _host_tables(b.value, m)
    sram.write(wl.multiplicand, b.value)
    sram.write(wl.multiplier, a.value)
    sram.write(wl.modulus, m.p)
    for row, v in zip(wl.radix4_lut, radix4):
        sram.write(row, v)
    for row, v in zip(wl.overflow_lut, overflow):
        sram.write(row, v)
    for row in (wl.sum, wl.carry, wl.zero_row):
        sram.write(row, 0)
    iters = (n + 1) // 2
    state = NearMemState(n=n, iterations=iters)
    state.enter(Phase.LOAD)
    pattern_width = 2 * iters
    multiplier = sram.read(wl.multiplier)
    sram.tick(Phase.LOAD, cfg.load)
    if multiplier >> (pattern_width - 1):
        multiplier = (multiplier - sram.read(wl.modulus)) % (1 << pattern_width)
        sram.tick(Phase.LOAD, cfg.load_condition)
    state.ff_multiplier = multiplier << 1
    return sram, state


def finalize(sram: SramModel, state: NearMemState, m: Modulus, cfg: CycleConfig) -> int:
    """Near-memory carry-propagating add of sum and carry, then reduction."""
    state.enter(Phase.FINALIZE)
    wl = sram.map
    s = sram.read(wl.sum)
    c = sram.read(wl.carry)
    if sram.cols <= state.n:
        s |= state.sum_msb << state.n
        c |= state.carry_msb << state.n
    total = s + c
    sram.tick(Phase.FINALIZE, cfg.finalize_add)
    p = sram.read(wl.modulus)
    steps = 0
    while total >= p:
        total -= p
        steps += 1
        sram.tick(Phase.FINALIZE, cfg.finalize_subtract)
    assert steps <= 7
    state.enter(Phase.DONE)
    return total


def run_loop(sram, state, cfg, log=None, backend: str | None = None):
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise ConfigurationError("compiled kernel is not available")
        if log is None and _compiled.supports(sram, state):
            return _compiled.run_iterations(sram, state, cfg)
    elif backend != "python":
        raise ConfigurationError(f"unknown backend {backend!r}")
    return _kernel_py.run_iterations(sram, state, cfg, log)


def sim_modmul(a: FieldElement, b: FieldElement, m: Modulus | None = None,
               cfg: CycleConfig | None = None, *, cols: int | None = None,
               strict: bool = False, wordlines: WordlineMap | None = None,
               log: list | None = None, backend: str | None = None,
               fault=None):
    """Run one multiplication on a fresh simulated array.

    Returns ``(result, report, trace)``. Pass a list as ``log`` to collect one
    record per cycle. ``fault`` is a test hook called with the loaded array
    before the main loop starts.
    """
    m = a.modulus if m is None else m
    cfg = cfg or CycleConfig()
    sram, state = load_operands(a, b, m, cols=cols, strict=strict, wordlines=wordlines, cfg=cfg)
    if fault is not None:
        fault(sram)
    load_cycles = sram.cycle_count
    trace = run_loop(sram, state, cfg, log, backend)
    loop_cycles = sram.cycle_count - load_cycles
    value = finalize(sram, state, m, cfg)
    finalize_cycles = sram.cycle_count - load_cycles - loop_cycles
    report = CycleReport.build(
        n=m.n,
        iterations=state.iterations,
        cycles_total=loop_cycles,
        cycles_finalize=finalize_cycles,
        cycles_load=load_cycles,
        phases=dict(sram.phase_cycles),
        freq_mhz=cfg.freq_mhz,
    )
    return FieldElement(value, m), report, trace
