"""Pure-Python main-loop microprogram.

Same contract as the compiled ``_kernel.run_iterations``; this version also
supports strict-width geometry and a per-cycle event log.
"""
from __future__ import annotations

from ..engines import IterTrace
from ..errors import SimulatorFault
from .sram import NearMemState, Phase, SramModel


def _encode(window: int) -> int:
    # near-memory encoder: -2*a_{i+1} + a_i + a_{i-1}
    return -2 * (window >> 2 & 1) + (window >> 1 & 1) + (window & 1)


def run_iterations(sram: SramModel, state: NearMemState, cfg, log=None) -> list[IterTrace]:
    """Execute every radix-4 iteration of the loaded multiplication.

    Leaves the final sum and carry in their rows and in the near-memory
    registers; returns one :class:`IterTrace` per iteration.
    """
    wl = sram.map
    n = state.n
    width = n + 1
    mask = (1 << width) - 1
    strict = sram.cols < width
    row_mask = (1 << sram.cols) - 1
    iters = state.iterations
    reg_width = state.multiplier_width
    reg_mask = (1 << reg_width) - 1
    r4_rows = wl.radix4_rows_by_digit()
    ov_rows = wl.overflow_lut
    costs = cfg.iteration_costs()
    trace = []

    def tick(phase, rows=(), target=None, cost=1):
        if log is not None:
            for k in range(cost):
                log.append({
                    "cycle": sram.cycle_count + k,
                    "phase": phase.value,
                    "rows_activated": list(rows) if k == 0 else [],
                    "writeback_target": target if k == 0 else None,
                })
        sram.tick(phase, cost)

    def store(s, c):
        sram.write(wl.sum, s & row_mask)
        sram.write(wl.carry, c & row_mask)
        if strict:
            state.sum_msb = s >> n & 1
            state.carry_msb = c >> n & 1

    def imc(lut_row):
        xs, mj = sram.imc(wl.sum, wl.carry, lut_row)
        if strict:
            # table rows have no bit n, so the top column reduces to two inputs
            xs |= (state.sum_msb ^ state.carry_msb) << n
            mj |= (state.sum_msb & state.carry_msb) << n
        return xs, mj

    for j in range(iters):
        index = iters - 1 - j

        state.enter(Phase.SHIFT_ENCODE)
        digit = _encode(state.ff_multiplier >> (reg_width - 3))
        state.ff_multiplier = state.ff_multiplier << 2 & reg_mask
        s = state.ff_sum << 2
        c = state.ff_carry << 2
        state.ff_overflow = (s >> width) + (c >> width)
        state.ff_sum, state.ff_carry = s & mask, c & mask
        store(state.ff_sum, state.ff_carry)
        tick(Phase.SHIFT_ENCODE, (), "sum,carry", costs[0])

        state.enter(Phase.IMC_RADIX4)
        lut_row = r4_rows[digit]
        state.ff_sum, state.ff_carry = imc(lut_row)
        state.ff_overflow += state.ff_carry >> n & 1
        tick(Phase.IMC_RADIX4, (wl.sum, wl.carry, lut_row), None, costs[1])

        state.enter(Phase.WRITEBACK_RADIX4)
        state.ff_carry = state.ff_carry << 1 & mask
        pending = state.ff_sum >> n & state.ff_carry >> n & 1
        state.ff_overflow += pending
        store(state.ff_sum, state.ff_carry)
        tick(Phase.WRITEBACK_RADIX4, (), "sum,carry", costs[2])

        state.enter(Phase.IMC_OVERFLOW)
        ov_row = ov_rows[state.ff_overflow]
        state.ff_sum, state.ff_carry = imc(ov_row)
        tick(Phase.IMC_OVERFLOW, (wl.sum, wl.carry, ov_row), None, costs[3])

        state.enter(Phase.WRITEBACK_OVERFLOW)
        state.ff_carry <<= 1
        if state.ff_carry >> width != pending:
            raise SimulatorFault("overflow carry-out disagrees with the folded index")
        state.ff_carry &= mask
        store(state.ff_sum, state.ff_carry)
        state.check_widths()
        tick(Phase.WRITEBACK_OVERFLOW, (), "sum,carry", costs[4])

        trace.append(IterTrace(index, digit, state.ff_overflow, state.ff_sum, state.ff_carry))

        if j < iters - 1 or not cfg.skip_final_latch:
            state.enter(Phase.OVERFLOW_LATCH)
            tick(Phase.OVERFLOW_LATCH, (), None, costs[5])
    return trace
