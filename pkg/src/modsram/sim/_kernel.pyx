# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled main-loop microprogram over packed 64-bit limbs.

Drop-in for ``_kernel_py.run_iterations`` on the default geometry (every
array row has a column for bit n). No per-cycle log.
"""
from libc.stdint cimport uint64_t
from libc.string cimport memcpy

from ..engines import IterTrace
from ..errors import SimulatorFault
from .sram import Phase

cdef enum:
    MAXL = 17
    NROWS = 64

MAX_BITS = 64 * (MAXL - 1)


cdef inline int getbit(const uint64_t* x, int pos) noexcept nogil:
    return <int>((x[pos >> 6] >> (pos & 63)) & 1)


cdef inline void shl(uint64_t* x, int k, int nl) noexcept nogil:
    cdef int i
    for i in range(nl - 1, 0, -1):
        x[i] = (x[i] << k) | (x[i - 1] >> (64 - k))
    x[0] <<= k


cdef inline void clip(uint64_t* x, int width, int nl) noexcept nogil:
    cdef int r = width & 63
    cdef int top = width >> 6
    cdef int i
    if r:
        x[top] &= ((<uint64_t>1) << r) - 1
        top += 1
    for i in range(top, nl):
        x[i] = 0


cdef void from_int(uint64_t* dst, object v, int nl):
    cdef bytes b = int(v).to_bytes(nl * 8, "little")
    memcpy(dst, <const char*>b, nl * 8)


cdef object to_int(const uint64_t* src, int nl):
    return int.from_bytes((<const char*>src)[:nl * 8], "little")


def supports(sram, state):
    return sram.cols >= state.n + 1 and state.multiplier_width <= MAX_BITS


def run_iterations(sram, state, cfg, log=None):
    if log is not None or not supports(sram, state):
        raise ValueError("compiled kernel needs default geometry and no cycle log")
    wl = sram.map
    cdef int n = state.n
    cdef int width = n + 1
    cdef int iters = state.iterations
    cdef int regw = state.multiplier_width
    cdef int nl = (max(width, regw) + 63) // 64 + 1
    cdef uint64_t rows[NROWS][MAXL]
    cdef uint64_t s[MAXL]
    cdef uint64_t c[MAXL]
    cdef uint64_t mj[MAXL]
    cdef uint64_t ffm[MAXL]
    cdef uint64_t x, y, z
    cdef int r, i, j, ovs, ovc, k, c1, pending, win, digit, lut_row, ov_row
    cdef int row_sum = wl.sum
    cdef int row_carry = wl.carry
    cdef int r4[5]
    cdef int ovr[8]
    cdef bint skip_latch = cfg.skip_final_latch
    cdef int cost_shift = cfg.shift_encode
    cdef int cost_imc1 = cfg.imc_radix4
    cdef int cost_wb1 = cfg.writeback_radix4
    cdef int cost_imc2 = cfg.imc_overflow
    cdef int cost_wb2 = cfg.writeback_overflow
    cdef int cost_latch = cfg.overflow_latch
    cdef int latches = 0

    if state.phase is not Phase.LOAD:
        raise SimulatorFault("main loop must start right after load")
    by_digit = wl.radix4_rows_by_digit()
    for i in range(5):
        r4[i] = by_digit[i - 2]
    for i in range(8):
        ovr[i] = wl.overflow_lut[i]
    for r in wl.all_rows():
        from_int(rows[r], sram.rows[r], nl)
    from_int(s, state.ff_sum, nl)
    from_int(c, state.ff_carry, nl)
    from_int(ffm, state.ff_multiplier, nl)

    digits = []
    indices = []
    sums = []
    carries = []
    for j in range(iters):
        # shift / encode
        win = (getbit(ffm, regw - 1) << 2) | (getbit(ffm, regw - 2) << 1) | getbit(ffm, regw - 3)
        digit = -2 * (win >> 2) + ((win >> 1) & 1) + (win & 1)
        shl(ffm, 2, nl)
        clip(ffm, regw, nl)
        ovs = (getbit(s, n) << 1) | getbit(s, n - 1)
        ovc = (getbit(c, n) << 1) | getbit(c, n - 1)
        shl(s, 2, nl)
        clip(s, width, nl)
        shl(c, 2, nl)
        clip(c, width, nl)
        memcpy(rows[row_sum], s, nl * 8)
        memcpy(rows[row_carry], c, nl * 8)

        # IMC read against the radix-4 row, then writeback with carry << 1
        lut_row = r4[digit + 2]
        for i in range(nl):
            x = rows[lut_row][i]
            y = rows[row_sum][i]
            z = rows[row_carry][i]
            s[i] = x ^ y ^ z
            mj[i] = (x & y) | (y & z) | (x & z)
        c1 = getbit(mj, n)
        shl(mj, 1, nl)
        clip(mj, width, nl)
        memcpy(c, mj, nl * 8)
        pending = getbit(s, n) & getbit(c, n)
        k = ovs + ovc + c1 + pending
        memcpy(rows[row_sum], s, nl * 8)
        memcpy(rows[row_carry], c, nl * 8)

        # IMC read against the overflow row, then writeback
        ov_row = ovr[k]
        for i in range(nl):
            x = rows[ov_row][i]
            y = rows[row_sum][i]
            z = rows[row_carry][i]
            s[i] = x ^ y ^ z
            mj[i] = (x & y) | (y & z) | (x & z)
        if getbit(mj, n) != pending:
            raise SimulatorFault("overflow carry-out disagrees with the folded index")
        shl(mj, 1, nl)
        clip(mj, width, nl)
        memcpy(c, mj, nl * 8)
        memcpy(rows[row_sum], s, nl * 8)
        memcpy(rows[row_carry], c, nl * 8)

        digits.append(digit)
        indices.append(k)
        sums.append(to_int(s, nl))
        carries.append(to_int(c, nl))
        if j < iters - 1 or not skip_latch:
            latches += 1

    sram.rows[row_sum] = sums[iters - 1]
    sram.rows[row_carry] = carries[iters - 1]
    sram.writes += 6 * iters
    sram.activations[3] += 2 * iters
    for phase, cost, count in (
        (Phase.SHIFT_ENCODE, cost_shift, iters),
        (Phase.IMC_RADIX4, cost_imc1, iters),
        (Phase.WRITEBACK_RADIX4, cost_wb1, iters),
        (Phase.IMC_OVERFLOW, cost_imc2, iters),
        (Phase.WRITEBACK_OVERFLOW, cost_wb2, iters),
        (Phase.OVERFLOW_LATCH, cost_latch, latches),
    ):
        if count:
            sram.tick(phase, cost * count)
    state.ff_multiplier = to_int(ffm, nl)
    state.ff_sum = sums[iters - 1]
    state.ff_carry = carries[iters - 1]
    state.ff_overflow = k
    state.phase = Phase.OVERFLOW_LATCH if latches == iters else Phase.WRITEBACK_OVERFLOW
    return [IterTrace(iters - 1 - j, digits[j], indices[j], sums[j], carries[j])
            for j in range(iters)]
