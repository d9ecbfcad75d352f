"""Functional modular-multiplication engines.

Three interleaved multipliers of increasing hardware-friendliness:

* :func:`interleaved_modmul` -- one multiplier bit per iteration, two
  conditional subtractions per step.
* :func:`radix4_modmul` -- Booth radix-4 digits, half the iterations, addends
  from a five-entry table.
* :func:`r4csa_modmul` -- radix-4 digits with a carry-save (sum, carry)
  accumulator of ``n+1`` bits each; bits pushed out by the x4 shift are folded
  back through the eight-entry overflow table, so no carry ever propagates
  until the single final addition.

Each returns ``(result, trace)`` where ``trace`` holds one :class:`IterTrace`
per iteration.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .arith import FieldElement, Modulus, check_same_modulus, cond_subtract, reduce_full
from .booth import (
    BoothDigit,
    OverflowLut,
    Radix4Lut,
    booth_digits,
    build_overflow_lut,
    build_radix4_lut,
)


@dataclass(frozen=True, slots=True)
class CsaState:
    sum: int
    carry: int
    overflow: int = 0


class IterTrace(NamedTuple):
    index: int
    digit: int
    overflow: int
    sum: int
    carry: int

    def as_record(self) -> dict:
        return {
            "iter": self.index,
            "digit": int(self.digit),
            "overflow": self.overflow,
            "sum_hex": f"0x{self.sum:x}",
            "carry_hex": f"0x{self.carry:x}",
        }


def trace_jsonl(trace) -> str:
    return "".join(json.dumps(t.as_record()) + "\n" for t in trace)


def csa_step(x: int, y: int, z: int) -> tuple[int, int]:
    """Carry-save add: ``x + y + z == s + c`` with ``c`` the shifted majority."""
    s = x ^ y ^ z
    c = ((x & y) | (x & z) | (y & z)) << 1
    return s, c


def _prepare(a: FieldElement, b: FieldElement, m: Modulus | None) -> Modulus:
    if m is None:
        m = a.modulus
    check_same_modulus(m, a, b)
    return m


def interleaved_modmul(a: FieldElement, b: FieldElement, m: Modulus | None = None):
    m = _prepare(a, b, m)
    p, n, bv, av = m.p, m.n, b.value, a.value
    c = 0
    trace = []
    for i in range(n - 1, -1, -1):
        c = cond_subtract(c << 1, m)
        bit = (av >> i) & 1
        if bit:
            c = cond_subtract(c + bv, m)
        trace.append(IterTrace(i, bit, 0, c, 0))
    return FieldElement(c, m), trace


def radix4_modmul(a: FieldElement, b: FieldElement, m: Modulus | None = None,
                  lut: Radix4Lut | None = None):
    m = _prepare(a, b, m)
    lut = build_radix4_lut(b, m) if lut is None else lut
    entries = lut.entries
    c = 0
    digits = booth_digits(a)
    top = len(digits) - 1
    trace = []
    for j, d in enumerate(digits):
        c = reduce_full(c << 2, m, 3)
        c = cond_subtract(c + entries[d], m)
        trace.append(IterTrace(top - j, d, 0, c, 0))
    return FieldElement(c, m), trace


def r4csa_iterate(digits, lut: Radix4Lut, ovl: OverflowLut, m: Modulus,
                  state: CsaState | None = None):
    """Run the carry-save main loop over ``digits``; returns ``(state, trace)``.

    On entry to each iteration ``sum`` and ``carry`` fit in ``n+1`` bits. The
    x4 shift pushes two bits out of each; the first CSA's carry-out and the
    second CSA's carry-out (mutually exclusive, and the latter already known
    before the overflow row is picked, since table entries have bit ``n``
    clear) are added to them to form the overflow index (at most 3+3+1 = 7).
    The second CSA then adds ``index * 2**(n+1) mod p``, so after every
    iteration both halves are back within ``n+1`` bits and nothing is pending.
    """
    n = m.n
    width = n + 1
    mask = (1 << width) - 1
    r4 = lut.entries
    ov = ovl.entries
    s, c = (0, 0) if state is None else (state.sum, state.carry)
    top = len(digits) - 1
    trace = []
    k = 0
    for j, d in enumerate(digits):
        s <<= 2
        c <<= 2
        k = (s >> width) + (c >> width)
        s &= mask
        c &= mask

        x = r4[d]
        s, c = x ^ s ^ c, ((x & s) | (x & c) | (s & c)) << 1
        k += c >> width
        c &= mask
        k += (s >> n) & (c >> n) & 1

        y = ov[k]
        s, c = y ^ s ^ c, (((y & s) | (y & c) | (s & c)) << 1) & mask
        trace.append(IterTrace(top - j, d, k, s, c))
    return CsaState(s, c, k), trace


def resolve(state: CsaState, m: Modulus) -> FieldElement:
    """Final carry-propagating add plus reduction; ``sum + carry < 8p``."""
    return FieldElement(reduce_full(state.sum + state.carry, m, 7), m)


def r4csa_modmul(a: FieldElement, b: FieldElement, m: Modulus | None = None,
                 lut: Radix4Lut | None = None, ovl: OverflowLut | None = None):
    m = _prepare(a, b, m)
    lut = build_radix4_lut(b, m) if lut is None else lut
    ovl = build_overflow_lut(m) if ovl is None else ovl
    state, trace = r4csa_iterate(booth_digits(a), lut, ovl, m)
    return resolve(state, m), trace


ENGINES = {
    "interleaved": interleaved_modmul,
    "radix4": radix4_modmul,
    "r4csa": r4csa_modmul,
}
