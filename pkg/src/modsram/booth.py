"""Radix-4 Booth recoding and the two precomputed tables.

The radix-4 table depends only on the multiplicand and modulus, the overflow
table only on the modulus, so both can be built once and shared across
iterations and across multiplications.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from types import MappingProxyType
from typing import Mapping

from .arith import FieldElement, Modulus, check_same_modulus
from .errors import DomainError


class BoothDigit(IntEnum):
    NEG2 = -2
    NEG1 = -1
    ZERO = 0
    POS1 = 1
    POS2 = 2


# indexed by the window (hi << 2) | (mid << 1) | lo
_ENCODER = (
    BoothDigit.ZERO, BoothDigit.POS1, BoothDigit.POS1, BoothDigit.POS2,
    BoothDigit.NEG2, BoothDigit.NEG1, BoothDigit.NEG1, BoothDigit.ZERO,
)

# wordline / dump order of the radix-4 table
RADIX4_ORDER = (
    BoothDigit.ZERO, BoothDigit.POS1, BoothDigit.POS2, BoothDigit.NEG2, BoothDigit.NEG1,
)


def booth_encode(hi: int, mid: int, lo: int) -> BoothDigit:
    for bit in (hi, mid, lo):
        if bit not in (0, 1):
            raise DomainError(f"Booth window bits must be 0/1, got {(hi, mid, lo)}")
    return _ENCODER[(hi << 2) | (mid << 1) | lo]


def encode_window(window: int) -> BoothDigit:
    """Encode a packed 3-bit window ``a_{i+1} a_i a_{i-1}``."""
    return _ENCODER[window & 7]


def num_windows(n: int) -> int:
    return (n + 1) // 2


def booth_pattern(a: int | FieldElement, n: int | None = None) -> int:
    """Bit pattern that gets recoded for multiplier ``a``.

    ``ceil(n/2)`` windows cover ``2*ceil(n/2)`` bits. A plain int must fit in
    that pattern as a non-negative two's-complement number. A field element
    whose top bit would read as a sign (only possible for even ``n``) is
    replaced by its negative representative ``a - p``, which always fits and is
    congruent to ``a``.
    """
    if isinstance(a, FieldElement):
        n = a.modulus.n if n is None else n
        value = a.value
        width = 2 * num_windows(n)
        if value >> (width - 1):
            value = (value - a.modulus.p) % (1 << width)
            if not value >> (width - 1):
                raise DomainError(f"{a!r} not recodable in {n} bits")
        return value
    if n is None:
        raise DomainError("n is required for a plain-int multiplier")
    width = 2 * num_windows(n)
    if a < 0 or a >> (width - 1):
        raise DomainError(f"{a:#x} needs more than {num_windows(n)} radix-4 digits")
    return a


def booth_digits(a: int | FieldElement, n: int | None = None) -> list[BoothDigit]:
    """Radix-4 digits of ``a``, most-significant window first.

    For a plain int the digits sum exactly to ``a``; for a field element they
    sum to ``a`` or ``a - p``.
    """
    if n is None and isinstance(a, FieldElement):
        n = a.modulus.n
    pattern = booth_pattern(a, n) << 1  # a_{-1} = 0
    return [_ENCODER[(pattern >> (2 * i)) & 7] for i in range(num_windows(n) - 1, -1, -1)]


def digits_value(digits) -> int:
    """Evaluate an MSB-first digit sequence as sum of d_i * 4**i."""
    v = 0
    for d in digits:
        v = 4 * v + int(d)
    return v


@dataclass(frozen=True)
class Radix4Lut:
    multiplicand: FieldElement
    modulus: Modulus
    entries: Mapping[BoothDigit, int] = field(repr=False)

    def __getitem__(self, digit) -> int:
        return self.entries[digit]

    def element(self, digit) -> FieldElement:
        return FieldElement(self.entries[digit], self.modulus)

    def ordered(self) -> list[int]:
        return [self.entries[d] for d in RADIX4_ORDER]

    def dump(self) -> str:
        return format_lut_words(self.ordered(), self.modulus.n)


@dataclass(frozen=True)
class OverflowLut:
    modulus: Modulus
    entries: tuple[int, ...] = field(repr=False)

    @property
    def shift_base(self) -> int:
        return self.modulus.n + 1

    def __getitem__(self, k: int) -> int:
        return self.entries[k]

    def __len__(self):
        return len(self.entries)

    def element(self, k: int) -> FieldElement:
        return FieldElement(self.entries[k], self.modulus)

    def dump(self) -> str:
        return format_lut_words(self.entries, self.modulus.n)


def build_radix4_lut(b: FieldElement, m: Modulus | None = None) -> Radix4Lut:
    m = b.modulus if m is None else m
    check_same_modulus(m, b)
    p, v = m.p, b.value
    two = 2 * v % p
    entries = {
        BoothDigit.ZERO: 0,
        BoothDigit.POS1: v,
        BoothDigit.POS2: two,
        BoothDigit.NEG1: (p - v) % p,
        BoothDigit.NEG2: (p - two) % p,
    }
    return Radix4Lut(b, m, MappingProxyType(entries))


def build_overflow_lut(m: Modulus) -> OverflowLut:
    base = 1 << (m.n + 1)
    return OverflowLut(m, tuple(k * base % m.p for k in range(8)))


def format_lut_words(values, n: int) -> str:
    digits = -(-n // 4)
    return "".join(f"{v:0{digits}x}\n" for v in values)


def parse_lut_words(text: str) -> list[int]:
    return [int(line, 16) for line in text.split() if line]
