"""Fixed-width operands, moduli and the reference modular multiplier.

Every engine in the package is checked against :func:`oracle_modmul`, which
multiplies in full width and reduces by division. It shares no code with the
interleaved engines.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

WORD_BITS = 64


@dataclass(frozen=True, slots=True)
class Operand:
    """Unsigned integer confined to ``width`` bits.

    The value is held as a Python int, which is already a packed,
    least-significant-limb-first word array; :meth:`words` exposes that view.
    """

    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise DomainError(f"width must be >= 1, got {self.width}")
        if self.value < 0 or self.value >> self.width:
            raise DomainError(f"value {self.value:#x} does not fit in {self.width} bits")

    @classmethod
    def parse(cls, text: str, width: int) -> Operand:
        """Parse big-endian hex (optional ``0x`` prefix); reject values wider than ``width``."""
        s = text.strip().lower()
        if s.startswith("0x"):
            s = s[2:]
        if not s:
            raise DomainError(f"empty hex operand {text!r}")
        try:
            value = int(s, 16)
        except ValueError:
            raise DomainError(f"not a hex operand: {text!r}") from None
        return cls(value, width)

    @property
    def bits(self) -> list[int]:
        """Binary digits, least-significant first."""
        return [(self.value >> i) & 1 for i in range(self.width)]

    def bit(self, i: int) -> int:
        return (self.value >> i) & 1 if i >= 0 else 0

    def words(self) -> list[int]:
        n = -(-self.width // WORD_BITS)
        mask = (1 << WORD_BITS) - 1
        return [(self.value >> (WORD_BITS * k)) & mask for k in range(n)]

    def hex(self) -> str:
        return f"0x{self.value:0{-(-self.width // 4)}x}"

    def __int__(self):
        return self.value


@dataclass(frozen=True, slots=True)
class Modulus:
    """Odd modulus p >= 3; ``n`` is its minimal bit length."""

    p: int

    def __post_init__(self):
        if self.p < 3 or not self.p & 1:
            raise DomainError(f"modulus must be odd and >= 3, got {self.p}")

    @property
    def n(self) -> int:
        return self.p.bit_length()

    @property
    def operand(self) -> Operand:
        return Operand(self.p, self.n)

    @classmethod
    def parse(cls, text: str) -> Modulus:
        s = text.strip().lower()
        try:
            return cls(int(s[2:] if s.startswith("0x") else s, 16))
        except ValueError:
            raise DomainError(f"not a hex modulus: {text!r}") from None

    def element(self, value: int, auto_reduce: bool = False) -> FieldElement:
        return FieldElement(value, self, auto_reduce=auto_reduce)

    def __int__(self):
        return self.p


class FieldElement:
    """Canonical residue ``0 <= value < p``.

    ``auto_reduce=True`` folds any non-negative int into range instead of
    rejecting it.
    """

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Modulus, auto_reduce: bool = False):
        value = int(value)
        if auto_reduce:
            value %= modulus.p
        elif not 0 <= value < modulus.p:
            raise DomainError(f"{value:#x} is not reduced modulo {modulus.p:#x}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.modulus == other.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value:#x}, p={self.modulus.p:#x})"

    @property
    def operand(self) -> Operand:
        return Operand(self.value, self.modulus.n)


def check_same_modulus(m: Modulus, *elems: FieldElement) -> None:
    for e in elems:
        if e.modulus != m:
            raise DomainError(f"operand reduced under {e.modulus.p:#x}, expected {m.p:#x}")


def oracle_modmul(a: FieldElement, b: FieldElement, m: Modulus | None = None) -> FieldElement:
    """Full-width product followed by division-based reduction."""
    if m is None:
        m = a.modulus
    check_same_modulus(m, a, b)
    q, r = divmod(a.value * b.value, m.p)
    return FieldElement(r, m)


def cond_subtract(c: int, m: Modulus) -> int:
    """One conditional subtraction; requires ``c < 2p``."""
    assert 0 <= c < 2 * m.p, "cond_subtract needs c < 2p"
    return c - m.p if c >= m.p else c


def reduce_full(c: int, m: Modulus, max_steps: int = 7) -> int:
    """Repeated conditional subtraction for ``c < (max_steps + 1) * p``."""
    assert 0 <= c < (max_steps + 1) * m.p, "reduce_full bound exceeded"
    p = m.p
    while c >= p:
        c -= p
    return c


def shift_left(x: int, k: int, keep_width: int) -> tuple[int, int]:
    """Shift ``x`` left by ``k`` and split at ``keep_width``.

    Returns ``(overflow, shifted)`` with ``x << k == overflow << keep_width | shifted``.
    """
    if k not in (1, 2):
        raise DomainError(f"shift must be 1 or 2, got {k}")
    if keep_width < 1:
        raise DomainError("keep_width must be >= 1")
    y = x << k
    return y >> keep_width, y & ((1 << keep_width) - 1)
