"""SRAM array, wordline map and near-memory register state."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from ..errors import ConfigurationError, SimulatorFault

ROWS = 64
MAX_ACTIVATION = 3

# radix-4 table rows are laid out in this digit order
RADIX4_ROW_ORDER = (0, 1, 2, -2, -1)


@dataclass(frozen=True)
class WordlineMap:
    multiplicand: int = 0
    multiplier: int = 1
    modulus: int = 2
    radix4_lut: tuple[int, ...] = (3, 4, 5, 6, 7)
    overflow_lut: tuple[int, ...] = tuple(range(8, 16))
    sum: int = 16
    carry: int = 17
    zero_row: int = 18

    def __post_init__(self):
        if len(self.radix4_lut) != 5 or len(self.overflow_lut) != 8:
            raise ConfigurationError("radix-4 table needs 5 rows, overflow table 8")
        used = self.all_rows()
        if len(set(used)) != len(used):
            raise ConfigurationError("wordline regions overlap")
        if any(not 0 <= r < ROWS for r in used):
            raise ConfigurationError(f"wordline outside 0..{ROWS - 1}")

    def radix4_row(self, digit: int) -> int:
        return self.radix4_lut[RADIX4_ROW_ORDER.index(digit)]

    def radix4_rows_by_digit(self) -> dict[int, int]:
        return {d: r for d, r in zip(RADIX4_ROW_ORDER, self.radix4_lut)}

    def regions(self) -> dict[str, tuple[int, ...]]:
        return {
            "multiplicand": (self.multiplicand,),
            "multiplier": (self.multiplier,),
            "modulus": (self.modulus,),
            "radix4_lut": tuple(self.radix4_lut),
            "overflow_lut": tuple(self.overflow_lut),
            "sum": (self.sum,),
            "carry": (self.carry,),
            "zero_row": (self.zero_row,),
        }

    def all_rows(self) -> list[int]:
        return [r for rows in self.regions().values() for r in rows]

    def utilization(self) -> dict:
        regions = self.regions()
        return {
            "rows_total": ROWS,
            "regions": {k: len(v) for k, v in regions.items()},
            "operand_rows": 3,
            "lut_rows": len(self.radix4_lut) + len(self.overflow_lut),
            "intermediate_rows": 2,
            "rows_used": len(self.all_rows()),
        }


class SramModel:
    """64-row array of ``cols``-bit wordlines with a triple-activation read port.

    Reads never modify the array. A single IMC read drives up to three
    wordlines and yields both the XOR3 and MAJ of the selected rows.
    """

    def __init__(self, cols: int = 256, wordlines: WordlineMap | None = None):
        if cols < 1:
            raise ConfigurationError("need at least one column")
        self.cols = cols
        self.map = wordlines or WordlineMap()
        self._mask = (1 << cols) - 1
        self.rows = [0] * ROWS
        self.cycle_count = 0
        self.phase_cycles: Counter = Counter()
        self.activations: Counter = Counter()  # activation size -> number of reads
        self.writes = 0

    def _check(self, rows) -> None:
        if len(rows) > MAX_ACTIVATION:
            raise SimulatorFault(f"{len(rows)} wordlines activated, at most {MAX_ACTIVATION}")
        if len(set(rows)) != len(rows):
            raise SimulatorFault(f"wordline activated twice in one read: {rows}")
        for r in rows:
            if not 0 <= r < ROWS:
                raise SimulatorFault(f"wordline {r} out of range")

    def write(self, row: int, value: int) -> None:
        self._check((row,))
        if value < 0 or value & ~self._mask:
            raise SimulatorFault(f"value wider than {self.cols} columns")
        self.rows[row] = value
        self.writes += 1

    def read(self, row: int) -> int:
        self._check((row,))
        self.activations[1] += 1
        return self.rows[row]

    def imc(self, r1: int, r2: int, r3: int) -> tuple[int, int]:
        """Activate three wordlines at once; returns ``(xor3, maj)`` per column."""
        self._check((r1, r2, r3))
        self.activations[3] += 1
        x, y, z = self.rows[r1], self.rows[r2], self.rows[r3]
        return x ^ y ^ z, (x & y) | (y & z) | (x & z)

    def row_xor3(self, r1: int, r2: int, r3: int) -> int:
        return self.imc(r1, r2, r3)[0]

    def row_maj(self, r1: int, r2: int, r3: int) -> int:
        return self.imc(r1, r2, r3)[1]

    def tick(self, phase: "Phase", cycles: int = 1) -> None:
        self.cycle_count += cycles
        self.phase_cycles[phase.value] += cycles

    def snapshot(self) -> tuple[int, ...]:
        return tuple(self.rows)

    def utilization(self) -> dict:
        rep = self.map.utilization()
        rep["cols"] = self.cols
        return rep


class Phase(Enum):
    IDLE = "idle"
    LOAD = "load"
    SHIFT_ENCODE = "shift_encode"
    IMC_RADIX4 = "imc_radix4"
    WRITEBACK_RADIX4 = "writeback_radix4"
    IMC_OVERFLOW = "imc_overflow"
    WRITEBACK_OVERFLOW = "writeback_overflow"
    OVERFLOW_LATCH = "overflow_latch"
    FINALIZE = "finalize"
    DONE = "done"


_NEXT = {
    Phase.IDLE: {Phase.LOAD},
    Phase.LOAD: {Phase.SHIFT_ENCODE, Phase.FINALIZE},
    Phase.SHIFT_ENCODE: {Phase.IMC_RADIX4},
    Phase.IMC_RADIX4: {Phase.WRITEBACK_RADIX4},
    Phase.WRITEBACK_RADIX4: {Phase.IMC_OVERFLOW},
    Phase.IMC_OVERFLOW: {Phase.WRITEBACK_OVERFLOW},
    Phase.WRITEBACK_OVERFLOW: {Phase.OVERFLOW_LATCH, Phase.FINALIZE},
    Phase.OVERFLOW_LATCH: {Phase.SHIFT_ENCODE, Phase.FINALIZE},
    Phase.FINALIZE: {Phase.DONE},
    Phase.DONE: set(),
}


@dataclass
class NearMemState:
    """Flip-flops next to the array.

    ``ff_multiplier`` holds the recoded multiplier with a zero appended below
    bit 0, so its top three bits are always the next Booth window. In
    strict-width mode bit ``n`` of sum and carry has no array column and lives
    in ``sum_msb`` / ``carry_msb``.
    """

    n: int
    iterations: int
    ff_multiplier: int = 0
    ff_sum: int = 0
    ff_carry: int = 0
    ff_overflow: int = 0
    sum_msb: int = 0
    carry_msb: int = 0
    phase: Phase = Phase.IDLE

    @property
    def multiplier_width(self) -> int:
        return 2 * self.iterations + 1

    def enter(self, phase: Phase) -> None:
        if phase not in _NEXT[self.phase]:
            raise SimulatorFault(f"illegal FSM transition {self.phase.value} -> {phase.value}")
        self.phase = phase

    def check_widths(self) -> None:
        w = self.n + 1
        if self.ff_sum >> w or self.ff_carry >> w:
            raise SimulatorFault("sum/carry register exceeded n+1 bits")
        if not 0 <= self.ff_overflow <= 7:
            raise SimulatorFault("overflow register exceeded 3 bits")
        if self.ff_multiplier >> self.multiplier_width:
            raise SimulatorFault("multiplier register overflow")
