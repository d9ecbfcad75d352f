"""Randomized and exhaustive cross-checks of every engine against the oracle."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arith import FieldElement, Modulus, oracle_modmul
from .booth import booth_digits, build_overflow_lut, build_radix4_lut, num_windows
from .engines import interleaved_modmul, r4csa_modmul, radix4_modmul
from .sim import cycle_model, sim_modmul

ENGINES = ("interleaved", "radix4", "r4csa", "sim")


@dataclass(frozen=True)
class Mismatch:
    engine: str
    a: int
    b: int
    p: int
    kind: str  # result, iterations, bounds, congruence, digit, trace or cycles
    detail: str

    def reproducer(self) -> str:
        return f"engine={self.engine} a=0x{self.a:x} b=0x{self.b:x} p=0x{self.p:x}: {self.detail}"


@dataclass
class CaseResult:
    label: str
    trials: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def flip_lut_bit(sram) -> None:
    """Fault hook: corrupt bit 0 of the +1 radix-4 row."""
    row = sram.map.radix4_row(1)
    sram.rows[row] ^= 1


FAULTS = {"lut-bit": flip_lut_bit}


def check_pair(a: FieldElement, b: FieldElement, engines=ENGINES, fault=None,
               backend=None) -> list[Mismatch]:
    """Run one operand pair through ``engines``; return every disagreement found.

    Beyond the results this checks trace lengths, the carry-save width and
    overflow-index bounds, the per-iteration congruence of the carry-save
    accumulator with the radix-4 partial results, Booth-digit consistency,
    simulator/engine trace identity and the simulator's cycle count.
    """
    m = a.modulus
    p, n = m.p, m.n
    want = oracle_modmul(a, b).value
    iters = num_windows(n)
    out = []

    def bad(engine, kind, detail):
        out.append(Mismatch(engine, a.value, b.value, p, kind, detail))

    if "interleaved" in engines:
        r, t = interleaved_modmul(a, b)
        if r.value != want:
            bad("interleaved", "result", f"got 0x{r.value:x}, want 0x{want:x}")
        if len(t) != n:
            bad("interleaved", "iterations", f"{len(t)} iterations, want {n}")

    r4_trace = None
    lut = ovl = None
    if "radix4" in engines or "r4csa" in engines:
        lut = build_radix4_lut(b)
        ovl = build_overflow_lut(m)
        r, r4_trace = radix4_modmul(a, b, lut=lut)
        if "radix4" in engines:
            if r.value != want:
                bad("radix4", "result", f"got 0x{r.value:x}, want 0x{want:x}")
            if len(r4_trace) != iters:
                bad("radix4", "iterations", f"{len(r4_trace)} iterations, want {iters}")

    csa_trace = None
    if "r4csa" in engines or "sim" in engines:
        lut = lut or build_radix4_lut(b)
        ovl = ovl or build_overflow_lut(m)
        r, csa_trace = r4csa_modmul(a, b, lut=lut, ovl=ovl)
        if "r4csa" in engines:
            if r.value != want:
                bad("r4csa", "result", f"got 0x{r.value:x}, want 0x{want:x}")
            if len(csa_trace) != iters:
                bad("r4csa", "iterations", f"{len(csa_trace)} iterations, want {iters}")
            limit = 1 << (n + 1)
            digits = booth_digits(a)
            for t, ref, d in zip(csa_trace, r4_trace, digits):
                if t.sum >= limit or t.carry >= limit or not 0 <= t.overflow <= 7:
                    bad("r4csa", "bounds", f"width/overflow bound broken at iteration {t.index}")
                    break
                if (t.sum + t.carry) % p != ref.sum:
                    bad("r4csa", "congruence", f"congruence broken at iteration {t.index}")
                    break
                if t.digit != d:
                    bad("r4csa", "digit", f"digit mismatch at iteration {t.index}")
                    break

    if "sim" in engines:
        r, report, sim_trace = sim_modmul(a, b, fault=fault, backend=backend)
        if r.value != want:
            bad("sim", "result", f"got 0x{r.value:x}, want 0x{want:x}")
        if sim_trace != csa_trace:
            bad("sim", "trace", "trace differs from r4csa engine")
        if report.cycles_total != cycle_model(n):
            bad("sim", "cycles", f"{report.cycles_total} cycles, model says {cycle_model(n)}")
    return out


def random_modulus(rng: random.Random, n: int) -> Modulus:
    """Random odd modulus of exactly ``n`` bits."""
    return Modulus(rng.getrandbits(n) | 1 << (n - 1) | 1)


@dataclass(frozen=True)
class Case:
    label: str
    n: int
    modulus: int | None = None  # None -> fresh random modulus per trial


def sweep_cases(ns=(8, 16, 64, 224, 256), curves=("secp256k1", "bn254")) -> list[Case]:
    from .ecc import CURVES

    cases = [Case(f"random-odd n={n}", n) for n in ns]
    for name in curves:
        c = CURVES[name]
        cases.append(Case(name, c.modulus.n, c.modulus.p))
    return cases


def _trial(args):
    case, seed, i, engines, fault, backend = args
    rng = random.Random(f"{seed}/{case.label}/{i}")
    m = Modulus(case.modulus) if case.modulus is not None else random_modulus(rng, case.n)
    a = FieldElement(rng.randrange(m.p), m)
    b = FieldElement(rng.randrange(m.p), m)
    return check_pair(a, b, engines, FAULTS.get(fault), backend)


def run_case(case: Case, trials: int, seed: int = 0, engines=ENGINES, fault=None,
             jobs: int = 1, backend=None, stop_on_failure: bool = False) -> CaseResult:
    """Seeded random trials; results are ordered by trial index whatever ``jobs`` is."""
    res = CaseResult(case.label)
    work = [(case, seed, i, tuple(engines), fault, backend) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            outcomes = ex.map(_trial, work, chunksize=max(1, trials // (4 * jobs)))
            for found in outcomes:
                res.trials += 1
                res.mismatches.extend(found)
    else:
        for w in work:
            res.trials += 1
            found = _trial(w)
            res.mismatches.extend(found)
            if found and stop_on_failure:
                break
    return res


def odd_moduli(max_p: int):
    return range(3, max_p + 1, 2)


def exhaustive(max_p: int = 63, engines=ENGINES, fault=None, backend=None,
               stop_on_failure: bool = False) -> CaseResult:
    """All operand pairs ``a, b < p`` for every odd ``p`` in ``3..max_p``."""
    res = CaseResult(f"exhaustive p<={max_p}")
    fault_fn = FAULTS.get(fault)
    for p in odd_moduli(max_p):
        m = Modulus(p)
        elems = [FieldElement(v, m) for v in range(p)]
        for a in elems:
            for b in elems:
                res.trials += 1
                found = check_pair(a, b, engines, fault_fn, backend)
                res.mismatches.extend(found)
                if found and stop_on_failure:
                    return res
    return res
