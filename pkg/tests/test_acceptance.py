"""Acceptance suite. Each test carries a ``criterion`` marker; the terminal
summary prints one PASS/FAIL line per criterion."""
import os
import random
import time

import pytest

from modsram.arith import FieldElement, Modulus
from modsram.booth import num_windows
from modsram.ecc import BN254, SECP256K1, Multiplier, point_add, point_double
from modsram.engines import csa_step, interleaved_modmul, r4csa_modmul, radix4_modmul
from modsram.sim import (
    WordlineMap, baseline_cycles, cycle_model, latency_estimate, load_operands, sim_modmul,
)
from modsram.sim.cycles import CycleConfig
from modsram.verify import exhaustive, run_case, sweep_cases

TRIALS = 10_000
SEED = 20240601
NS = (8, 16, 64, 224, 256)


@pytest.fixture(scope="session")
def sweep():
    """Exhaustive small-modulus sweep plus seeded random trials over every case."""
    jobs = os.cpu_count() or 1
    results = [exhaustive(63)]
    for case in sweep_cases(NS):
        results.append(run_case(case, TRIALS, SEED, jobs=jobs))
    return results


def mismatches(results, kinds):
    return [m for r in results for m in r.mismatches if m.kind in kinds]


@pytest.mark.criterion(1, "golden cycle count 767 at n=256")
def test_golden_cycles(secp):
    rng = random.Random(1)
    a, b = (FieldElement(rng.randrange(secp.p), secp) for _ in range(2))
    t0 = time.perf_counter()
    _, report, _ = sim_modmul(a, b)
    elapsed = time.perf_counter() - t0
    assert report.cycles_total == 767
    assert elapsed < 1.0


@pytest.mark.criterion(2, "cycles equal 3n-1; MeNTT baseline (n+1)^2")
@pytest.mark.parametrize("n", [8, 16, 64, 256])
def test_cycle_scaling(n):
    rng = random.Random(n)
    m = Modulus(rng.getrandbits(n) | 1 << (n - 1) | 1)
    a, b = (FieldElement(rng.randrange(m.p), m) for _ in range(2))
    _, report, _ = sim_modmul(a, b)
    assert report.cycles_total == 3 * n - 1 == cycle_model(n)


@pytest.mark.criterion(2, "cycles equal 3n-1; MeNTT baseline (n+1)^2")
def test_mentt_baseline():
    assert baseline_cycles("mentt", 256) == 66049


@pytest.mark.criterion(3, "all engines equal the oracle (exhaustive + seeded random)")
def test_oracle_equivalence(sweep):
    exh = sweep[0]
    assert exh.trials == 43679
    for r in sweep[1:]:
        assert r.trials == TRIALS, r.label
    assert {r.label for r in sweep[1:]} == {f"random-odd n={n}" for n in NS} | {"secp256k1", "bn254"}
    bad = mismatches(sweep, {"result"})
    assert not bad, bad[0].reproducer()


@pytest.mark.criterion(4, "radix-4 iterations are ceil(n/2) versus n")
@pytest.mark.parametrize("n", [7, 8, 16, 64, 224, 254, 256])
def test_iteration_halving(n):
    rng = random.Random(n)
    m = Modulus(rng.getrandbits(n) | 1 << (n - 1) | 1)
    a, b = (FieldElement(rng.randrange(m.p), m) for _ in range(2))
    assert len(interleaved_modmul(a, b)[1]) == n
    assert len(radix4_modmul(a, b)[1]) == (n + 1) // 2 == num_windows(n)
    assert len(r4csa_modmul(a, b)[1]) == (n + 1) // 2
    assert len(sim_modmul(a, b)[2]) == (n + 1) // 2


@pytest.mark.criterion(5, "carry-save identities and per-iteration congruence")
def test_csa_triples():
    rng = random.Random(5)
    for _ in range(TRIALS):
        w = rng.choice((8, 64, 257))
        x, y, z = (rng.getrandbits(w) for _ in range(3))
        s, c = csa_step(x, y, z)
        assert s == x ^ y ^ z
        assert s + c == x + y + z


@pytest.mark.criterion(5, "carry-save identities and per-iteration congruence")
def test_congruence_over_sweep(sweep):
    bad = mismatches(sweep, {"bounds", "congruence", "digit", "iterations"})
    assert not bad, bad[0].reproducer()


@pytest.mark.criterion(6, "LUTs occupy 13 rows, total at most 64")
def test_utilization(secp):
    sram, _ = load_operands(FieldElement(3, secp), FieldElement(5, secp))
    u = sram.utilization()
    assert u["lut_rows"] == 13
    assert u["rows_used"] <= u["rows_total"] == 64
    assert WordlineMap().utilization()["lut_rows"] == 13


@pytest.mark.criterion(7, "simulator result and trace match the R4CSA engine")
def test_sim_bit_exact(sweep):
    bad = mismatches(sweep, {"trace", "cycles"}) + [m for m in mismatches(sweep, {"result"})
                                                    if m.engine == "sim"]
    assert not bad, bad[0].reproducer()


def _chain(curve, mul, steps=16):
    P, out = curve.G, []
    for i in range(steps):
        P = point_double(P, curve, mul) if i % 2 == 0 else point_add(P, curve.G, curve, mul)
        out.append(P)
    return out


@pytest.mark.criterion(8, "EC chains through R4CSA match the oracle; 2G vectors")
@pytest.mark.parametrize("curve", [SECP256K1, BN254], ids=lambda c: c.name)
def test_ec_chain(curve):
    got = _chain(curve, Multiplier("r4csa"))
    want = _chain(curve, Multiplier("oracle"))
    assert got == want
    assert all(curve.on_curve(P) for P in got)


@pytest.mark.criterion(8, "EC chains through R4CSA match the oracle; 2G vectors")
def test_double_generator_vectors():
    mul = Multiplier("r4csa")
    s = point_double(SECP256K1.G, SECP256K1, mul)
    assert (s.x.value, s.y.value) == (
        0xC6047F9441ED7D6D3045406E95C07CD85C778E4B8CEF3CA7ABAC09B95C709EE5,
        0x1AE168FEA63DC339A3C58419466CEAEEF7F632653266D0E1236431A950CFE52A,
    )
    b = point_double(BN254.G, BN254, mul)
    assert (b.x.value, b.y.value) == (
        0x030644E72E131A029B85045B68181585D97816A916871CA8D3C208C16D87CFD3,
        0x15ED738C0E0A7C92E7845F96B2AE9C0A68A6A449E3538FC7FF3EBF7A5A18A2C4,
    )


@pytest.mark.criterion(9, "excluded: circuit figures; frequency is only a latency parameter")
def test_frequency_is_parameter():
    assert CycleConfig().freq_mhz == 420
    assert latency_estimate(767, 767) == pytest.approx(1.0)
    assert latency_estimate(767, 420) == pytest.approx(767 / 420)
