import json
import random

import pytest
from hypothesis import given, strategies as st

from modsram.arith import FieldElement, Modulus, oracle_modmul
from modsram.booth import booth_digits
from modsram.engines import (
    CsaState,
    csa_step,
    interleaved_modmul,
    r4csa_modmul,
    radix4_modmul,
    resolve,
    trace_jsonl,
)

ENGINES = [interleaved_modmul, radix4_modmul, r4csa_modmul]
SECP = Modulus(2 ** 256 - 2 ** 32 - 977)
BN254 = Modulus(0x30644E72E131A029B85045B68181585D97816A916871CA8D3C208C16D87CFD47)


def fe(v, p):
    return FieldElement(v, Modulus(p))


class TestInterleaved:
    def test_small(self):
        r, t = interleaved_modmul(fe(3, 5), fe(4, 5))
        assert r.value == 2 and len(t) == 3

    def test_zero(self):
        r, t = interleaved_modmul(fe(0, 97), fe(50, 97))
        assert r.value == 0
        assert all(x.sum == 0 and x.carry == 0 for x in t)

    def test_intermediate_reduced(self, rng):
        for _ in range(200):
            a, b = rng.randrange(SECP.p), rng.randrange(SECP.p)
            _, t = interleaved_modmul(FieldElement(a, SECP), FieldElement(b, SECP))
            assert all(x.sum < SECP.p for x in t)

    def test_random_secp(self, rng):
        for _ in range(1000):
            a, b = FieldElement(rng.randrange(SECP.p), SECP), FieldElement(rng.randrange(SECP.p), SECP)
            assert interleaved_modmul(a, b)[0] == oracle_modmul(a, b)


class TestRadix4:
    def test_small(self):
        r, t = radix4_modmul(fe(3, 5), fe(4, 5))
        assert r.value == 2 and len(t) == 2

    def test_identity(self):
        b = FieldElement(12345, SECP)
        assert radix4_modmul(FieldElement(1, SECP), b)[0] == b

    def test_half_iterations_256(self):
        a = FieldElement(SECP.p - 1, SECP)
        _, t4 = radix4_modmul(a, a)
        _, t1 = interleaved_modmul(a, a)
        assert len(t4) == 128 and len(t1) == 256

    def test_partials_reduced(self, rng):
        for _ in range(200):
            a, b = FieldElement(rng.randrange(BN254.p), BN254), FieldElement(rng.randrange(BN254.p), BN254)
            _, t = radix4_modmul(a, b)
            assert all(x.sum < BN254.p for x in t)


class TestCsa:
    def test_example(self):
        s, c = csa_step(0b1010, 0b0110, 0)
        assert (s, c) == (0b1100, 0b0100)
        assert 10 + 6 == s + c

    def test_zero(self):
        assert csa_step(0, 0, 0) == (0, 0)

    @pytest.mark.parametrize("w", [8, 257])
    def test_identity_random(self, w):
        rng = random.Random(w)
        for _ in range(10_000):
            x, y, z = (rng.getrandbits(w) for _ in range(3))
            s, c = csa_step(x, y, z)
            assert x + y + z == s + c
            assert s < 1 << w and c < 1 << (w + 1)

    @given(st.integers(0, 2 ** 300), st.integers(0, 2 ** 300), st.integers(0, 2 ** 300))
    def test_identity_property(self, x, y, z):
        s, c = csa_step(x, y, z)
        assert x + y + z == s + c


class TestR4csa:
    def test_p23(self):
        r, t = r4csa_modmul(fe(21, 23), fe(17, 23))
        assert r.value == 12 and len(t) == 3

    def test_identity(self):
        b = FieldElement(0xDEADBEEF, SECP)
        assert r4csa_modmul(FieldElement(1, SECP), b)[0] == b

    def test_congruence_and_bounds(self, rng):
        for m in (SECP, BN254, Modulus(23), Modulus(0xFFFF_FFFF_FFFF_FFC5)):
            for _ in range(300):
                a = FieldElement(rng.randrange(m.p), m)
                b = FieldElement(rng.randrange(m.p), m)
                _, t = r4csa_modmul(a, b)
                _, ref = radix4_modmul(a, b)
                digits = booth_digits(a)
                for x, r, d in zip(t, ref, digits):
                    assert x.sum < 1 << (m.n + 1) and x.carry < 1 << (m.n + 1)
                    assert 0 <= x.overflow <= 7
                    assert (x.sum + x.carry) % m.p == r.sum
                    assert x.digit == d

    def test_overflow_index_reaches_high_values(self):
        # exercise the upper table rows, not only the low ones
        seen = set()
        for p in range(3, 64, 2):
            m = Modulus(p)
            for a in range(p):
                for b in range(p):
                    _, t = r4csa_modmul(FieldElement(a, m), FieldElement(b, m))
                    seen.update(x.overflow for x in t)
        assert seen <= set(range(8))
        assert max(seen) >= 5

    def test_trace_json(self):
        _, t = r4csa_modmul(fe(21, 23), fe(17, 23))
        recs = [json.loads(line) for line in trace_jsonl(t).splitlines()]
        assert [r["iter"] for r in recs] == [2, 1, 0]
        assert set(recs[0]) == {"iter", "digit", "overflow", "sum_hex", "carry_hex"}
        assert int(recs[-1]["sum_hex"], 16) == t[-1].sum


class TestResolve:
    def test_zero(self):
        assert resolve(CsaState(0, 0), SECP).value == 0

    def test_wrap(self):
        assert resolve(CsaState(SECP.p - 1, 1), SECP).value == 0

    def test_random_states(self, rng):
        for _ in range(200):
            a = FieldElement(rng.randrange(SECP.p), SECP)
            b = FieldElement(rng.randrange(SECP.p), SECP)
            _, t = r4csa_modmul(a, b)
            x = rng.choice(t)
            assert resolve(CsaState(x.sum, x.carry), SECP).value == (x.sum + x.carry) % SECP.p

    def test_upper_bound(self):
        # largest state the accumulator can hold
        m = Modulus(2 ** 8 + 1)
        top = (1 << 10) - 1
        assert resolve(CsaState(top, top - 1), m).value == (2 * top - 1) % m.p


def test_exhaustive_equivalence():
    for p in range(3, 64, 2):
        m = Modulus(p)
        for a in range(p):
            for b in range(p):
                x, y = FieldElement(a, m), FieldElement(b, m)
                want = a * b % p
                for eng in ENGINES:
                    assert eng(x, y)[0].value == want, (eng.__name__, a, b, p)


@pytest.mark.parametrize("n", [8, 16, 64, 224, 256])
def test_random_moduli(n):
    rng = random.Random(n)
    for _ in range(300):
        p = rng.getrandbits(n) | 1 << (n - 1) | 1
        m = Modulus(p)
        a, b = FieldElement(rng.randrange(p), m), FieldElement(rng.randrange(p), m)
        want = a.value * b.value % p
        lens = []
        for eng in ENGINES:
            r, t = eng(a, b)
            assert r.value == want
            lens.append(len(t))
        assert lens == [n, n // 2, n // 2]


def test_odd_width_iterations():
    m = Modulus(23)
    for eng, want in zip(ENGINES, (5, 3, 3)):
        assert len(eng(FieldElement(5, m), FieldElement(7, m))[1]) == want
