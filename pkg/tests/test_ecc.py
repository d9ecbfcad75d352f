import random

import pytest

from modsram.arith import FieldElement, Modulus, oracle_modmul
from modsram.ecc import (
    BN254,
    CURVES,
    ENGINE_NAMES,
    SECP256K1,
    AffinePoint,
    CurveParams,
    Multiplier,
    modinv,
    point_add,
    point_double,
)
from modsram.errors import DomainError
from oracles import jacobian_add, jacobian_double

SECP_2G = (
    0xC6047F9441ED7D6D3045406E95C07CD85C778E4B8CEF3CA7ABAC09B95C709EE5,
    0x1AE168FEA63DC339A3C58419466CEAEEF7F632653266D0E1236431A950CFE52A,
)
SECP_3G = (
    0xF9308A019258C31049344F85F89D5229B531C845836F99B08601F113BCE036F9,
    0x388F7B0F632DE8140FE337E62A37F3566500A99934C2231B6CB9FD7584B8E672,
)
BN254_2G = (
    0x030644E72E131A029B85045B68181585D97816A916871CA8D3C208C16D87CFD3,
    0x15ED738C0E0A7C92E7845F96B2AE9C0A68A6A449E3538FC7FF3EBF7A5A18A2C4,
)


def coords(P):
    return P.x.value, P.y.value


def random_point(curve, rng, mul=None):
    P = curve.G
    for _ in range(rng.randrange(1, 12)):
        P = point_add(P, curve.G, curve, mul) if rng.random() < 0.5 else point_double(P, curve, mul)
    return P


class TestModinv:
    def test_one(self):
        assert modinv(FieldElement(1, Modulus(7))).value == 1

    def test_small(self):
        assert modinv(FieldElement(3, Modulus(7))).value == 5

    def test_zero(self):
        with pytest.raises(DomainError):
            modinv(FieldElement(0, Modulus(7)))

    def test_non_invertible(self):
        with pytest.raises(DomainError):
            modinv(FieldElement(3, Modulus(9)))

    def test_random_secp(self, rng):
        m = SECP256K1.modulus
        for _ in range(100):
            a = FieldElement(rng.randrange(1, m.p), m)
            assert oracle_modmul(a, modinv(a)).value == 1


class TestCurves:
    def test_constants(self):
        assert SECP256K1.modulus.n == 256 and BN254.modulus.n == 254
        assert SECP256K1.on_curve(SECP256K1.G) and BN254.on_curve(BN254.G)

    def test_singular_rejected(self):
        with pytest.raises(DomainError):
            CurveParams("bad", Modulus(23), 0, 0)

    def test_generator_checked(self):
        with pytest.raises(DomainError):
            CurveParams("bad", Modulus(23), 1, 1, generator=(1, 1))

    def test_point_text(self):
        G = SECP256K1.G
        assert AffinePoint.parse(str(G), SECP256K1) == G
        assert str(AffinePoint.at_infinity()) == "inf"
        assert AffinePoint.parse("inf", SECP256K1).infinity
        with pytest.raises(DomainError):
            AffinePoint.parse("(0x1, 0x1)", SECP256K1)


class TestGroupLaw:
    def test_identity(self):
        G = SECP256K1.G
        O = AffinePoint.at_infinity()
        assert point_add(G, O, SECP256K1) == G
        assert point_add(O, G, SECP256K1) == G

    def test_inverse(self):
        G = SECP256K1.G
        assert point_add(G, SECP256K1.negate(G), SECP256K1).infinity

    def test_double_infinity(self):
        assert point_double(AffinePoint.at_infinity(), BN254).infinity

    @pytest.mark.parametrize("engine", ["oracle", "r4csa", "sim"])
    def test_secp_2g_3g(self, engine):
        mul = Multiplier(engine)
        G = SECP256K1.G
        twoG = point_double(G, SECP256K1, mul)
        assert coords(twoG) == SECP_2G
        assert coords(point_add(twoG, G, SECP256K1, mul)) == SECP_3G
        assert coords(point_add(G, G, SECP256K1, mul)) == SECP_2G

    @pytest.mark.parametrize("engine", ["oracle", "r4csa", "sim"])
    def test_bn254_2g(self, engine):
        assert coords(point_double(BN254.G, BN254, Multiplier(engine))) == BN254_2G

    @pytest.mark.parametrize("curve", [SECP256K1, BN254], ids=lambda c: c.name)
    def test_matches_independent_formulas(self, curve, rng):
        p = curve.modulus.p
        for _ in range(20):
            P = random_point(curve, rng)
            Q = random_point(curve, rng)
            assert coords(point_double(P, curve)) == jacobian_double(*coords(P), p, curve.a)
            if P.x != Q.x:
                assert coords(point_add(P, Q, curve)) == jacobian_add(*coords(P), *coords(Q), p)

    def test_published_vectors_agree_with_independent(self):
        p = SECP256K1.modulus.p
        assert jacobian_double(*SECP256K1.generator, p, 0) == SECP_2G
        assert jacobian_double(*BN254.generator, BN254.modulus.p, 0) == BN254_2G

    @pytest.mark.parametrize("curve", [SECP256K1, BN254], ids=lambda c: c.name)
    def test_engine_independence_and_closure(self, curve, rng):
        for _ in range(5):
            P, Q = random_point(curve, rng), random_point(curve, rng)
            results = {e: (point_add(P, Q, curve, Multiplier(e)), point_double(P, curve, Multiplier(e)))
                       for e in ENGINE_NAMES}
            first = results["oracle"]
            assert all(r == first for r in results.values())
            assert curve.on_curve(first[0]) and curve.on_curve(first[1])

    def test_commutative_and_double_consistent(self, rng):
        c = SECP256K1
        for _ in range(10):
            P, Q = random_point(c, rng), random_point(c, rng)
            assert point_add(P, Q, c) == point_add(Q, P, c)
            assert point_double(P, c) == point_add(P, P, c)

    def test_associativity_spot(self, rng):
        c = BN254
        for _ in range(5):
            P, Q, R = (random_point(c, rng) for _ in range(3))
            left = point_add(point_add(P, Q, c), R, c)
            right = point_add(P, point_add(Q, R, c), c)
            assert left == right

    def test_multiplication_counts(self):
        mul = Multiplier("r4csa")
        G = SECP256K1.G
        P = point_double(G, SECP256K1, mul)
        assert mul.count == 4
        point_add(P, G, SECP256K1, mul)
        assert mul.count == 7

    def test_sim_cycles_aggregate(self):
        mul = Multiplier("sim")
        point_double(SECP256K1.G, SECP256K1, mul)
        assert mul.cycles == 4 * 767

    def test_unknown_engine(self):
        with pytest.raises(DomainError):
            Multiplier("nope")


def test_curves_registry():
    assert set(CURVES) == {"secp256k1", "bn254"}
