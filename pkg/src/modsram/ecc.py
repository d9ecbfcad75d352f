"""Affine short-Weierstrass arithmetic with a pluggable field multiplier.

Every field product in :func:`point_add` and :func:`point_double` goes through
a :class:`Multiplier`, so the same chain of point operations can be run on
each engine and compared point by point.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arith import FieldElement, Modulus, oracle_modmul
from .engines import interleaved_modmul, r4csa_modmul, radix4_modmul
from .errors import DomainError
from .sim import sim_modmul


def modinv(a: FieldElement, m: Modulus | None = None) -> FieldElement:
    m = a.modulus if m is None else m
    if a.value == 0:
        raise DomainError("zero has no inverse")
    try:
        return FieldElement(pow(a.value, -1, m.p), m)
    except ValueError:
        raise DomainError(f"{a.value:#x} is not invertible modulo {m.p:#x}") from None


class Multiplier:
    """Counts multiplications and, for the simulator, aggregates cycles."""

    def __init__(self, engine: str = "oracle", cfg=None, backend=None):
        if engine not in ENGINE_NAMES:
            raise DomainError(f"unknown engine {engine!r}; choose from {', '.join(ENGINE_NAMES)}")
        self.engine = engine
        self.cfg = cfg
        self.backend = backend
        self.count = 0
        self.cycles = 0
        self.finalize_cycles = 0

    def __call__(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self.count += 1
        if self.engine == "oracle":
            return oracle_modmul(a, b)
        if self.engine == "sim":
            r, report, _ = sim_modmul(a, b, cfg=self.cfg, backend=self.backend)
            self.cycles += report.cycles_total
            self.finalize_cycles += report.cycles_finalize
            return r
        return _FUNCTIONAL[self.engine](a, b)[0]


_FUNCTIONAL = {
    "interleaved": interleaved_modmul,
    "radix4": radix4_modmul,
    "r4csa": r4csa_modmul,
}
ENGINE_NAMES = ("oracle", "interleaved", "radix4", "r4csa", "sim")


@dataclass(frozen=True)
class AffinePoint:
    x: FieldElement | None = None
    y: FieldElement | None = None

    @property
    def infinity(self) -> bool:
        return self.x is None

    @classmethod
    def at_infinity(cls) -> AffinePoint:
        return cls()

    def __str__(self):
        if self.infinity:
            return "inf"
        return f"(0x{self.x.value:x}, 0x{self.y.value:x})"

    @classmethod
    def parse(cls, text: str, curve: CurveParams) -> AffinePoint:
        t = text.strip()
        if t == "inf":
            return cls()
        if not (t.startswith("(") and t.endswith(")")) or t.count(",") != 1:
            raise DomainError(f"bad point text {text!r}")
        xs, ys = t[1:-1].split(",")
        pt = curve.point(int(xs.strip(), 16), int(ys.strip(), 16))
        return pt


@dataclass(frozen=True)
class CurveParams:
    """``y^2 = x^3 + a x + b`` over GF(p)."""

    name: str
    modulus: Modulus
    a: int
    b: int
    generator: tuple[int, int] | None = None
    bits: int | None = None

    def __post_init__(self):
        p = self.modulus.p
        if self.bits is not None and self.modulus.n != self.bits:
            raise DomainError(f"{self.name}: modulus is {self.modulus.n} bits, expected {self.bits}")
        if (4 * self.a ** 3 + 27 * self.b ** 2) % p == 0:
            raise DomainError(f"{self.name}: singular curve")
        if self.generator is not None and not self.contains(*self.generator):
            raise DomainError(f"{self.name}: generator not on curve")

    def contains(self, x: int, y: int) -> bool:
        p = self.modulus.p
        return (y * y - (x * x * x + self.a * x + self.b)) % p == 0

    def on_curve(self, pt: AffinePoint) -> bool:
        return pt.infinity or self.contains(pt.x.value, pt.y.value)

    def element(self, v: int) -> FieldElement:
        return FieldElement(v, self.modulus, auto_reduce=True)

    def point(self, x: int, y: int) -> AffinePoint:
        if not self.contains(x, y):
            raise DomainError(f"({x:#x}, {y:#x}) is not on {self.name}")
        return AffinePoint(self.element(x), self.element(y))

    @property
    def G(self) -> AffinePoint:
        if self.generator is None:
            raise DomainError(f"{self.name} has no generator")
        return self.point(*self.generator)

    def negate(self, pt: AffinePoint) -> AffinePoint:
        if pt.infinity:
            return pt
        return AffinePoint(pt.x, self.element(-pt.y.value))


def _sub(u: FieldElement, v: FieldElement) -> FieldElement:
    return FieldElement((u.value - v.value) % u.modulus.p, u.modulus)


def _add(u: FieldElement, v: FieldElement) -> FieldElement:
    return FieldElement((u.value + v.value) % u.modulus.p, u.modulus)


def _from_slope(lam, x1, y1, x2, c: CurveParams, mul) -> AffinePoint:
    x3 = _sub(_sub(mul(lam, lam), x1), x2)
    y3 = _sub(mul(lam, _sub(x1, x3)), y1)
    return AffinePoint(x3, y3)


def point_double(P: AffinePoint, c: CurveParams, mul=None) -> AffinePoint:
    mul = mul or Multiplier()
    if P.infinity or P.y.value == 0:
        return AffinePoint.at_infinity()
    x, y = P.x, P.y
    xx = mul(x, x)
    num = _add(_add(_add(xx, xx), xx), c.element(c.a))
    lam = mul(num, modinv(_add(y, y)))
    return _from_slope(lam, x, y, x, c, mul)


def point_add(P: AffinePoint, Q: AffinePoint, c: CurveParams, mul=None) -> AffinePoint:
    mul = mul or Multiplier()
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    if P.x == Q.x:
        if P.y == Q.y:
            return point_double(P, c, mul)
        return AffinePoint.at_infinity()
    lam = mul(_sub(Q.y, P.y), modinv(_sub(Q.x, P.x)))
    return _from_slope(lam, P.x, P.y, Q.x, c, mul)


SECP256K1 = CurveParams(
    name="secp256k1",
    modulus=Modulus(2 ** 256 - 2 ** 32 - 977),
    a=0,
    b=7,
    generator=(
        0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
        0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
    ),
    bits=256,
)

BN254 = CurveParams(
    name="bn254",
    modulus=Modulus(0x30644E72E131A029B85045B68181585D97816A916871CA8D3C208C16D87CFD47),
    a=0,
    b=3,
    generator=(1, 2),
    bits=254,
)

CURVES = {c.name: c for c in (SECP256K1, BN254)}
