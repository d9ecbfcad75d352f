"""Interleaved modular multiplication engines and an in-SRAM simulator."""
from .arith import FieldElement, Modulus, Operand, oracle_modmul
from .booth import BoothDigit, booth_digits, build_overflow_lut, build_radix4_lut
from .engines import interleaved_modmul, r4csa_modmul, radix4_modmul

__all__ = [
    "BoothDigit", "FieldElement", "Modulus", "Operand", "booth_digits", "build_overflow_lut",
    "build_radix4_lut", "interleaved_modmul", "oracle_modmul", "r4csa_modmul", "radix4_modmul",
]
__version__ = "0.1.0"
