"""Arithmetic in the prime field GF(p) for a prime chosen at runtime.

Matrices and equation systems elsewhere in the package store plain ``int``
residues for speed; :class:`PrimeField` provides the operations on those, and
:class:`FieldElement` is the checked value type for callers who want operand
moduli verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ContractViolation

MAX_MODULUS = 2**63


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime_above(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    q = max(n + 1, 2)
    while not is_prime(q):
        q += 1
    return q


@lru_cache(maxsize=None)
def _checked_modulus(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise ContractViolation(f"field modulus must be an int, got {p!r}")
    if p >= MAX_MODULUS:
        raise ContractViolation(f"modulus {p} does not fit in a 64-bit word")
    if not is_prime(p):
        raise ContractViolation(f"modulus {p} is not prime")
    return p


@dataclass(frozen=True)
class PrimeField:
    """GF(p). Primality is verified by trial division at construction."""

    p: int

    def __post_init__(self):
        _checked_modulus(self.p)

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.p)]

    # int-level helpers used by the solvers
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ContractViolation(
                f"{self.value} is not a canonical residue mod {self.field.p}")

    @property
    def p(self) -> int:
        return self.field.p

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise ContractViolation(f"expected FieldElement, got {type(other).__name__}")
        if other.field.p != self.field.p:
            raise ContractViolation(
                f"mixed moduli: GF({self.field.p}) and GF({other.field.p})")

    def __add__(self, other):
        return fp_add(self, other)

    def __sub__(self, other):
        self._check(other)
        return FieldElement((self.value - other.value) % self.p, self.field)

    def __mul__(self, other):
        return fp_mul(self, other)

    def __neg__(self):
        return FieldElement((-self.value) % self.p, self.field)

    def __truediv__(self, other):
        self._check(other)
        return fp_mul(self, fp_inv(other))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def fp_add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement((a.value + b.value) % a.p, a.field)


def fp_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    # Python ints are arbitrary precision, so the product never overflows.
    return FieldElement((a.value * b.value) % a.p, a.field)


def fp_inv(a: FieldElement) -> FieldElement:
    if not isinstance(a, FieldElement):
        raise ContractViolation(f"expected FieldElement, got {type(a).__name__}")
    if a.value == 0:
        raise ZeroDivisionError(f"0 has no inverse in GF({a.p})")
    return FieldElement(pow(a.value, a.p - 2, a.p), a.field)
