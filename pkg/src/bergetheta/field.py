"""Arithmetic in prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

# keeps every product of two reduced values inside int64
MAX_MODULUS = 2**31 - 1


class FieldError(ValueError):
    pass


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"modulus must be prime, got {p!r}")
    if p > MAX_MODULUS:
        raise FieldError(f"modulus {p} exceeds supported maximum {MAX_MODULUS}")
    return p


@dataclass(frozen=True, slots=True)
class FieldElement:
    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            raise FieldError(f"{self.value} is not reduced modulo {self.p}")

    def _other(self, b) -> int:
        if isinstance(b, FieldElement):
            if b.p != self.p:
                raise FieldError(f"modulus mismatch: {self.p} vs {b.p}")
            return b.value
        if isinstance(b, int):
            return b % self.p
        return NotImplemented

    def __add__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement((self.value + v) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement((self.value - v) % self.p, self.p)

    def __rsub__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement((v - self.value) % self.p, self.p)

    def __mul__(self, b):
        v = self._other(b)
        return NotImplemented if v is NotImplemented else FieldElement(self.value * v % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.p, self.p)

    def __truediv__(self, b):
        v = self._other(b)
        if v is NotImplemented:
            return NotImplemented
        return self * FieldElement(v, self.p).inv()

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse modulo {self.p}")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        # square-and-multiply; a**0 == 1 even for a == 0
        result, base = 1, self.value
        while e:
            if e & 1:
                result = result * base % self.p
            base = base * base % self.p
            e >>= 1
        return FieldElement(result % self.p, self.p)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


class PrimeField:
    """Factory for elements of F_p."""

    def __init__(self, p: int):
        self.p = check_modulus(p)

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self.p)

    def __iter__(self):
        return (FieldElement(v, self.p) for v in range(self.p))

    def __len__(self):
        return self.p

    @property
    def zero(self):
        return FieldElement(0, self.p)

    @property
    def one(self):
        return FieldElement(1 % self.p, self.p)

    def __repr__(self):
        return f"PrimeField({self.p})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def power(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise FieldError(f"exponent must be non-negative, got {e}")
    return a**e
