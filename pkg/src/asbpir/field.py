"""Arithmetic in small finite fields GF(p^e).

Elements are encoded as integers: the polynomial ``sum c_i x^i`` with
``0 <= c_i < p`` is stored as ``sum c_i p^i``.  Every field carries full
``q x q`` addition and multiplication tables so that matrix code can work
with plain integer arrays and fancy indexing.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_ORDER = 128

# Fixed moduli, coefficients listed from x^0 up to the leading x^e.
MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
    25: (1, 1, 1),  # x^2 + x + 1
    27: (1, 2, 0, 1),  # x^3 + 2x + 1
}


class FieldError(ValueError):
    """Raised for unsupported fields or invalid field operations."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` over GF(p)."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return a[:dm] + [0] * max(0, dm - len(a))


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    e = len(m) - 1
    if m[-1] != 1:
        return False
    if e <= 3:
        # no linear factor <=> irreducible in degree <= 3
        for x in range(p):
            if sum(c * x**i for i, c in enumerate(m)) % p == 0:
                return False
        return True
    # exhaustive check against every monic divisor of degree 1 .. e // 2
    for d in range(1, e // 2 + 1):
        for low in range(p**d):
            div = [(low // p**i) % p for i in range(d)] + [1]
            if not any(_poly_mod(list(m), tuple(div), p)):
                return False
    return True


class FiniteField:
    """GF(p^e) with precomputed operation tables.

    Instances are immutable and cached per ``(p, e)``; obtain them through
    :func:`make_field` or :func:`field_of_order`.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        q = self.q

        digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(e, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * e - 1)
                for i in range(e):
                    for j in range(e):
                        prod[i + j] += int(digits[a, i]) * int(digits[b, j])
                if e > 1:
                    prod = _poly_mod(prod, modulus, p)
                value = sum((c % p) * p**i for i, c in enumerate(prod[:e]))
                mul[a, b] = mul[b, a] = value
        neg = ((-digits) % p) @ weights
        sub = add[:, neg]
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            (b,) = np.nonzero(mul[a] == 1)[0][:1]
            inv[a] = b

        for table in (add, mul, neg, sub, inv):
            table.setflags(write=False)
        self.add_table = add
        self.mul_table = mul
        self.neg_table = neg
        self.sub_table = sub
        self.inv_table = inv

    def __repr__(self) -> str:
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e})"

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    @property
    def elements(self) -> list[FieldElement]:
        return [FieldElement(a, self) for a in range(self.q)]

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)

    # integer-level operations, used by the matrix code
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero in " + repr(self))
        return int(self.inv_table[a])

    def minus_one(self) -> int:
        return int(self.neg_table[1])


class FieldElement:
    """A single element of a :class:`FiniteField`."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: FiniteField):
        value = int(value)
        if not 0 <= value < field.q:
            raise FieldError(f"{value} is not an element encoding of {field!r}")
        self.value = value
        self.field = field

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError(f"field mismatch: {self.field!r} vs {other.field!r}")
            return other.value
        return FieldElement(other, self.field).value

    def __add__(self, other):
        return FieldElement(self.field.add(self.value, self._other(other)), self.field)

    def __sub__(self, other):
        return FieldElement(self.field.sub(self.value, self._other(other)), self.field)

    def __mul__(self, other):
        return FieldElement(self.field.mul(self.value, self._other(other)), self.field)

    def __truediv__(self, other):
        return self * FieldElement(self._other(other), self.field).inv()

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def inv(self) -> FieldElement:
        return FieldElement(self.field.inv(self.value), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.value))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field!r}({self.value})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FiniteField:
    """Return GF(p^e) with the built-in modulus for that order."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    q = p**e
    if q > MAX_ORDER:
        raise FieldError(f"field order {q} exceeds the supported maximum {MAX_ORDER}")
    if e == 1:
        return FiniteField(p, 1, ())
    if q not in MODULI:
        raise FieldError(f"no modulus is listed for GF({p}^{e})")
    modulus = MODULI[q]
    if len(modulus) != e + 1 or not _is_irreducible(modulus, p):
        raise FieldError(f"listed modulus for GF({q}) is not an irreducible polynomial of degree {e}")
    return FiniteField(p, e, modulus)


def factor_prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p^e``; raises for non prime powers."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


def field_of_order(q: int) -> FiniteField:
    return make_field(*factor_prime_power(q))
