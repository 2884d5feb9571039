"""Arithmetic in GF(p^k) with a fixed polynomial basis.

An element is stored as the integer ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``
of its coefficient vector, so integer order is lexicographic order on
``(c_{k-1}, ..., c_0)``.  The modulus is the first monic irreducible of
degree ``k`` in that same lexicographic order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ArgumentError


def prime_power(q: int) -> tuple[int, int] | None:
    """``(p, k)`` with ``q = p**k`` and ``p`` prime, else ``None``."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    # polynomials are coefficient lists, lowest degree first; m is monic
    a = a[:]
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[i + shift] = (a[i + shift] - c * mc) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _monic_polys(p: int, degree: int):
    for tail in itertools.product(range(p), repeat=degree):
        # tail is (c_{d-1}, ..., c_0); emit lowest-degree-first with leading 1
        yield list(reversed(tail)) + [1]


def _is_irreducible(f: list[int], p: int) -> bool:
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(f, g, p):
                return False
    return True


def first_irreducible(p: int, k: int) -> tuple[int, ...]:
    for f in _monic_polys(p, k):
        if _is_irreducible(f, p):
            return tuple(f)
    raise ArgumentError(f"no irreducible polynomial of degree {k} over GF({p})")


class GaloisField:
    """The field with ``q = p**k`` elements, with full operation tables."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise ArgumentError(f"{q} is not a prime power")
        self.q = q
        self.p, self.k = pk
        self.modulus = first_irreducible(self.p, self.k)
        p, k = self.p, self.k
        coeffs = [[(v // p**i) % p for i in range(k)] for v in range(q)]
        self.add_table = np.array(
            [[self._encode([(a + b) % p for a, b in zip(ca, cb)]) for cb in coeffs] for ca in coeffs],
            dtype=np.int64,
        )
        mul = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(x, q):
                prod = [0] * (2 * k)
                for i, a in enumerate(coeffs[x]):
                    if a:
                        for j, b in enumerate(coeffs[y]):
                            prod[i + j] = (prod[i + j] + a * b) % p
                v = self._encode(_poly_mod(prod, list(self.modulus), p))
                mul[x, y] = mul[y, x] = v
        self.mul_table = mul
        self.neg_table = np.argmax(self.add_table == 0, axis=1)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = np.argmax(mul[1:] == 1, axis=1)
        self.inv_table = inv
        for t in (self.add_table, self.mul_table, self.neg_table, self.inv_table):
            t.flags.writeable = False

    def _encode(self, c: list[int]) -> int:
        return sum(int(x) * self.p**i for i, x in enumerate(c))

    def __repr__(self) -> str:
        return f"GaloisField({self.q})"

    def __call__(self, value: int) -> FieldElement:
        if not 0 <= value < self.q:
            raise ArgumentError(f"{value} is not an element of GF({self.q})")
        return FieldElement(self, value)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def squares(self) -> list[int]:
        """Nonzero squares as element values, sorted."""
        return sorted({int(self.mul_table[x, x]) for x in range(1, self.q)})

    def primitive_element(self) -> int:
        for g in range(1, self.q):
            x, k = g, 1
            while x != 1:
                x = int(self.mul_table[x, g])
                k += 1
            if k == self.q - 1:
                return g
        raise ArgumentError("no primitive element")  # pragma: no cover


@dataclass(frozen=True)
class FieldElement:
    field: GaloisField
    value: int

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def k(self) -> int:
        return self.field.k

    @property
    def coefficients(self) -> tuple[int, ...]:
        return tuple((self.value // self.p**i) % self.p for i in range(self.k))

    def _same(self, other: FieldElement) -> None:
        if other.field is not self.field:
            raise ArgumentError("elements of different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field, int(self.field.add_table[self.value, other.value]))

    def __sub__(self, other: FieldElement) -> FieldElement:
        return self + (-other)

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, int(self.field.neg_table[self.value]))

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field, int(self.field.mul_table[self.value, other.value]))

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(self.field, int(self.field.inv_table[self.value]))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * other.inverse()

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"GF({self.field.q})<{self.value}>"


@lru_cache(maxsize=None)
def galois_field(q: int) -> GaloisField:
    return GaloisField(q)
