"""Exact arithmetic in small finite fields GF(p^d).

Elements are packed into plain ints: the element with coefficient vector
(c_0, ..., c_{d-1}) over GF(p) is encoded as sum(c_i * p**i).  For p = 2 this
is the usual bitmask encoding, and the packed values enumerate the field as
exactly the integers in [0, order).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "FieldSpec",
    "FieldElement",
    "build_core_field",
    "extend_field",
    "embedding",
    "gf2_irreducible",
    "prime_field",
    "prime_power_field",
]

# Lexicographically smallest irreducible polynomial of each degree over GF(2),
# as a bitmask (bit i = coefficient of x^i).  Verified by Rabin's test.
_GF2_IRREDUCIBLE = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11B,
    9: 0x203, 10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201B, 14: 0x4021,
    15: 0x8003, 16: 0x1002B, 17: 0x20009, 18: 0x40009, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021, 24: 0x100001B,
    25: 0x2000009, 26: 0x400001B, 27: 0x8000027, 28: 0x10000003,
    29: 0x20000005, 30: 0x40000003, 31: 0x80000009, 32: 0x10000008D,
    33: 0x2000004B,
}


def gf2_irreducible(degree: int) -> int:
    """Fixed irreducible modulus for GF(2^degree), as a bitmask."""
    if degree not in _GF2_IRREDUCIBLE:
        raise ValueError(f"no fixed GF(2) modulus for degree {degree}")
    return _GF2_IRREDUCIBLE[degree]


class FieldMismatchError(ValueError):
    pass


def _poly_unpack(value: int, p: int, d: int) -> list[int]:
    coeffs = []
    for _ in range(d):
        value, c = divmod(value, p)
        coeffs.append(c)
    return coeffs


def _poly_pack(coeffs, p: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = value * p + (c % p)
    return value


@dataclass(frozen=True)
class FieldSpec:
    """GF(characteristic^degree) with an explicit irreducible modulus.

    `modulus` is the coefficient tuple (length degree + 1, little-endian) of a
    monic irreducible polynomial over GF(characteristic).
    """

    characteristic: int
    degree: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        p, d = self.characteristic, self.degree
        if p < 2 or d < 1:
            raise ValueError("need characteristic >= 2 and degree >= 1")
        if len(self.modulus) != d + 1 or self.modulus[d] != 1:
            raise ValueError("modulus must be monic of degree `degree`")
        if any(not (0 <= c < p) for c in self.modulus):
            raise ValueError("modulus coefficients out of range")

    @property
    def order(self) -> int:
        return self.characteristic ** self.degree

    # -- arithmetic on packed ints ------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.characteristic
        if p == 2:
            return a ^ b
        ca = _poly_unpack(a, p, self.degree)
        cb = _poly_unpack(b, p, self.degree)
        return _poly_pack([x + y for x, y in zip(ca, cb)], p)

    def neg(self, a: int) -> int:
        p = self.characteristic
        if p == 2:
            return a
        return _poly_pack([-c for c in _poly_unpack(a, p, self.degree)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, d = self.characteristic, self.degree
        if p == 2:
            # shift-and-reduce on bitmasks; no tables so any degree works
            m = _poly_pack(self.modulus, 2)
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if (a >> d) & 1:
                    a ^= m
            return r
        ca = _poly_unpack(a, p, d)
        cb = _poly_unpack(b, p, d)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus
        mod = self.modulus
        for i in range(len(prod) - 1, d - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(d + 1):
                    prod[i - d + j] = (prod[i - d + j] - c * mod[j]) % p
        return _poly_pack(prod[:d], p)

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        # a^(q-2); the field is tiny so this is plenty fast
        return self.pow(a, self.order - 2)

    def sample(self, rng) -> int:
        """Uniform element; deterministic given the generator state."""
        return int(rng.integers(0, self.order))

    def elements(self):
        return range(self.order)

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)


@dataclass(frozen=True)
class FieldElement:
    """Convenience wrapper over a packed element, with operator syntax."""

    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not (0 <= self.value < self.spec.order):
            raise ValueError("packed value out of range")

    def _check(self, other: "FieldElement"):
        if self.spec != other.spec:
            raise FieldMismatchError("elements of different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.add(self.value, other.value))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.sub(self.value, other.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.value, other.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def __bool__(self) -> bool:
        return self.value != 0


# -- field constructors ------------------------------------------------------


def _bitmask_to_coeffs(mask: int, degree: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(degree + 1))


@lru_cache(maxsize=None)
def gf2(degree: int) -> FieldSpec:
    return FieldSpec(2, degree, _bitmask_to_coeffs(gf2_irreducible(degree), degree))


def build_core_field(n: int) -> FieldSpec:
    """GF(2^b) with b = 3 + ceil(log2 n), so the order is at least 8n."""
    if n < 1:
        raise ValueError("need n >= 1")
    b = 3 + (n - 1).bit_length()
    return gf2(b)


def _poly_eval(coeffs, spec: FieldSpec, x: int) -> int:
    # Horner evaluation of a polynomial with small-integer coefficients,
    # coefficients interpreted in the prime subfield of `spec`.
    r = 0
    for c in reversed(coeffs):
        r = spec.add(spec.mul(r, x), c % spec.characteristic)
    return r


def _is_irreducible(coeffs, p: int) -> bool:
    """Trial division against all monic polynomials of degree <= deg/2."""
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    base = FieldSpec(p, 1, (0, 1)) if p > 2 else gf2(1)
    # roots first (degree-1 factors), then higher-degree trial division
    for half in range(1, deg // 2 + 1):
        for packed in range(p ** half):
            divisor = _poly_unpack(packed, p, half) + [1]
            if _poly_divides(divisor, coeffs, p):
                return False
    return True


def _poly_divides(div, num, p: int) -> bool:
    num = [c % p for c in num]
    dd = len(div) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * div[j]) % p
    return all(c == 0 for c in num[:dd])


@lru_cache(maxsize=None)
def _prime_field_extension(p: int, degree: int) -> FieldSpec:
    if degree == 1:
        return FieldSpec(p, 1, (0, 1))
    if p == 2 and degree in _GF2_IRREDUCIBLE:
        return gf2(degree)
    for packed in range(p ** degree):
        coeffs = tuple(_poly_unpack(packed, p, degree)) + (1,)
        if _is_irreducible(coeffs, p):
            return FieldSpec(p, degree, coeffs)
    raise RuntimeError(f"no irreducible polynomial found for GF({p}^{degree})")


def prime_field(p: int) -> FieldSpec:
    return _prime_field_extension(p, 1)


def prime_power_field(p: int, degree: int) -> FieldSpec:
    return _prime_field_extension(p, degree)


def extend_field(base: FieldSpec, min_order: int) -> FieldSpec:
    """Smallest extension GF(q^i) of GF(q) with order >= min_order.

    Returns `base` itself when it is already large enough.  The result is
    represented with a modulus over the prime subfield; use `embedding` to
    carry base elements across.
    """
    i = 1
    while base.order ** i < min_order:
        i += 1
    if i == 1:
        return base
    return _prime_field_extension(base.characteristic, base.degree * i)


def embedding(base: FieldSpec, target: FieldSpec):
    """Map packed elements of `base` into `target` as a field homomorphism.

    For a prime base this is the constant-polynomial embedding.  Otherwise we
    locate a root of the base modulus in the target field and extend by
    linearity, which is feasible at the small orders used here.
    """
    if target.characteristic != base.characteristic:
        raise ValueError("incompatible characteristics")
    if target.degree % base.degree != 0:
        raise ValueError("target is not an extension of base")
    p = base.characteristic
    if base.degree == 1:
        return lambda a: a % p
    if target.order > 1 << 20:
        raise ValueError("embedding search capped at order 2^20")
    root = None
    for x in target.elements():
        if _poly_eval(base.modulus, target, x) == 0:
            root = x
            break
    if root is None:
        raise RuntimeError("base modulus has no root in target field")
    powers = [1]
    for _ in range(base.degree - 1):
        powers.append(target.mul(powers[-1], root))

    def embed(a: int) -> int:
        out = 0
        for c, pw in zip(_poly_unpack(a, p, base.degree), powers):
            for _ in range(c):
                out = target.add(out, pw)
        return out

    return embed
