"""Small finite fields GF(p^m) and the point sets the matrix groups act on.

Field elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` are
the coefficients in the polynomial basis ``1, x, ..., x^(m-1)``.  The
modulus is the lexicographically smallest monic irreducible polynomial of
degree ``m`` (coefficient tuples compared from the constant term up), so a
given ``(p, m)`` always produces the same labelling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

__all__ = [
    "FieldSpec",
    "FieldElement",
    "ProjectivePoint",
    "field",
    "frobenius",
    "projective_line",
    "suzuki_ovoid",
    "is_irreducible",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# Polynomials over GF(p) are coefficient lists, constant term first.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _polymod(prod, f, p)


def _polypowmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(a, f, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial ``f`` (constant term first)."""
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if _polypowmod(x, p ** m, f, p) != _polymod(x, f, p):
        return False
    for r in _prime_factors(m):
        h = _polypowmod(x, p ** (m // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _polygcd(f, _trim(h), p)
        if len(g) > 1:
            return False
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^m) with a fixed modulus and precomputed log tables."""

    p: int
    m: int
    modulus: tuple[int, ...]
    _exp: np.ndarray = dc_field(repr=False)
    _log: np.ndarray = dc_field(repr=False)
    _add: np.ndarray = dc_field(repr=False)
    _neg: np.ndarray = dc_field(repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def primitive(self) -> int:
        return int(self._exp[1 % (self.q - 1)])

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    # integer-level arithmetic; used by the group constructors

    def add(self, a: int, b: int) -> int:
        return int(self._add[a, b])

    def neg(self, a: int) -> int:
        return int(self._neg[a])

    def sub(self, a: int, b: int) -> int:
        return int(self._add[a, self._neg[b]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return int(self._exp[(self._log[a] * e) % (self.q - 1)])

    def frob(self, a: int, i: int = 1) -> int:
        return self.pow(a, self.p ** (i % self.m))

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def encode(self, coeffs) -> int:
        return sum(int(c) % self.p * self.p ** i for i, c in enumerate(coeffs))

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.q)]


@lru_cache(maxsize=None)
def field(p: int, m: int = 1) -> FieldSpec:
    """GF(p^m) with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("degree must be at least 1")
    modulus = None
    for low in itertools.product(range(p), repeat=m):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            modulus = tuple(cand)
            break
    assert modulus is not None
    q = p ** m
    f = list(modulus)

    def to_poly(v):
        return _trim([(v // p ** i) % p for i in range(m)])

    def from_poly(a):
        return sum(c * p ** i for i, c in enumerate(a))

    exp = np.zeros(q - 1, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    for g in range(1, q):
        seq = [1]
        cur = [1]
        gp = to_poly(g)
        for _ in range(q - 2):
            cur = _polymulmod(cur, gp, f, p)
            seq.append(from_poly(cur))
        if len(set(seq)) == q - 1:
            break
    for i, v in enumerate(seq):
        exp[i] = v
        log[v] = i
    digits = np.array([[(v // p ** i) % p for i in range(m)] for v in range(q)])
    weights = p ** np.arange(m)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    neg = ((-digits) % p) @ weights
    return FieldSpec(p, m, modulus, exp, log, add.astype(np.int64),
                     neg.astype(np.int64))


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.spec.encode([other])
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self._coerce(other), self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self.value, self._coerce(other)))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.spec, self.spec.inv(self.value))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self):
        return f"{self.spec!r}[{self.value}]"


def frobenius(x: FieldElement, i: int) -> FieldElement:
    """``x ** (p ** i)``."""
    return FieldElement(x.spec, x.spec.frob(x.value, i))


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates scaled so the first nonzero entry is 1."""

    coords: tuple[int, ...]

    @classmethod
    def normalized(cls, spec: FieldSpec, coords) -> "ProjectivePoint":
        coords = tuple(int(c) for c in coords)
        for c in coords:
            if c:
                if c == 1:
                    return cls(coords)
                inv = spec.inv(c)
                return cls(tuple(spec.mul(inv, x) for x in coords))
        raise ValueError("the zero vector is not a projective point")


def projective_line(spec: FieldSpec) -> list[ProjectivePoint]:
    """The q+1 points: ``[x:1]`` by encoding of ``x``, then ``[1:0]``."""
    pts = [ProjectivePoint.normalized(spec, (x, 1)) for x in range(spec.q)]
    pts.append(ProjectivePoint((1, 0)))
    return pts


def suzuki_theta(spec: FieldSpec, x: int) -> int:
    """The field automorphism ``x -> x^(2^(a+1))`` whose square is squaring."""
    a = (spec.m - 1) // 2
    return spec.frob(x, a + 1)


def suzuki_ovoid(spec: FieldSpec) -> list[ProjectivePoint]:
    """The q^2+1 ovoid points ``[1 : b : c : bc + b^(theta+2) + c^theta]`` and ``[0:0:0:1]``."""
    if spec.p != 2 or spec.m < 3 or spec.m % 2 == 0:
        raise ValueError(f"Suzuki ovoid needs q = 2^(2a+1) with a >= 1, got {spec!r}")
    pts = []
    for b in range(spec.q):
        tb = suzuki_theta(spec, b)
        b_theta2 = spec.mul(tb, spec.mul(b, b))
        for c in range(spec.q):
            z = spec.add(spec.add(spec.mul(b, c), b_theta2), suzuki_theta(spec, c))
            pts.append(ProjectivePoint((1, b, c, z)))
    pts.append(ProjectivePoint((0, 0, 0, 1)))
    return pts
