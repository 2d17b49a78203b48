"""Group families: permutation constructors and closed-form order counts.

The constructors turn matrix groups into permutation groups (Moebius action
on the projective line, 4x4 Suzuki matrices on the ovoid).  The evaluators
count elements from the partition of each group into trivially intersecting
cyclic subgroups.  The two code paths share nothing on purpose, so
enumeration can check the formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import field as ff
from .perm import DEFAULT_CAP, ElementSet, Permutation, generate
from .spectrum import OrderSpectrum, divisors, rho, rho_star, totient

__all__ = [
    "FamilySpec",
    "FamilyError",
    "prime_power",
    "constructor",
    "build",
    "classical_order",
    "psl2_partition",
    "psl2_rho",
    "psl2_even_rho",
    "psl2_spectrum",
    "pgl2_spectrum",
    "suzuki_rho",
    "suzuki_spectrum",
    "suzuki_two_split",
    "sn_spectrum",
    "an_spectrum",
    "partitions",
    "alt_rho_star_p",
    "spq_rho_star",
    "spq_bound",
    "psigmal2_coset_rho",
]

TAGS = ("PSL2", "PGL2", "PSigmaL2", "PGammaL2", "Sz", "Sym", "Alt", "Cyclic")


class FamilyError(ValueError):
    pass


def prime_power(q: int) -> tuple[int, int]:
    """``(p, m)`` with ``q = p**m``, or raise."""
    if q < 2:
        raise FamilyError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise FamilyError(f"{q} is not a prime power")
    return p, m


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    param: int

    def __post_init__(self):
        if self.tag not in TAGS:
            raise FamilyError(f"unknown family {self.tag!r}")
        if self.tag in ("Sym", "Alt", "Cyclic"):
            if self.param < 1:
                raise FamilyError("n must be at least 1")
        else:
            p, m = prime_power(self.param)
            if self.tag == "Sz" and (p != 2 or m < 3 or m % 2 == 0):
                raise FamilyError(f"Sz(q) needs q = 2^(2a+1) with a >= 1, got {self.param}")

    @property
    def p(self) -> int:
        return prime_power(self.param)[0]

    @property
    def m(self) -> int:
        return prime_power(self.param)[1]

    @property
    def r(self) -> int:
        """``2^a`` for ``Sz(2^(2a+1))``."""
        return 2 ** ((self.m - 1) // 2)

    def __str__(self):
        return f"{self.tag}({self.param})"


def classical_order(spec: FamilySpec) -> int:
    q = spec.param
    if spec.tag == "Sym":
        return math.factorial(q)
    if spec.tag == "Alt":
        return max(1, math.factorial(q) // 2)
    if spec.tag == "Cyclic":
        return q
    if spec.tag == "Sz":
        return q * q * (q - 1) * (q * q + 1)
    d = math.gcd(2, q - 1)
    base = q * (q * q - 1)
    return {
        "PSL2": base // d,
        "PGL2": base,
        "PSigmaL2": base // d * spec.m,
        "PGammaL2": base * spec.m,
    }[spec.tag]


# ---------------------------------------------------------------------------
# constructors


def _matrix_perm(fs, points, index, matrix) -> Permutation:
    img = []
    for pt in points:
        v = [0] * len(matrix)
        for i, row in enumerate(matrix):
            acc = 0
            for a, x in zip(row, pt.coords):
                acc = fs.add(acc, fs.mul(a, x))
            v[i] = acc
        img.append(index[ff.ProjectivePoint.normalized(fs, v)])
    return Permutation(tuple(img))


def _frobenius_perm(fs, points, index) -> Permutation:
    img = [index[ff.ProjectivePoint.normalized(fs, [fs.frob(c) for c in pt.coords])]
           for pt in points]
    return Permutation(tuple(img))


def _line_generators(spec: FamilySpec) -> tuple[int, list[Permutation]]:
    fs = ff.field(spec.p, spec.m)
    pts = ff.projective_line(fs)
    index = {pt: i for i, pt in enumerate(pts)}
    w = fs.primitive
    one, zero = 1, 0
    minus_one = fs.neg(1)
    mats = [
        ((one, one), (zero, one)),
        ((zero, one), (minus_one, zero)),
    ]
    if spec.tag in ("PSL2", "PSigmaL2"):
        mats.append(((w, zero), (zero, fs.inv(w))))
    else:
        mats.append(((w, zero), (zero, one)))
    gens = [_matrix_perm(fs, pts, index, m) for m in mats]
    if spec.tag in ("PSigmaL2", "PGammaL2") and spec.m > 1:
        gens.append(_frobenius_perm(fs, pts, index))
    return len(pts), gens


def _suzuki_generators(spec: FamilySpec) -> tuple[int, list[Permutation]]:
    fs = ff.field(2, spec.m)
    pts = ff.suzuki_ovoid(fs)
    index = {pt: i for i, pt in enumerate(pts)}

    def theta(x):
        return ff.suzuki_theta(fs, x)

    def unipotent(a, b):
        ta = theta(a)
        a_theta1 = fs.mul(ta, a)
        a_theta2 = fs.mul(a_theta1, a)
        corner = fs.add(fs.add(fs.mul(a, b), a_theta2), theta(b))
        return (
            (1, 0, 0, 0),
            (a, 1, 0, 0),
            (b, ta, 1, 0),
            (corner, fs.add(b, a_theta1), a, 1),
        )

    k = fs.primitive
    tk = theta(k)
    torus = (
        (1, 0, 0, 0),
        (0, k, 0, 0),
        (0, 0, fs.mul(tk, k), 0),
        (0, 0, 0, fs.mul(fs.mul(tk, k), k)),
    )
    weyl = ((0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0))
    mats = [unipotent(1, 0), unipotent(0, 1), torus, weyl]
    return len(pts), [_matrix_perm(fs, pts, index, m) for m in mats]


def constructor(spec: FamilySpec) -> tuple[int, list[Permutation]]:
    """Degree and permutation generators for ``spec``."""
    n = spec.param
    if spec.tag == "Cyclic":
        return n, [Permutation(tuple((i + 1) % n for i in range(n)))] if n > 1 else []
    if spec.tag == "Sym":
        if n < 2:
            return n, []
        gens = [Permutation.from_cycles([list(range(1, n + 1))], n)]
        if n > 2:
            gens.append(Permutation.from_cycles([[1, 2]], n))
        return n, gens
    if spec.tag == "Alt":
        if n < 3:
            return n, []
        long = list(range(1, n + 1)) if n % 2 else list(range(2, n + 1))
        gens = [Permutation.from_cycles([[1, 2, 3]], n)]
        if n > 3:
            gens.append(Permutation.from_cycles([long], n))
        return n, gens
    if spec.tag == "Sz":
        return _suzuki_generators(spec)
    return _line_generators(spec)


def build(spec: FamilySpec, cap: int = DEFAULT_CAP) -> ElementSet:
    """Enumerate ``spec`` and check the result against the classical order."""
    degree, gens = constructor(spec)
    g = generate(gens, cap=cap, label=str(spec), degree=degree)
    expected = classical_order(spec)
    if len(g) != expected:
        raise AssertionError(f"{spec}: generated {len(g)} elements, expected {expected}")
    return g


# ---------------------------------------------------------------------------
# closed forms built from trivially intersecting cyclic subgroups


def _partition_spectrum(unipotent: tuple[int, int] | None,
                        cyclic_families: list[tuple[int, int]]) -> OrderSpectrum:
    """Spectrum from ``(order, count)`` of a unipotent class and a list of
    ``(cyclic order, number of subgroups)`` families."""
    counts: dict[int, int] = {1: 1}
    if unipotent:
        o, c = unipotent
        counts[o] = counts.get(o, 0) + c
    for n, how_many in cyclic_families:
        for d in divisors(n):
            if d > 1:
                counts[d] = counts.get(d, 0) + how_many * totient(d)
    return OrderSpectrum(counts)


def _odd_q(q: int, *, at_least: int = 5) -> int:
    p, _ = prime_power(q)
    if p == 2 or q < at_least:
        raise FamilyError(f"need an odd prime power q >= {at_least}, got {q}")
    return p


def psl2_partition(q: int) -> dict[str, int]:
    """The five class totals of PSL_2(q), q odd, keyed by description."""
    _odd_q(q)
    if q % 4 == 1:
        return {
            "identity": 1,
            "order p": q * q - 1,
            "order dividing (q+1)/2": (q - 1) ** 2 * q // 4,
            "order dividing (q-1)/2, not 2": (q - 5) * q * (q + 1) // 4,
            "order 2": q * (q + 1) // 2,
        }
    return {
        "identity": 1,
        "order p": q * q - 1,
        "order dividing (q-1)/2": (q - 3) * q * (q + 1) // 4,
        "order dividing (q+1)/2, not 2": (q - 3) * q * (q - 1) // 4,
        "order 2": q * (q - 1) // 2,
    }


def psl2_rho(q: int, k: int) -> Fraction:
    """rho_k(PSL_2(q)) for odd q >= 5, from the class partition.

    Within each family of trivially intersecting cyclic subgroups of order
    ``n``, a subgroup holds ``gcd(k, n) - 1`` nonidentity elements of order
    dividing ``k``.
    """
    p = _odd_q(q)
    order = q * (q * q - 1) // 2
    split, nonsplit = (q - 1) // 2, (q + 1) // 2
    n_split, n_nonsplit = q * (q + 1) // 2, q * (q - 1) // 2
    even_torus, odd_torus = (split, nonsplit) if q % 4 == 1 else (nonsplit, split)
    n_even, n_odd = (n_split, n_nonsplit) if q % 4 == 1 else (n_nonsplit, n_split)
    two = 1 if k % 2 == 0 else 0
    hits = 1
    if k % p == 0:
        hits += q * q - 1
    hits += n_odd * (math.gcd(k, odd_torus) - 1)
    hits += n_even * (math.gcd(k, even_torus) - 1 - two)
    hits += n_even * two
    return Fraction(hits, order)


def psl2_even_rho(q: int, k: int) -> Fraction:
    """rho_k(PSL_2(2^a)) for a >= 2."""
    p, a = prime_power(q)
    if p != 2 or a < 2:
        raise FamilyError(f"need q = 2^a with a >= 2, got {q}")
    order = q * (q * q - 1)
    hits = 1
    if k % 2 == 0:
        hits += q * q - 1
    hits += q * (q + 1) // 2 * (math.gcd(k, q - 1) - 1)
    hits += q * (q - 1) // 2 * (math.gcd(k, q + 1) - 1)
    return Fraction(hits, order)


@lru_cache(maxsize=None)
def pgl2_spectrum(q: int) -> OrderSpectrum:
    """PGL_2(q) for any prime power q (equal to PSL_2(q) when q is even)."""
    p, _ = prime_power(q)
    return _partition_spectrum((p, q * q - 1),
                               [(q - 1, q * (q + 1) // 2), (q + 1, q * (q - 1) // 2)])


@lru_cache(maxsize=None)
def psl2_spectrum(q: int) -> OrderSpectrum:
    """PSL_2(q) for any prime power q >= 2."""
    p, _ = prime_power(q)
    if p == 2:
        return pgl2_spectrum(q)
    return _partition_spectrum((p, q * q - 1),
                               [((q - 1) // 2, q * (q + 1) // 2),
                                ((q + 1) // 2, q * (q - 1) // 2)])


def _suzuki_params(q: int) -> tuple[int, int]:
    p, m = prime_power(q)
    if p != 2 or m < 3 or m % 2 == 0:
        raise FamilyError(f"need q = 2^(2a+1) with a >= 1, got {q}")
    return m, 2 ** ((m - 1) // 2)


def suzuki_two_split(q: int) -> dict[str, tuple[int, int]]:
    """Candidate (order-2, order-4) counts for Sz(q).

    ``"centre"``: each of the q^2+1 Sylow 2-subgroups has a centre of order
    q holding all its involutions, so (q-1)(q^2+1) involutions.
    ``"as_printed"``: the split q(q^2+1) / (q^2-q-1)(q^2+1).
    Both sum to (q^2-1)(q^2+1).
    """
    _suzuki_params(q)
    return {
        "centre": ((q - 1) * (q * q + 1), (q * q - q) * (q * q + 1)),
        "as_printed": (q * (q * q + 1), (q * q - q - 1) * (q * q + 1)),
    }


def _suzuki_families(q: int) -> list[tuple[int, int]]:
    _, r = _suzuki_params(q)
    return [
        (q + 2 * r + 1, (q - 2 * r + 1) * (q - 1) * q * q // 4),
        (q - 2 * r + 1, (q + 2 * r + 1) * (q - 1) * q * q // 4),
        (q - 1, q * q * (q * q + 1) // 2),
    ]


def suzuki_rho(q: int, k: int, split: str = "centre") -> Fraction:
    """rho_k(Sz(q)) from the cyclic-subgroup partition."""
    invol, four = suzuki_two_split(q)[split]
    order = q * q * (q - 1) * (q * q + 1)
    hits = 1
    if k % 2 == 0:
        hits += invol
    if k % 4 == 0:
        hits += four
    for n, how_many in _suzuki_families(q):
        hits += how_many * (math.gcd(k, n) - 1)
    return Fraction(hits, order)


@lru_cache(maxsize=None)
def suzuki_spectrum(q: int) -> OrderSpectrum:
    invol, four = suzuki_two_split(q)["centre"]
    base = _partition_spectrum(None, _suzuki_families(q)).counts
    base[2] = invol
    base[4] = four
    return OrderSpectrum(base)


# ---------------------------------------------------------------------------
# symmetric and alternating groups via cycle types


def partitions(n: int, largest: int | None = None):
    """Partitions of ``n`` as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def _class_size(n: int, parts: tuple[int, ...]) -> int:
    denom = 1
    for c in set(parts):
        mult = parts.count(c)
        denom *= c ** mult * math.factorial(mult)
    return math.factorial(n) // denom


@lru_cache(maxsize=None)
def sn_spectrum(n: int) -> OrderSpectrum:
    counts: dict[int, int] = {}
    for parts in partitions(n):
        o = math.lcm(*parts)
        counts[o] = counts.get(o, 0) + _class_size(n, parts)
    return OrderSpectrum(counts)


@lru_cache(maxsize=None)
def an_spectrum(n: int) -> OrderSpectrum:
    counts: dict[int, int] = {}
    for parts in partitions(n):
        if (n - len(parts)) % 2:
            continue
        o = math.lcm(*parts)
        counts[o] = counts.get(o, 0) + _class_size(n, parts)
    return OrderSpectrum(counts)


def alt_rho_star_p(n: int, p: int, *, alternating: bool = False) -> Fraction:
    """rho*_p of S_n (or A_n) as a sum over the number of p-cycles."""
    if not ff.is_prime(p):
        raise FamilyError(f"{p} is not prime")
    if n < 1:
        raise FamilyError("n must be positive")
    total = Fraction(0)
    for m in range(1, n // p + 1):
        if alternating and p == 2 and m % 2:
            continue
        total += Fraction(1, p ** m * math.factorial(m) * math.factorial(n - m * p))
    if alternating:
        total *= 2
    return total


def spq_rho_star(p: int, q: int, n: int | None = None) -> Fraction:
    """rho*_{pq}(S_n) for primes p > q; ``n`` defaults to ``pq``.

    With ``n = pq`` this is the double sum over x p-cycles and y q-cycles
    plus the single pq-cycle term; otherwise the full triple sum, where z
    counts pq-cycles.
    """
    if not (ff.is_prime(p) and ff.is_prime(q)) or p <= q:
        raise FamilyError(f"need primes p > q, got p={p}, q={q}")
    if n is None:
        total = Fraction(1, p * q)
        for x in range(1, q):
            for y in range(1, p * (q - x) // q + 1):
                total += Fraction(1, p ** x * math.factorial(x) * q ** y * math.factorial(y)
                                  * math.factorial(p * q - x * p - y * q))
        return total
    total = Fraction(0)
    for x in range(n // p + 1):
        for y in range((n - x * p) // q + 1):
            rest = n - x * p - y * q
            z_min = 0 if x and y else 1
            for z in range(z_min, rest // (p * q) + 1):
                total += Fraction(1, p ** x * math.factorial(x) * q ** y * math.factorial(y)
                                  * (p * q) ** z * math.factorial(z)
                                  * math.factorial(rest - z * p * q))
    return total


def spq_bound(p: int, q: int) -> Fraction:
    return Fraction(1, p * q) + Fraction(q - 1, p ** q * math.factorial(q))


def psigmal2_coset_rho(p: int, qdeg: int, d: int, variant: str = "Gamma",
                       inner=None) -> Fraction:
    """rho*_{d*qdeg} of PGammaL_2(p^qdeg) (or PSigmaL_2) from the split
    into the inner-diagonal part and the field-automorphism cosets.

    ``inner(tag, q)`` returns the spectrum of ``PGL2``/``PSL2`` over GF(q);
    it defaults to the closed forms.
    """
    if variant not in ("Gamma", "Sigma"):
        raise FamilyError("variant must be 'Gamma' or 'Sigma'")
    if not (ff.is_prime(p) and ff.is_prime(qdeg)):
        raise FamilyError("p and the field degree must be primes")
    if ((p - 1) * p * (p + 1)) % qdeg == 0:
        raise FamilyError(f"{qdeg} divides (p-1)p(p+1) for p={p}")
    if d < 1 or not any(x % d == 0 for x in (p - 1, p, p + 1)):
        raise FamilyError(f"{d} divides none of p-1, p, p+1")
    if inner is None:
        inner = {"PGL2": pgl2_spectrum, "PSL2": psl2_spectrum}.__getitem__
        get = lambda tag, q: inner(tag)(q)  # noqa: E731
    else:
        get = inner
    tag = "PGL2" if variant == "Gamma" else "PSL2"
    big = get(tag, p ** qdeg)
    small = get(tag, p)
    return (Fraction(1, qdeg) * rho_star(big, d * qdeg)
            + Fraction(qdeg - 1, qdeg) * rho_star(small, d))


def displayed_formulas(family: str, q: int) -> dict[int, Fraction]:
    """The closed forms quoted for each family, keyed by k."""
    F = Fraction
    if family == "PSL2":
        p, _ = prime_power(q)
        n = (q - 1) * q * (q + 1)
        out = {
            (q - 1) // 2: F(q * (q + 1) * (q - 3) // 2 + 2, n),
            (q + 1) // 2: F(q * (q - 1) ** 2 // 2 + 2, n),
            p * (q - 1) // 2: F(q * (q * q + 2 * q - 3), 2 * n),
            p * (q + 1) // 2: F(q * (q + 1) ** 2, 2 * n),
            (q - 1) * (q + 1) // 4: F(q - 2, q),
            p * (q + 1) * (q - 1) // 4: F(1),
        }
        if q % 4 == 1:
            out[q + 1] = F(q ** 3 + 3 * q + 4, 2 * n)
        else:
            out[q - 1] = F(q ** 3 - 5 * q + 4, 2 * n)
        return out
    if family == "PSL2even":
        n = 2 * (q - 1) * q * (q + 1)
        return {
            q - 1: F((q - 2) * q * (q + 1) + 2, n),
            q + 1: F((q - 1) * q * q + 2, n),
            2 * (q - 1): F((q - 1) * q * (q + 2), n),
            2 * (q + 1): F(q * q * (q + 1), n),
            (q - 1) * (q + 1): F(q - 1, q),
            2 * (q - 1) * (q + 1): F(1),
        }
    if family == "Sz":
        _, r = _suzuki_params(q)
        order = q * q * (q - 1) * (q * q + 1)
        return {
            4 * (q * q + 1) * (q - 1): F(1),
            4 * (q * q + 1): F(q, 2 * (q - 1)),
            4 * (q - 1): F(q ** 3 + q - 2, 2 * (q ** 3 - q * q + q - 1)),
            # these two need the identity term 1/|G| added to the usual quotient
            (q + 2 * r + 1) * (q - 1): F(3 * q ** 3 - 6 * q * q + 2 * q * r + 3 * q - 2 * r - 4,
                                         4 * (q - 1) * (q * q + 1)) + F(1, order),
            (q - 2 * r + 1) * (q - 1): F(3 * q ** 3 - 6 * q * q - 2 * q * r + 3 * q + 2 * r - 4,
                                         4 * (q - 1) * (q * q + 1)) + F(1, order),
            q - 1: F(q - 2, 2 * (q - 1)) + F(1, order),
            q * q + 1: F(q * q - q, 2 * (q * q + 1)) + F(1, order),
        }
    raise FamilyError(f"no displayed formulas for {family}")


def displayed_field_extension(q: int) -> dict[str, Fraction]:
    """Closed forms for PGammaL_2(2^q) and PSigmaL_2(3^q), q prime > 3."""
    F = Fraction
    a, b = 2 ** q, 3 ** q
    return {
        "rho_2q PGammaL2(2^q)": F(a, q * (a - 1) * (a + 1)) + F(2 * (q - 1), 3 * q),
        "rho_3q PSigmaL2(3^q)": F(2 * b, q * (b - 1) * (b + 1)) + F(3 * (q - 1), 4 * q),
        "rho_q PGammaL2(2^q)": F(1, q * (a - 1) * a * (a + 1)) + F(q - 1, 6 * q),
    }

