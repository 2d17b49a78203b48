"""Order spectra and the element-order ratios rho_k / rho*_k.

An :class:`OrderSpectrum` records, for one finite group, how many elements
have each order.  Everything here is exact: counts are Python ints and
ratios are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "InvalidSpectrum",
    "OrderSpectrum",
    "make_spectrum",
    "trivial",
    "cyclic",
    "rho",
    "rho_star",
    "exponent",
    "direct_product",
    "power",
    "construction2_n",
    "wreath_c2",
    "totient",
    "divisors",
    "format_rational",
    "parse_rational",
    "dumps",
    "loads",
]


class InvalidSpectrum(ValueError):
    """Raised when order counts cannot come from a finite group."""


def totient(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


class OrderSpectrum:
    """Map from element order to the number of elements of that order.

    Instances are immutable and compare equal iff they hold the same counts.
    Use :func:`make_spectrum` to build one from ``(order, count)`` pairs.
    """

    __slots__ = ("_counts", "_order")

    def __init__(self, counts: Mapping[int, int], *, validate: bool = True,
                 check_totient: bool = True):
        cleaned = {int(d): int(c) for d, c in counts.items() if c}
        self._counts = dict(sorted(cleaned.items()))
        self._order = sum(self._counts.values())
        if validate:
            self._validate(check_totient)

    def _validate(self, check_totient: bool) -> None:
        counts = self._counts
        for d, c in counts.items():
            if d < 1 or c < 0:
                raise InvalidSpectrum(f"bad entry ({d}, {c})")
        if counts.get(1) != 1:
            raise InvalidSpectrum("the identity must be the only element of order 1")
        for d, c in counts.items():
            if self._order % d:
                raise InvalidSpectrum(
                    f"order {d} does not divide the group order {self._order}")
            if check_totient and c % totient(d):
                raise InvalidSpectrum(
                    f"count {c} of order-{d} elements is not a multiple of phi({d})")

    @property
    def group_order(self) -> int:
        return self._order

    @property
    def counts(self) -> dict[int, int]:
        return dict(self._counts)

    def items(self):
        return self._counts.items()

    def orders(self) -> list[int]:
        return list(self._counts)

    def __getitem__(self, order: int) -> int:
        return self._counts.get(order, 0)

    def __eq__(self, other):
        if not isinstance(other, OrderSpectrum):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self):
        return hash(tuple(self._counts.items()))

    def __repr__(self):
        pairs = ", ".join(f"({d},{c})" for d, c in self._counts.items())
        return f"OrderSpectrum([{pairs}])"

    def __mul__(self, other: "OrderSpectrum") -> "OrderSpectrum":
        return direct_product(self, other)

    def __pow__(self, n: int) -> "OrderSpectrum":
        return power(self, n)


def make_spectrum(entries: Iterable[tuple[int, int]], *,
                  check_totient: bool = True) -> OrderSpectrum:
    """Build a validated spectrum from ``(order, count)`` pairs.

    Orders must be distinct and counts positive.  ``check_totient=False``
    skips the phi(d) | count(d) test for histograms that do not come from a
    group (coset histograms use :class:`OrderSpectrum` with ``validate=False``).
    """
    counts: dict[int, int] = {}
    for order, count in entries:
        order, count = int(order), int(count)
        if order in counts:
            raise InvalidSpectrum(f"duplicate order {order}")
        if order < 1 or count < 1:
            raise InvalidSpectrum(f"bad entry ({order}, {count})")
        counts[order] = count
    return OrderSpectrum(counts, check_totient=check_totient)


def trivial() -> OrderSpectrum:
    return OrderSpectrum({1: 1})


def cyclic(n: int) -> OrderSpectrum:
    """Spectrum of the cyclic group of order ``n``."""
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    return OrderSpectrum({d: totient(d) for d in divisors(n)})


def rho(s: OrderSpectrum, k: int) -> Fraction:
    """Fraction of elements whose order divides ``k``."""
    if k < 1:
        raise ValueError("k must be positive")
    hits = sum(c for d, c in s.items() if k % d == 0)
    return Fraction(hits, s.group_order)


def rho_star(s: OrderSpectrum, k: int) -> Fraction:
    """Fraction of elements whose order is exactly ``k``."""
    if k < 1:
        raise ValueError("k must be positive")
    return Fraction(s[k], s.group_order)


def exponent(s: OrderSpectrum) -> int:
    return math.lcm(*s.orders())


def direct_product(a: OrderSpectrum, b: OrderSpectrum) -> OrderSpectrum:
    """Spectrum of ``A x B``; the order of ``(x, y)`` is lcm(o(x), o(y))."""
    out: dict[int, int] = defaultdict(int)
    for d, c in a.items():
        for e, f in b.items():
            out[math.lcm(d, e)] += c * f
    return OrderSpectrum(out, validate=False)


def power(s: OrderSpectrum, n: int) -> OrderSpectrum:
    """``n``-fold direct power, by repeated squaring."""
    if n < 0:
        raise ValueError("n must be non-negative")
    result = trivial()
    base = s
    while n:
        if n & 1:
            result = direct_product(result, base)
        n >>= 1
        if n:
            base = direct_product(base, base)
    return result


def construction2_n(h: OrderSpectrum, k: int, eps: Fraction, *,
                    max_n: int = 10_000) -> int:
    """Smallest ``n`` with rho*_k(H x C_k^n) > eps.

    Requires rho_k(H) > eps; otherwise no such ``n`` exists.
    """
    eps = Fraction(eps)
    if k < 2:
        raise ValueError("k must be at least 2")
    if rho(h, k) <= eps:
        raise ValueError(f"rho_{k}(H) = {format_rational(rho(h, k))} does not exceed "
                         f"{format_rational(eps)}")
    ck = cyclic(k)
    g = h
    for n in range(max_n + 1):
        if rho_star(g, k) > eps:
            return n
        g = direct_product(g, ck)
    raise RuntimeError(f"no n <= {max_n} found")


def wreath_c2(s: OrderSpectrum) -> OrderSpectrum:
    """Spectrum of ``G wr C_2`` from the spectrum of ``G``.

    Unswapped elements ``(a, b)`` form ``G x G``; a swapped element
    ``(a, b)x`` has order ``2 o(ab)``, and for each ``a`` the product ``ab``
    runs over all of ``G``.
    """
    base = direct_product(s, s)
    out: dict[int, int] = dict(base.counts)
    n = s.group_order
    for m, c in s.items():
        out[2 * m] = out.get(2 * m, 0) + n * c
    return OrderSpectrum(out, validate=False)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def dumps(s: OrderSpectrum) -> str:
    """Serialise as ``order <|G|>`` followed by one ``order count`` line each."""
    lines = [f"order {s.group_order}"]
    lines += [f"{d} {c}" for d, c in s.items()]
    return "\n".join(lines) + "\n"


def loads(text: str) -> OrderSpectrum:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("order "):
        raise InvalidSpectrum("missing 'order <n>' header")
    declared = int(lines[0].split()[1])
    entries = []
    for ln in lines[1:]:
        d, c = ln.split()
        entries.append((int(d), int(c)))
    s = make_spectrum(entries)
    if s.group_order != declared:
        raise InvalidSpectrum(
            f"header says order {declared} but counts sum to {s.group_order}")
    return s
