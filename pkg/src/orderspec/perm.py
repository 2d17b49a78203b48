"""Brute-force permutation group engine.

Groups are enumerated explicitly.  An :class:`ElementSet` stores its
elements as rows of a numpy array (0-based images); the bytes of a row are
the canonical encoding used for hashing and for "smallest element" choices.

Products are read left to right: ``p * q`` applies ``p`` first, so
``(p * q)(i) = q(p(i))``, and conjugation is ``h ** x = x^-1 h x``.
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .spectrum import OrderSpectrum, divisors

logger = logging.getLogger(__name__)

DEFAULT_CAP = 20_000_000
_ORDER_CHUNK = 16_384

__all__ = [
    "DEFAULT_CAP",
    "CapExceeded",
    "PermutationError",
    "Permutation",
    "ElementSet",
    "parse_perm",
    "generate",
    "spectrum_of",
    "coset_spectrum",
    "normalizer",
    "sylow_subgroup",
    "center",
    "quotient_spectrum",
    "index2_subgroups",
    "subgroup_index",
    "subgroup_from_rows",
    "element_orders",
    "read_generator_file",
    "write_generator_file",
]


class CapExceeded(RuntimeError):
    """The closure grew past the enumeration cap."""

    def __init__(self, cap: int):
        super().__init__(f"group has more than {cap} elements")
        self.cap = cap


class PermutationError(ValueError):
    pass


def _dtype_for(degree: int):
    return np.uint8 if degree <= 256 else np.uint16


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{1..n}``; stored 0-based in ``img``."""

    img: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.img) != list(range(len(self.img))):
            raise PermutationError("not a bijection")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Permutation":
        """From a 1-based image list."""
        return cls(tuple(int(i) - 1 for i in images))

    @classmethod
    def from_array(cls, arr) -> "Permutation":
        return cls(tuple(int(i) for i in arr))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.img)

    @property
    def images(self) -> list[int]:
        return [i + 1 for i in self.img]

    def as_array(self, dtype=None) -> np.ndarray:
        return np.asarray(self.img, dtype=dtype or _dtype_for(self.degree))

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise PermutationError("degree mismatch")
        return Permutation(tuple(other.img[i] for i in self.img))

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.img):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.img[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            j = self.img[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.img[j]
            out.append(tuple(c + 1 for c in cyc))
        return out

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.img))

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, degree: int) -> Permutation:
    """Parse ``(1,2,3)(4,5)`` cycle notation or a ``[2,3,1,5,4]`` image list."""
    s = text.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise PermutationError(f"unterminated image list: {text!r}")
        body = s[1:-1].strip()
        try:
            images = [int(t) for t in body.split(",")] if body else []
        except ValueError:
            raise PermutationError(f"malformed image list: {text!r}") from None
        if len(images) != degree:
            raise PermutationError(
                f"image list has {len(images)} entries, expected {degree}")
        if any(not 1 <= i <= degree for i in images):
            raise PermutationError(f"point out of range 1..{degree}: {text!r}")
        if len(set(images)) != degree:
            raise PermutationError(f"repeated image: {text!r}")
        return Permutation.from_images(images)

    if _CYCLE_RE.sub("", s).strip():
        raise PermutationError(f"malformed cycle notation: {text!r}")
    cycles = []
    used: set[int] = set()
    for body in _CYCLE_RE.findall(s):
        body = body.strip()
        if not body:
            continue
        try:
            pts = [int(t) for t in body.split(",")]
        except ValueError:
            raise PermutationError(f"malformed cycle ({body}) in {text!r}") from None
        for pt in pts:
            if not 1 <= pt <= degree:
                raise PermutationError(f"point {pt} out of range 1..{degree}")
            if pt in used:
                raise PermutationError(f"repeated point {pt} in {text!r}")
            used.add(pt)
        cycles.append(pts)
    return Permutation.from_cycles(cycles, degree)


# ---------------------------------------------------------------------------
# batched row operations; every array is (N, degree), one element per row


def _compose_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise ``a * b`` (apply a, then b)."""
    return np.take_along_axis(b, a.astype(np.intp), axis=1)


def _invert_rows(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    ident = np.broadcast_to(np.arange(a.shape[1], dtype=a.dtype), a.shape)
    np.put_along_axis(inv, a.astype(np.intp), ident, axis=1)
    return inv


def _element_orders_numpy(rows: np.ndarray) -> np.ndarray:
    n_rows, degree = rows.shape
    out = np.empty(n_rows, dtype=np.int64)
    ident = np.arange(degree)
    for start in range(0, n_rows, _ORDER_CHUNK):
        p = rows[start:start + _ORDER_CHUNK].astype(np.intp)
        cur = p.copy()
        length = np.zeros(p.shape, dtype=np.int64)
        t = 1
        while True:
            hit = (cur == ident) & (length == 0)
            length[hit] = t
            if length.all():
                break
            cur = np.take_along_axis(p, cur, axis=1)
            t += 1
        out[start:start + len(p)] = np.lcm.reduce(length, axis=1)
    return out


try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

if numba is not None:
    @numba.njit(cache=True)
    def _element_orders_jit(rows, out):
        n_rows, degree = rows.shape
        seen = np.zeros(degree, dtype=np.bool_)
        for r in range(n_rows):
            seen[:] = False
            order = 1
            for start in range(degree):
                if seen[start]:
                    continue
                length = 0
                j = start
                while not seen[j]:
                    seen[j] = True
                    j = rows[r, j]
                    length += 1
                a, b = order, length
                while b:
                    a, b = b, a % b
                order = order // a * length
            out[r] = order


def element_orders(rows: np.ndarray) -> np.ndarray:
    """Order of every permutation row, as lcm of its cycle lengths."""
    if numba is None:
        return _element_orders_numpy(rows)
    out = np.empty(len(rows), dtype=np.int64)
    _element_orders_jit(np.ascontiguousarray(rows), out)
    return out


class ElementSet:
    """A fully enumerated permutation group (or coset) of a fixed degree."""

    def __init__(self, degree: int, elements: np.ndarray,
                 generators: Sequence[Permutation] | None = None, label: str = ""):
        self.degree = degree
        self.elements = elements
        self.label = label
        self._generators = list(generators) if generators is not None else None
        self._index: dict[bytes, int] | None = None
        self._orders: np.ndarray | None = None
        self._inverses: np.ndarray | None = None

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"ElementSet(label={self.label!r}, degree={self.degree}, order={len(self)})"

    def keys(self) -> list[bytes]:
        return _row_keys(self.elements)

    @property
    def index(self) -> dict[bytes, int]:
        if self._index is None:
            self._index = {k: i for i, k in enumerate(self.keys())}
        return self._index

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Position of each row in this set, or -1."""
        idx = self.index
        return np.fromiter((idx.get(k, -1) for k in _row_keys(rows)),
                           dtype=np.int64, count=len(rows))

    def __contains__(self, p: Permutation) -> bool:
        return p.as_array(self.elements.dtype).tobytes() in self.index

    def element(self, i: int) -> Permutation:
        return Permutation.from_array(self.elements[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self.element(i)

    @property
    def generators(self) -> list[Permutation]:
        if self._generators is None:
            self._generators = _find_generators(self)
        return self._generators

    def orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = element_orders(self.elements)
        return self._orders

    def inverses(self) -> np.ndarray:
        """Row ``i`` is the inverse of element ``i``."""
        if self._inverses is None:
            self._inverses = _invert_rows(self.elements)
        return self._inverses

    def identity_row(self) -> np.ndarray:
        return np.arange(self.degree, dtype=self.elements.dtype)


def _row_keys(rows: np.ndarray) -> list[bytes]:
    rows = np.ascontiguousarray(rows)
    w = rows.shape[1] * rows.itemsize
    buf = rows.tobytes()
    return [buf[i:i + w] for i in range(0, len(buf), w)]


def generate(gens: Sequence[Permutation], cap: int = DEFAULT_CAP, label: str = "",
             degree: int | None = None) -> ElementSet:
    """Breadth-first closure of ``gens`` under right multiplication.

    Raises :class:`CapExceeded` once more than ``cap`` elements are found.
    The element order is deterministic for a given generator sequence.
    """
    gens = list(gens)
    if degree is None:
        if not gens:
            raise PermutationError("need a degree or at least one generator")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise PermutationError("generators have different degrees")
    if cap < 1:
        raise ValueError("cap must be positive")
    dtype = _dtype_for(degree)
    ident = np.arange(degree, dtype=dtype)[None, :]
    gen_rows = [g.as_array(dtype) for g in gens if not g.is_identity()]
    seen: dict[bytes, None] = {ident.tobytes(): None}
    blocks = [ident]
    frontier = ident
    while len(frontier) and gen_rows:
        found = []
        for g in gen_rows:
            cand = g[frontier]
            keep = []
            for i, key in enumerate(_row_keys(cand)):
                if key not in seen:
                    seen[key] = None
                    keep.append(i)
            if len(seen) > cap:
                raise CapExceeded(cap)
            if keep:
                found.append(cand[keep])
        frontier = np.concatenate(found) if found else frontier[:0]
        if len(frontier):
            blocks.append(frontier)
    elements = np.concatenate(blocks)
    out = ElementSet(degree, elements, gens, label)
    out._index = {k: i for i, k in enumerate(seen)}
    logger.debug("generated %s: %d elements", label or "group", len(elements))
    return out


def subgroup_from_rows(parent: ElementSet, rows: np.ndarray, label: str = "") -> ElementSet:
    return ElementSet(parent.degree, np.ascontiguousarray(rows), None, label)


def _find_generators(g: ElementSet) -> list[Permutation]:
    """Small generating set, adding the first element not yet generated."""
    if len(g) == 1:
        return []
    gens: list[Permutation] = []
    current = generate([], degree=g.degree)
    keys = g.keys()
    # Stride through the elements so early picks are spread out.
    order = np.random.default_rng(0).permutation(len(keys))
    for i in order:
        if keys[i] in current.index:
            continue
        gens.append(g.element(int(i)))
        current = generate(gens, cap=len(g))
        if len(current) == len(g):
            break
    return gens


def spectrum_of(g: ElementSet) -> OrderSpectrum:
    """Exact order histogram of an enumerated group."""
    counts = Counter(int(o) for o in g.orders())
    return OrderSpectrum(counts)


def coset_spectrum(n: ElementSet, x: Permutation) -> OrderSpectrum:
    """Histogram of ``o(x g)`` over ``g`` in ``n`` (identity count may be 0)."""
    if x.degree != n.degree:
        raise PermutationError("degree mismatch")
    rows = n.elements[:, np.asarray(x.img, dtype=np.intp)]
    counts = Counter(int(o) for o in element_orders(rows))
    return OrderSpectrum(counts, validate=False)


def _check_contained(g: ElementSet, h: ElementSet) -> None:
    if g.degree != h.degree:
        raise PermutationError("degree mismatch")
    gens = h.generators
    if gens:
        rows = np.stack([p.as_array(g.elements.dtype) for p in gens])
        if (g.lookup(rows) < 0).any():
            raise PermutationError(f"{h.label or 'H'} is not contained in {g.label or 'G'}")
    if len(g) % len(h):
        raise PermutationError("subgroup order does not divide group order")


def normalizer(g: ElementSet, h: ElementSet) -> ElementSet:
    """``{x in g : x^-1 h x = h}``."""
    _check_contained(g, h)
    if len(h) == len(g) or len(h) == 1:
        return g
    e = g.elements
    inv = g.inverses()
    keep = np.ones(len(e), dtype=bool)
    for hp in h.generators:
        harr = hp.as_array(e.dtype)
        conj = _compose_rows(harr[inv], e)
        keep &= h.lookup(conj) >= 0
    return subgroup_from_rows(g, e[keep], f"N({h.label})")


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def sylow_subgroup(g: ElementSet, p: int) -> ElementSet:
    """A Sylow ``p``-subgroup, grown inside successive normalizers."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    target = _p_part(len(g), p)
    if target == 1:
        raise ValueError(f"{p} does not divide |G| = {len(g)}")
    gens: list[Permutation] = []
    sub = generate(gens, degree=g.degree)
    while len(sub) < target:
        norm = normalizer(g, sub)
        orders = norm.orders()
        rest = orders.astype(np.int64)
        while (hit := rest % p == 0).any():
            rest[hit] //= p
        is_p = rest == 1
        outside = sub.lookup(norm.elements) < 0
        cand = np.flatnonzero(is_p & outside)
        if not len(cand):
            raise RuntimeError("no p-element in N(P) outside P")
        keys = _row_keys(norm.elements[cand])
        best = cand[min(range(len(cand)), key=keys.__getitem__)]
        gens.append(norm.element(int(best)))
        sub = generate(gens, cap=target)
    sub.label = f"Syl{p}({g.label})"
    return sub


def center(g: ElementSet) -> ElementSet:
    e = g.elements
    keep = np.ones(len(e), dtype=bool)
    for gp in g.generators:
        a = gp.as_array(e.dtype)
        keep &= (a[e] == e[:, gp.img]).all(axis=1)
    z = subgroup_from_rows(g, e[keep], f"Z({g.label})")
    # central against every element, not only the generators
    zr = z.elements
    for i in range(len(zr)):
        x = zr[i]
        if not (x[e] == e[:, x.astype(np.intp)]).all():
            raise AssertionError("centre element fails to commute")
    return z


def is_normal(g: ElementSet, n: ElementSet) -> bool:
    for x in g.generators:
        xa = x.as_array(g.elements.dtype)
        xi = x.inverse().as_array(g.elements.dtype)
        for h in n.generators:
            conj = xa[h.as_array(g.elements.dtype)[xi]]
            if conj.tobytes() not in n.index:
                return False
    return True


def _coset_labels(g: ElementSet, n: ElementSet) -> tuple[np.ndarray, list[int]]:
    """Label each element of ``g`` by its coset ``x n``; return labels and
    the position of the canonical (smallest-encoding) representative."""
    labels = np.full(len(g), -1, dtype=np.int64)
    reps: list[int] = []
    ne = n.elements
    for i in range(len(g)):
        if labels[i] >= 0:
            continue
        rows = ne[:, g.elements[i].astype(np.intp)]
        pos = g.lookup(rows)
        labels[pos] = len(reps)
        keys = _row_keys(g.elements[pos])
        reps.append(int(pos[min(range(len(keys)), key=keys.__getitem__)]))
    return labels, reps


def _power_rows(rows: np.ndarray, t: int) -> np.ndarray:
    """Row-wise ``t``-th power by repeated squaring."""
    result = np.broadcast_to(np.arange(rows.shape[1], dtype=rows.dtype), rows.shape).copy()
    base = rows
    while t:
        if t & 1:
            result = _compose_rows(result, base)
        t >>= 1
        if t:
            base = _compose_rows(base, base)
    return result


def quotient_spectrum(g: ElementSet, n: ElementSet) -> OrderSpectrum:
    """Order spectrum of ``g / n`` for a normal subgroup ``n``."""
    _check_contained(g, n)
    if not is_normal(g, n):
        raise PermutationError(f"{n.label or 'N'} is not normal in {g.label or 'G'}")
    if len(n) == 1:
        return spectrum_of(g)
    if len(n) == len(g):
        return OrderSpectrum({1: 1})
    _, reps = _coset_labels(g, n)
    rows = g.elements[reps]
    orders = g.orders()[reps].astype(np.int64)
    # the order of xN is the least t dividing o(x) with x^t in N
    qorder = np.zeros(len(reps), dtype=np.int64)
    for t in divisors(math.lcm(*set(orders.tolist()))):
        todo = np.flatnonzero((qorder == 0) & (orders % t == 0))
        if len(todo):
            hit = n.lookup(_power_rows(rows[todo], t)) >= 0
            qorder[todo[hit]] = t
    return OrderSpectrum(Counter(qorder.tolist()))


def index2_subgroups(g: ElementSet) -> list[ElementSet]:
    """Every subgroup of index 2.

    These all contain the subgroup ``K`` generated by squares; ``g / K`` is
    elementary abelian and each hyperplane of it pulls back to one answer.
    """
    e = g.elements
    squares = _compose_rows(e, e)
    sq_keys = sorted(set(_row_keys(squares)))
    gens: list[Permutation] = []
    k = generate(gens, degree=g.degree)
    for key in sq_keys:
        if key in k.index:
            continue
        gens.append(Permutation.from_array(np.frombuffer(key, dtype=e.dtype)))
        k = generate(gens, cap=len(g))
    if len(k) == len(g):
        return []
    labels, reps = _coset_labels(g, k)
    n_cosets = len(reps)
    ident_label = int(labels[g.index[g.identity_row().tobytes()]])
    span = {ident_label: 0}
    bits = 0
    for x in g.generators:
        xl = int(labels[g.index[x.as_array(e.dtype).tobytes()]])
        if xl in span:
            continue
        xa = x.as_array(e.dtype)
        for lab, vec in list(span.items()):
            prod = xa[e[reps[lab]]]
            span[int(labels[g.index[prod.tobytes()]])] = vec | (1 << bits)
        bits += 1
    if len(span) != n_cosets or n_cosets != 1 << bits:
        raise AssertionError("quotient by squares is not elementary abelian")
    vec_of = np.array([span[lab] for lab in range(n_cosets)], dtype=np.int64)
    element_vecs = vec_of[labels]
    out = []
    for f in range(1, 1 << bits):
        parity = np.zeros(len(e), dtype=np.int64)
        masked = element_vecs & f
        while masked.any():
            parity ^= masked & 1
            masked >>= 1
        out.append(subgroup_from_rows(g, e[parity == 0], f"{g.label}[{f}]"))
    return out


def subgroup_index(g: ElementSet, h: ElementSet) -> int:
    _check_contained(g, h)
    return len(g) // len(h)


def read_generator_file(path: str | Path) -> tuple[int, list[Permutation], str]:
    """Read ``degree N`` / ``gen <perm>`` lines; ``#`` starts a comment."""
    path = Path(path)
    degree = None
    gens: list[Permutation] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            head, _, rest = line.partition(" ")
            if head != "degree":
                raise PermutationError(f"{path}:{lineno}: expected 'degree N'")
            degree = int(rest)
            continue
        head, _, rest = line.partition(" ")
        if head != "gen":
            raise PermutationError(f"{path}:{lineno}: expected 'gen <perm>'")
        gens.append(parse_perm(rest, degree))
    if degree is None:
        raise PermutationError(f"{path}: no degree line")
    return degree, gens, path.stem


def write_generator_file(path: str | Path, degree: int, gens: Sequence[Permutation],
                         comment: str = "") -> None:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"degree {degree}")
    lines += [f"gen {g}" for g in gens]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
