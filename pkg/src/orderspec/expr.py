"""A small language for naming groups, and its two evaluators.

Grammar::

    expr := term ('*' term)*
    term := atom ('^' INT)?
    atom := NAME '(' args ')' | 'wr2' '(' expr ')' | 'load' '(' STRING ')' | '(' expr ')'

``*`` is the direct product, ``^ n`` the n-fold direct power and
``wr2(e)`` the wreath product with C_2.  Spectrum mode evaluates with the
spectrum combinators and closed forms; concrete mode builds permutation
groups (direct factors on disjoint points, the wreath product on two copies
of the points plus the swap).
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from . import families as fam
from . import spectrum as sp
from .perm import (DEFAULT_CAP, CapExceeded, ElementSet, Permutation, generate,
                   read_generator_file, spectrum_of)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


class ExprError(ValueError):
    """Syntax or parameter error, with the offending position when known."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        if pos is not None and text is not None:
            message = f"{message} at position {pos}\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


# ---------------------------------------------------------------------------
# tree


@dataclass(frozen=True)
class Atom:
    name: str  # S, A, C, PSL, PGL, PSigmaL, PGammaL, Sz
    args: tuple[int, ...]

    def __str__(self):
        return f"{self.name}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Load:
    path: str

    def __str__(self):
        escaped = self.path.replace("\\", "\\\\").replace('"', '\\"')
        return f'load("{escaped}")'


@dataclass(frozen=True)
class Product:
    factors: tuple["Expr", ...]

    def __str__(self):
        return " * ".join(_wrap(f, Product) for f in self.factors)


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int

    def __str__(self):
        return f"{_wrap(self.base, (Product, Power))}^{self.exponent}"


@dataclass(frozen=True)
class Wreath2:
    inner: "Expr"

    def __str__(self):
        return f"wr2({self.inner})"


Expr = Union[Atom, Load, Product, Power, Wreath2]


def _wrap(e, kinds) -> str:
    return f"({e})" if isinstance(e, kinds) else str(e)


# name -> (arity, family tag)
_ATOMS = {
    "S": (1, "Sym"),
    "A": (1, "Alt"),
    "C": (1, "Cyclic"),
    "PSL": (2, "PSL2"),
    "PGL": (2, "PGL2"),
    "PSigmaL": (2, "PSigmaL2"),
    "PGammaL": (2, "PGammaL2"),
    "Sz": (1, "Sz"),
}


def family_spec(atom: Atom) -> fam.FamilySpec:
    _, tag = _ATOMS[atom.name]
    return fam.FamilySpec(tag, atom.args[-1])


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<op>[()*^,])
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ExprError(f"expected {want!r}, found {got!r}", tok[2], self.text)
        self.i += 1
        return tok

    def error(self, msg, pos):
        return ExprError(msg, pos, self.text)

    def expr(self):
        factors = [self.term()]
        while self.peek()[1] == "*":
            self.take()
            factors.append(self.term())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def term(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            n = int(self.take("int")[1])
            return Power(base, n)
        return base

    def atom(self):
        kind, value, pos = self.peek()
        if value == "(":
            self.take()
            e = self.expr()
            self.take(value=")")
            return e
        if kind != "name":
            raise self.error(f"expected a group, found {value or 'end of input'!r}", pos)
        self.take()
        self.take(value="(")
        if value == "wr2":
            inner = self.expr()
            self.take(value=")")
            return Wreath2(inner)
        if value == "load":
            s = self.take("string")[1][1:-1]
            self.take(value=")")
            return Load(re.sub(r"\\(.)", r"\1", s))
        if value not in _ATOMS:
            raise self.error(f"unknown group {value!r}", pos)
        args = [self.int_arg()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.int_arg())
        self.take(value=")")
        arity, _ = _ATOMS[value]
        if len(args) != arity:
            raise self.error(f"{value} takes {arity} argument(s), got {len(args)}", pos)
        if arity == 2 and args[0] != 2:
            raise self.error(
                f"only dimension 2 is supported for {value}; "
                f'for {value}({args[0]},{args[1]}) use a fixture such as load("{value}{args[0]}_{args[1]}")',
                pos)
        atom = Atom(value, tuple(args))
        try:
            family_spec(atom)
        except fam.FamilyError as exc:
            raise self.error(str(exc), pos) from None
        return atom

    def int_arg(self):
        return int(self.take("int")[1])


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    kind, value, pos = p.peek()
    if kind != "end":
        raise p.error(f"unexpected {value!r}", pos)
    return e


# ---------------------------------------------------------------------------
# fixtures


def read_manifest(fixtures: Path | str | None = None) -> dict[str, tuple[Path, int]]:
    d = Path(fixtures) if fixtures else FIXTURE_DIR
    out = {}
    with open(d / "manifest.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out[row["label"].strip()] = (d / row["path"].strip(), int(row["expected_order"]))
    return out


def resolve_load(path: str, fixtures: Path | str | None = None) -> tuple[Path, int | None]:
    """A manifest label or a generator-file path, with its declared order."""
    manifest = read_manifest(fixtures)
    if path in manifest:
        return manifest[path]
    p = Path(path)
    if not p.exists():
        raise ExprError(f"no fixture or file named {path!r}")
    for file, order in manifest.values():
        if file.resolve() == p.resolve():
            return file, order
    return p, None


# Enumerated groups are kept for reuse only when small; big ones cost gigabytes.
CACHE_LIMIT = 500_000
_groups: dict[tuple, ElementSet] = {}


def _cached(key: tuple, make) -> ElementSet:
    g = _groups.get(key)
    if g is None:
        g = make()
        if len(g) <= CACHE_LIMIT:
            _groups[key] = g
    return g


def _load_group(path: str, expected: int | None, cap: int) -> ElementSet:
    def make():
        degree, gens, stem = read_generator_file(path)
        if expected is not None and expected > cap:
            raise CapExceeded(cap)
        g = generate(gens, cap=cap, label=stem, degree=degree)
        if expected is not None and len(g) != expected:
            raise ValueError(f"{stem}: generated {len(g)} elements, manifest says {expected}")
        return g
    return _cached(("load", path, expected), make)


def _family_group(spec: fam.FamilySpec, cap: int) -> ElementSet:
    if fam.classical_order(spec) > cap:
        raise CapExceeded(cap)
    return _cached(("family", spec), lambda: fam.build(spec, cap=cap))


# ---------------------------------------------------------------------------
# evaluation


def group_order(e: Expr, fixtures=None) -> int | None:
    """Order of the named group, or ``None`` for files outside the manifest."""
    if isinstance(e, Atom):
        return fam.classical_order(family_spec(e))
    if isinstance(e, Load):
        return resolve_load(e.path, fixtures)[1]
    if isinstance(e, Product):
        orders = [group_order(f, fixtures) for f in e.factors]
        return None if None in orders else math.prod(orders)
    if isinstance(e, Power):
        o = group_order(e.base, fixtures)
        return None if o is None else o ** e.exponent
    o = group_order(e.inner, fixtures)
    return None if o is None else 2 * o * o


def _atom_spectrum(atom: Atom, cap: int) -> sp.OrderSpectrum:
    n = atom.args[-1]
    if atom.name == "S":
        return fam.sn_spectrum(n)
    if atom.name == "A":
        return fam.an_spectrum(n)
    if atom.name == "C":
        return sp.cyclic(n)
    if atom.name == "PSL":
        return fam.psl2_spectrum(n)
    if atom.name == "PGL":
        return fam.pgl2_spectrum(n)
    if atom.name == "Sz":
        return fam.suzuki_spectrum(n)
    spec = family_spec(atom)
    if fam.classical_order(spec) > cap:
        raise CapExceeded(cap)
    return spectrum_of(_family_group(spec, cap))


def evaluate_spectrum(e: Expr, cap: int = DEFAULT_CAP, fixtures=None) -> sp.OrderSpectrum:
    if isinstance(e, Atom):
        return _atom_spectrum(e, cap)
    if isinstance(e, Load):
        path, expected = resolve_load(e.path, fixtures)
        return spectrum_of(_load_group(str(path), expected, cap))
    if isinstance(e, Product):
        out = sp.trivial()
        for f in e.factors:
            out = sp.direct_product(out, evaluate_spectrum(f, cap, fixtures))
        return out
    if isinstance(e, Power):
        return sp.power(evaluate_spectrum(e.base, cap, fixtures), e.exponent)
    return sp.wreath_c2(evaluate_spectrum(e.inner, cap, fixtures))


def _shift(p: Permutation, offset: int, degree: int) -> Permutation:
    img = list(range(degree))
    for i, x in enumerate(p.img):
        img[offset + i] = offset + x
    return Permutation(tuple(img))


def _concrete_gens(e: Expr, fixtures) -> tuple[int, list[Permutation]]:
    """Degree and generators of a faithful permutation representation."""
    if isinstance(e, Atom):
        return fam.constructor(family_spec(e))
    if isinstance(e, Load):
        path, _ = resolve_load(e.path, fixtures)
        degree, gens, _ = read_generator_file(path)
        return degree, gens
    if isinstance(e, (Product, Power)):
        parts = list(e.factors) if isinstance(e, Product) else [e.base] * e.exponent
        if not parts:
            return 1, []
        pieces = [_concrete_gens(f, fixtures) for f in parts]
        total = sum(d for d, _ in pieces)
        gens, offset = [], 0
        for d, gs in pieces:
            gens += [_shift(g, offset, total) for g in gs]
            offset += d
        return total, gens
    d, gs = _concrete_gens(e.inner, fixtures)
    total = 2 * d
    gens = [_shift(g, 0, total) for g in gs]
    swap = Permutation(tuple(list(range(d, total)) + list(range(d))))
    return total, gens + [swap]


def evaluate_concrete(e: Expr, cap: int = DEFAULT_CAP, fixtures=None) -> ElementSet:
    expected = group_order(e, fixtures)
    if expected is not None and expected > cap:
        raise CapExceeded(cap)
    if isinstance(e, Atom):
        return _family_group(family_spec(e), cap)
    if isinstance(e, Load):
        path, order = resolve_load(e.path, fixtures)
        return _load_group(str(path), order, cap)
    degree, gens = _concrete_gens(e, fixtures)
    g = generate(gens, cap=cap, label=str(e), degree=degree)
    if expected is not None and len(g) != expected:
        raise AssertionError(f"{e}: generated {len(g)} elements, expected {expected}")
    return g


def evaluate(e: Expr | str, mode: str = "spectrum", cap: int = DEFAULT_CAP, fixtures=None):
    """Spectrum (``mode="spectrum"``) or enumerated group (``"concrete"``)."""
    if isinstance(e, str):
        e = parse_expr(e)
    if mode == "spectrum":
        return evaluate_spectrum(e, cap, fixtures)
    if mode == "concrete":
        return evaluate_concrete(e, cap, fixtures)
    raise ValueError(f"unknown mode {mode!r}")
