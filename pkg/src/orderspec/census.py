"""Verification harness: suite files in, exact pass/fail records out.

A suite file has one check per line::

    id | group-expression | k | expected | method

``k`` may carry a ``*`` prefix to ask for rho* (exact order) instead of
rho.  ``expected`` is a rational (``31/45``) or a comparison
(``> 1/2``, ``<= 3/5``).  ``method`` is ``formula``, ``enumeration`` or
``both``; with ``both`` the two values must agree exactly.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import operator
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import expr as ex
from . import families as fam
from . import spectrum as sp
from .perm import DEFAULT_CAP, CapExceeded, _compose_rows, spectrum_of

logger = logging.getLogger(__name__)

SUITE_DIR = Path(__file__).parent / "suites"
METHODS = ("formula", "enumeration", "both")
FIELDS = ["id", "group", "order", "k", "rho", "expected", "method", "pass", "millis",
          "status", "note"]

_OPS: dict[str, Callable] = {
    ">=": operator.ge, "<=": operator.le, ">": operator.gt, "<": operator.lt,
    "==": operator.eq, "=": operator.eq,
}


class SuiteError(ValueError):
    pass


@dataclass(frozen=True)
class Expected:
    op: str
    value: Fraction

    @classmethod
    def parse(cls, text: str) -> "Expected":
        text = text.strip()
        for op in (">=", "<=", "==", ">", "<", "="):
            if text.startswith(op):
                return cls("==" if op == "=" else op, sp.parse_rational(text[len(op):]))
        return cls("==", sp.parse_rational(text))

    def holds(self, x: Fraction) -> bool:
        return _OPS[self.op](x, self.value)

    def __str__(self):
        v = sp.format_rational(self.value)
        return v if self.op == "==" else f"{self.op} {v}"


@dataclass(frozen=True)
class CheckSpec:
    id: str
    group: str
    k: int
    expected: Expected
    method: str = "both"
    star: bool = False

    @property
    def k_text(self) -> str:
        return f"*{self.k}" if self.star else str(self.k)


@dataclass
class CheckResult:
    id: str
    group: str
    order: int | None
    k: str
    rho: str | None
    expected: str
    method: str
    passed: bool | None
    millis: int
    status: str = "ok"  # ok | fail | mismatch | skipped | error
    note: str = ""

    def to_record(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {f: d[f] for f in FIELDS}

    @classmethod
    def from_record(cls, d: dict) -> "CheckResult":
        d = dict(d)
        d["passed"] = d.pop("pass")
        return cls(**d)


@dataclass
class Config:
    cap: int = DEFAULT_CAP
    fixtures: str | None = None
    threads: int = 1


# ---------------------------------------------------------------------------
# suite files


def parse_suite(text: str, source: str = "<suite>") -> list[CheckSpec]:
    checks, seen = [], set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 5:
            raise SuiteError(f"{source}:{lineno}: expected 5 '|'-separated fields")
        cid, group, k, expected, method = parts
        if cid in seen:
            raise SuiteError(f"{source}:{lineno}: duplicate id {cid!r}")
        seen.add(cid)
        if method not in METHODS:
            raise SuiteError(f"{source}:{lineno}: unknown method {method!r}")
        star = k.startswith("*")
        try:
            kval = int(k.lstrip("*"))
            exp = Expected.parse(expected)
            ex.parse_expr(group)
        except (ValueError, ZeroDivisionError) as exc:
            raise SuiteError(f"{source}:{lineno}: {exc}") from None
        if kval < 1:
            raise SuiteError(f"{source}:{lineno}: k must be positive")
        checks.append(CheckSpec(cid, group, kval, exp, method, star))
    return checks


def load_suite(path: str | Path) -> list[CheckSpec]:
    p = Path(path)
    if not p.exists() and (SUITE_DIR / p).exists():
        p = SUITE_DIR / p
    if not p.exists() and (SUITE_DIR / f"{p}.suite").exists():
        p = SUITE_DIR / f"{p}.suite"
    return parse_suite(p.read_text(encoding="utf-8"), str(p))


# ---------------------------------------------------------------------------
# evaluation


def _closed_form(e: ex.Expr, k: int, star: bool) -> Fraction:
    """Value from the closed forms only; never enumerates."""
    if isinstance(e, ex.Atom) and not star:
        q = e.args[-1]
        if e.name == "PSL" and q % 2 and q >= 5:
            return fam.psl2_rho(q, k)
        if e.name == "PSL" and q % 2 == 0 and q >= 4:
            return fam.psl2_even_rho(q, k)
        if e.name == "Sz":
            return fam.suzuki_rho(q, k)
    s = _formula_spectrum(e)
    return sp.rho_star(s, k) if star else sp.rho(s, k)


def _formula_spectrum(e: ex.Expr) -> sp.OrderSpectrum:
    if isinstance(e, ex.Atom):
        if e.name in ("PSigmaL", "PGammaL"):
            raise ValueError(f"no closed-form spectrum for {e}")
        return ex.evaluate_spectrum(e)
    if isinstance(e, ex.Load):
        raise ValueError(f"no closed form for {e}; use enumeration")
    if isinstance(e, ex.Product):
        out = sp.trivial()
        for f in e.factors:
            out = sp.direct_product(out, _formula_spectrum(f))
        return out
    if isinstance(e, ex.Power):
        return sp.power(_formula_spectrum(e.base), e.exponent)
    return sp.wreath_c2(_formula_spectrum(e.inner))


class _Cache:
    """Enumerated spectra keyed by canonical expression text."""

    def __init__(self, config: Config):
        self.config = config
        self.data: dict[str, sp.OrderSpectrum] = {}

    def enumerated(self, e: ex.Expr) -> sp.OrderSpectrum:
        key = str(e)
        if key not in self.data:
            g = ex.evaluate_concrete(e, cap=self.config.cap, fixtures=self.config.fixtures)
            self.data[key] = spectrum_of(g)
        return self.data[key]


def run_check(check: CheckSpec, config: Config, cache: _Cache | None = None) -> CheckResult:
    cache = cache or _Cache(config)
    start = time.perf_counter()
    e = ex.parse_expr(check.group)
    order = ex.group_order(e, config.fixtures)
    base = dict(id=check.id, group=str(e), order=order, k=check.k_text,
                expected=str(check.expected), method=check.method)

    def done(**kw) -> CheckResult:
        ms = int(round((time.perf_counter() - start) * 1000))
        return CheckResult(**base, **kw, millis=ms)

    values: dict[str, Fraction] = {}
    try:
        if check.method in ("formula", "both"):
            values["formula"] = _closed_form(e, check.k, check.star)
        if check.method in ("enumeration", "both"):
            s = cache.enumerated(e)
            base["order"] = s.group_order
            values["enumeration"] = sp.rho_star(s, check.k) if check.star else sp.rho(s, check.k)
    except CapExceeded as exc:
        return done(rho=None, passed=None, status="skipped", note=str(exc))
    except (ValueError, ArithmeticError) as exc:
        return done(rho=None, passed=False, status="error", note=str(exc))
    distinct = set(values.values())
    value = next(iter(values.values()))
    if len(distinct) > 1:
        note = ", ".join(f"{m}={sp.format_rational(v)}" for m, v in values.items())
        return done(rho=sp.format_rational(value), passed=False, status="mismatch", note=note)
    ok = check.expected.holds(value)
    return done(rho=sp.format_rational(value), passed=ok, status="ok" if ok else "fail")


def run_suite(suite: Sequence[CheckSpec], config: Config | None = None) -> list[CheckResult]:
    """Run every check; results come back in suite order."""
    config = config or Config()
    cache = _Cache(config)
    if config.threads <= 1 or len(suite) <= 1:
        return [run_check(c, config, cache) for c in suite]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(lambda c: run_check(c, config, cache), suite))


def all_passed(results: Sequence[CheckResult]) -> bool:
    return all(r.passed is not False for r in results)


# ---------------------------------------------------------------------------
# reports


def emit_report(results: Sequence[CheckResult], fmt: str = "json", destination=None) -> str:
    """Render ``results``; write to ``destination`` (path or file object) if given."""
    records = [r.to_record() for r in results]
    if fmt == "json":
        text = json.dumps(records, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
        w.writeheader()
        for rec in records:
            w.writerow({k: "" if v is None else v for k, v in rec.items()})
        text = buf.getvalue()
    elif fmt == "text":
        lines = []
        for r in results:
            tag = {True: "PASS", False: "FAIL", None: "SKIP"}[r.passed]
            lines.append(f"{tag:4} {r.id:24} {r.group:28} k={r.k:<6} rho={r.rho or '-':<14} "
                         f"expected {r.expected:<16} [{r.method}, {r.millis} ms]"
                         + (f"  {r.note}" if r.note else ""))
        text = "\n".join(lines) + ("\n" if lines else "")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(text)
        else:
            Path(destination).write_text(text, encoding="utf-8")
    return text


def parse_report(text: str) -> list[CheckResult]:
    return [CheckResult.from_record(d) for d in json.loads(text)]


# ---------------------------------------------------------------------------
# one-off verifications that do not fit the suite format


def suzuki_split_report(q: int = 8, cap: int = DEFAULT_CAP) -> dict:
    """Count involutions and order-4 elements of Sz(q) by enumeration and
    say which candidate split they match."""
    s = spectrum_of(fam.build(fam.FamilySpec("Sz", q), cap=cap))
    observed = (s[2], s[4])
    candidates = fam.suzuki_two_split(q)
    return {
        "group": f"Sz({q})",
        "order": s.group_order,
        "order2": observed[0],
        "order4": observed[1],
        "candidates": {k: list(v) for k, v in candidates.items()},
        "matches": [k for k, v in candidates.items() if v == observed],
    }


def coset_partition_check(g, n, h, hk) -> dict:
    """Compare rho_k(G) with rho_k(HK) - rho_k(H)/|K| + rho_k(N)/|K| for
    every k dividing the exponent of G, where K = HK/H."""
    sg, sn, sh, shk = (spectrum_of(x) for x in (g, n, h, hk))
    kk = len(hk) // len(h)
    rows = {}
    for k in sp.divisors(sp.exponent(sg)):
        lhs = sp.rho(sg, k)
        rhs = sp.rho(shk, k) - sp.rho(sh, k) / kk + sp.rho(sn, k) / kk
        rows[k] = (lhs, rhs)
    return {"k_values": rows, "holds": all(a == b for a, b in rows.values())}


def conjugates_meet_in(g, n, hk) -> bool:
    """True if ``HK ∩ (HK)^x`` lies in ``N`` for every ``x`` in ``G`` outside ``HK``."""
    e = g.elements
    inv = g.inverses()
    outside = hk.lookup(e) < 0
    for x in hk.elements:
        if n.lookup(x[None, :])[0] >= 0:
            continue  # elements of N never break the condition
        conj = _compose_rows(x[inv], e)
        if (outside & (hk.lookup(conj) >= 0)).any():
            return False
    return True
