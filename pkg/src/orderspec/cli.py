"""Command-line interface: ``orderspec <command> ...``.

Exit status: 0 success, 1 a verification failed, 2 usage error,
3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import census
from . import expr as ex
from . import families as fam
from . import spectrum as sp
from .perm import (DEFAULT_CAP, CapExceeded, PermutationError, coset_spectrum,
                   index2_subgroups, normalizer, parse_perm, spectrum_of, sylow_subgroup)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--cap", type=int, default=default(DEFAULT_CAP),
                        help="largest group to enumerate (default %(default)s)"
                        if not suppress else argparse.SUPPRESS)
    parser.add_argument("--threads", type=int, default=default(1),
                        help="worker threads for suite checks" if not suppress else argparse.SUPPRESS)
    parser.add_argument("--fixtures", default=default(None),
                        help="directory with manifest.csv and generator files"
                        if not suppress else argparse.SUPPRESS)
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False),
                        help="log progress to stderr" if not suppress else argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orderspec",
        description="Exact element-order statistics of finite groups.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, **kw):
        p = sub.add_parser(name, **kw)
        _global_options(p, suppress=True)
        return p

    p = command("rho", help="rho_k (or rho*_k) of a group expression")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--star", action="store_true", help="exact order k instead of dividing k")
    p.add_argument("--mode", choices=["spectrum", "concrete"], default="spectrum")

    p = command("spectrum", help="print or save the order spectrum")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--mode", choices=["spectrum", "concrete"], default="spectrum")

    p = command("family-rho", help="closed-form rho_k for a family member")
    p.add_argument("--family", required=True,
                   choices=["PSL2", "PGL2", "Sz", "Sym", "Alt"])
    p.add_argument("--q", type=int, required=True, help="field size (or n for Sym/Alt)")
    p.add_argument("-k", type=int, required=True)

    p = command("coset-rho", help="rho_k on the coset x*N of an enumerated group N")
    p.add_argument("--group", required=True)
    p.add_argument("--rep", required=True,
                   help="coset representative as a permutation, or 'frob' for the "
                        "field automorphism of a PSL/PGL atom")
    p.add_argument("-k", type=int, required=True)

    p = command("subgroups", help="index-2 subgroups")
    p.add_argument("--index2", action="store_true", required=True)
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-k", type=int, help="also report rho_k of each subgroup")

    p = command("sylow", help="a Sylow subgroup and its normaliser")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--check-bound", type=int, metavar="K",
                   help="check the normaliser bound on rho_K (K a power of p)")

    p = command("verify", help="run a suite file")
    p.add_argument("--suite", required=True,
                   help="suite file, or the name of a shipped suite (table1, table2, desk)")
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("-o", "--output")
    return parser


def _fmt(x) -> str:
    return sp.format_rational(x)


def _parse(text: str) -> ex.Expr:
    return ex.parse_expr(text)


def cmd_rho(args) -> int:
    e = _parse(args.expr)
    if args.mode == "spectrum":
        s = ex.evaluate_spectrum(e, args.cap, args.fixtures)
    else:
        s = spectrum_of(ex.evaluate_concrete(e, args.cap, args.fixtures))
    print(_fmt(sp.rho_star(s, args.k) if args.star else sp.rho(s, args.k)))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    e = _parse(args.expr)
    s = ex.evaluate(e, args.mode, args.cap, args.fixtures)
    if args.mode == "concrete":
        s = spectrum_of(s)
    text = sp.dumps(s)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_family_rho(args) -> int:
    q, k = args.q, args.k
    try:
        if args.family == "PSL2":
            value = fam.psl2_even_rho(q, k) if q % 2 == 0 else fam.psl2_rho(q, k)
        elif args.family == "PGL2":
            value = sp.rho(fam.pgl2_spectrum(q), k)
        elif args.family == "Sz":
            value = fam.suzuki_rho(q, k)
        elif args.family == "Sym":
            value = sp.rho(fam.sn_spectrum(q), k)
        else:
            value = sp.rho(fam.an_spectrum(q), k)
    except fam.FamilyError as exc:
        raise UsageError(str(exc)) from None
    print(_fmt(value))
    return EXIT_OK


def _frobenius_rep(e: ex.Expr):
    if not (isinstance(e, ex.Atom) and e.name in ("PSL", "PGL")):
        raise UsageError("--rep frob needs a PSL(2,q) or PGL(2,q) group")
    spec = ex.family_spec(e)
    if spec.m == 1:
        raise UsageError("GF(p) has no nontrivial field automorphism")
    tag = "PSigmaL2" if e.name == "PSL" else "PGammaL2"
    _, gens = fam.constructor(fam.FamilySpec(tag, spec.param))
    return gens[-1]


def cmd_coset_rho(args) -> int:
    e = _parse(args.group)
    n = ex.evaluate_concrete(e, args.cap, args.fixtures)
    if args.rep.strip().lower() == "frob":
        x = _frobenius_rep(e)
    else:
        x = parse_perm(args.rep, n.degree)
    h = coset_spectrum(n, x)
    hits = sum(c for d, c in h.items() if args.k % d == 0)
    print(_fmt(Fraction(hits, h.group_order)))
    return EXIT_OK


def cmd_subgroups(args) -> int:
    g = ex.evaluate_concrete(_parse(args.expr), args.cap, args.fixtures)
    subs = index2_subgroups(g)
    print(f"{len(subs)} subgroup(s) of index 2 in a group of order {len(g)}")
    for i, h in enumerate(subs, 1):
        line = f"  [{i}] order {len(h)}"
        if args.k:
            line += f"  rho_{args.k} = {_fmt(sp.rho(spectrum_of(h), args.k))}"
        print(line)
    return EXIT_OK


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def cmd_sylow(args) -> int:
    g = ex.evaluate_concrete(_parse(args.expr), args.cap, args.fixtures)
    if len(g) % args.p:
        raise UsageError(f"{args.p} does not divide |G| = {len(g)}")
    try:
        s = sylow_subgroup(g, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    nrm = normalizer(g, s)
    print(f"|G| = {len(g)}  |P| = {len(s)}  |N_G(P)| = {len(nrm)}")
    if args.check_bound is None:
        return EXIT_OK
    k = args.check_bound
    if k < 1 or not _is_power_of(k, args.p):
        raise UsageError(f"--check-bound needs a power of {args.p}")
    lhs = sp.rho(spectrum_of(g), k)
    rhs = (sp.rho(spectrum_of(s), k) / (len(nrm) // len(s))
           - Fraction(1, len(nrm)) + Fraction(1, len(g)))
    ok = lhs <= rhs
    print(f"rho_{k}(G) = {_fmt(lhs)}  bound = {_fmt(rhs)}  {'holds' if ok else 'VIOLATED'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        suite = census.load_suite(args.suite)
    except (OSError, census.SuiteError) as exc:
        raise UsageError(str(exc)) from None
    config = census.Config(cap=args.cap, fixtures=args.fixtures, threads=args.threads)
    results = census.run_suite(suite, config)
    text = census.emit_report(results, args.format, args.output)
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK if census.all_passed(results) else EXIT_FAIL


COMMANDS = {
    "rho": cmd_rho,
    "spectrum": cmd_spectrum,
    "family-rho": cmd_family_rho,
    "coset-rho": cmd_coset_rho,
    "subgroups": cmd_subgroups,
    "sylow": cmd_sylow,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.cap < 1 or args.threads < 1:
        parser.error("--cap and --threads must be positive")
    try:
        return COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"orderspec: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ex.ExprError, PermutationError, sp.InvalidSpectrum) as exc:
        print(f"orderspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
