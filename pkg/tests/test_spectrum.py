import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orderspec import spectrum as sp
from orderspec.families import an_spectrum, sn_spectrum
from orderspec.perm import spectrum_of

A5 = sp.make_spectrum([(1, 1), (2, 15), (3, 20), (5, 24)])


# ---------------------------------------------------------------- construction

def test_make_spectrum_a5_matches_enumeration(get_group):
    assert A5.group_order == 60
    assert spectrum_of(get_group("A(5)")) == A5


def test_make_spectrum_trivial():
    s = sp.make_spectrum([(1, 1)])
    assert s.group_order == 1
    assert s == sp.trivial()


@pytest.mark.parametrize("entries", [
    [(1, 1), (2, 2)],                 # 2 does not divide 3
    [(1, 1), (1, 1)],                 # duplicate order
    [(2, 1)],                         # no identity
    [(1, 2), (2, 2)],                 # two identities
    [(1, 1), (3, 1), (2, 1)],         # phi(3) = 2 does not divide 1
    [(1, 1), (2, 0)],                 # zero count
    [(0, 1)],
])
def test_make_spectrum_rejects(entries):
    with pytest.raises(sp.InvalidSpectrum):
        sp.make_spectrum(entries)


def test_totient_check_can_be_disabled():
    entries = [(1, 1), (2, 2), (4, 1)]  # phi(4) = 2 does not divide 1
    with pytest.raises(sp.InvalidSpectrum):
        sp.make_spectrum(entries)
    assert sp.make_spectrum(entries, check_totient=False).group_order == 4
    # the Lagrange check still applies: 3 does not divide 4
    with pytest.raises(sp.InvalidSpectrum):
        sp.make_spectrum([(1, 1), (2, 1), (3, 2), (4, 2)], check_totient=False)


def test_spectrum_is_hashable_and_immutable():
    d = {A5: "A5"}
    assert d[sp.make_spectrum([(5, 24), (3, 20), (2, 15), (1, 1)])] == "A5"
    c = A5.counts
    c[2] = 0
    assert A5[2] == 15


# ---------------------------------------------------------------- ratios

@pytest.mark.parametrize("k,value", [
    (6, Fraction(3, 5)), (1, Fraction(1, 60)), (15, Fraction(3, 4)),
    (10, Fraction(2, 3)), (2, Fraction(4, 15)), (3, Fraction(7, 20)), (5, Fraction(5, 12)),
    (30, Fraction(1)),
])
def test_rho_a5(k, value):
    assert sp.rho(A5, k) == value


def test_rho_star():
    assert sp.rho_star(A5, 5) == Fraction(2, 5)
    assert sp.rho_star(A5, 4) == 0
    assert sp.rho_star(sn_spectrum(5), 5) == Fraction(1, 5)


def test_rho_rejects_bad_k():
    with pytest.raises(ValueError):
        sp.rho(A5, 0)
    with pytest.raises(ValueError):
        sp.rho_star(A5, -1)


def test_exponent():
    assert sp.exponent(A5) == 30
    assert sp.exponent(sp.trivial()) == 1
    from orderspec.families import psl2_spectrum
    assert sp.exponent(psl2_spectrum(7)) == 84


# ---------------------------------------------------------------- combinators

def test_direct_product_cyclic():
    assert sp.direct_product(sp.cyclic(2), sp.cyclic(3)) == sp.make_spectrum(
        [(1, 1), (2, 1), (3, 2), (6, 2)])


def test_direct_product_matches_enumeration(get_group):
    assert sp.direct_product(A5, A5) == spectrum_of(get_group("A(5) * A(5)"))


def test_direct_product_identity():
    assert sp.direct_product(A5, sp.trivial()) == A5
    assert A5 * sp.trivial() == A5


def test_power():
    assert sp.power(A5, 2) == sp.direct_product(A5, A5)
    assert sp.power(A5, 0) == sp.trivial()
    assert sp.power(A5, 3).group_order == 216000
    assert A5 ** 3 == sp.power(A5, 3)
    with pytest.raises(ValueError):
        sp.power(A5, -1)


def test_power_of_c6_approaches_one():
    # elements of order divisible by 2 (resp. 3) make up 3/6 (resp. 4/6) of C6
    c6 = sp.cyclic(6)
    previous = Fraction(0)
    for n in range(1, 11):
        value = sp.rho_star(sp.power(c6, n), 6)
        bound = 1 - (1 - Fraction(3, 6)) ** n - (1 - Fraction(4, 6)) ** n
        assert value >= bound
        assert value > previous
        previous = value


def _construction2_oracle(h, k, eps):
    n = 0
    while True:
        g = sp.direct_product(h, sp.power(sp.cyclic(k), n))
        if sp.rho_star(g, k) > eps:
            return n
        n += 1


def test_construction2_n():
    n = sp.construction2_n(A5, 6, Fraction(1, 2))
    assert n == _construction2_oracle(A5, 6, Fraction(1, 2)) == 3
    n = sp.construction2_n(A5, 30, Fraction(9, 10))
    g = sp.direct_product(A5, sp.power(sp.cyclic(30), n))
    assert sp.rho_star(g, 30) > Fraction(9, 10)
    assert n == _construction2_oracle(A5, 30, Fraction(9, 10))


def test_construction2_n_rejects():
    with pytest.raises(ValueError):
        sp.construction2_n(A5, 7, Fraction(1, 2))
    with pytest.raises(ValueError):
        sp.construction2_n(A5, 1, Fraction(0))


def test_wreath_c2():
    assert sp.wreath_c2(sp.trivial()) == sp.cyclic(2)
    g = sp.cyclic(2)
    for _ in range(4):
        g = sp.wreath_c2(g)
    assert g.group_order == 2147483648
    assert sp.rho(g, 2) == Fraction(4292864, 2147483648)
    assert sp.rho(g, 4) == Fraction(398000128, 2147483648)


def test_wreath_c2_matches_enumeration(get_group):
    assert sp.wreath_c2(sn_spectrum(3)) == spectrum_of(get_group("wr2(S(3))"))


# ---------------------------------------------------------------- text format

def test_dumps_loads_roundtrip():
    text = sp.dumps(A5)
    assert text.splitlines()[0] == "order 60"
    assert "5 24" in text.splitlines()
    assert sp.loads(text) == A5


def test_loads_rejects_inconsistent_header():
    with pytest.raises(sp.InvalidSpectrum):
        sp.loads("order 61\n1 1\n2 15\n3 20\n5 24\n")
    with pytest.raises(sp.InvalidSpectrum):
        sp.loads("1 1\n")


def test_rational_format():
    assert sp.format_rational(Fraction(6, 10)) == "3/5"
    assert sp.format_rational(1) == "1/1"
    assert sp.parse_rational(" 31/45 ") == Fraction(31, 45)


# ---------------------------------------------------------------- properties

small_spectra = st.one_of(
    st.integers(1, 30).map(sp.cyclic),
    st.integers(1, 7).map(sn_spectrum),
    st.integers(3, 7).map(an_spectrum),
)
spectra = st.recursive(
    small_spectra,
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: sp.direct_product(*t)),
        inner.map(sp.wreath_c2),
    ),
    max_leaves=3,
).filter(lambda s: s.group_order <= 10 ** 7)


@settings(max_examples=80, deadline=None)
@given(spectra, st.integers(1, 200))
def test_rho_is_sum_of_rho_star(s, k):
    assert sp.rho(s, k) == sum((sp.rho_star(s, d) for d in sp.divisors(k)), Fraction(0))


@settings(max_examples=80, deadline=None)
@given(spectra, st.integers(1, 60), st.integers(1, 6))
def test_rho_monotone_under_divisibility(s, k, m):
    assert sp.rho(s, k) <= sp.rho(s, k * m)


@settings(max_examples=80, deadline=None)
@given(spectra, st.integers(2, 200))
def test_rho_star_below_rho(s, k):
    assert sp.rho_star(s, k) < sp.rho(s, k)


@settings(max_examples=60, deadline=None)
@given(spectra)
def test_combinator_results_are_valid_spectra(s):
    # revalidate with every check switched on
    sp.OrderSpectrum(s.counts)
    assert sp.rho(s, sp.exponent(s)) == 1


@settings(max_examples=40, deadline=None)
@given(small_spectra, small_spectra, small_spectra)
def test_direct_product_commutative_associative(a, b, c):
    assert sp.direct_product(a, b) == sp.direct_product(b, a)
    assert sp.direct_product(sp.direct_product(a, b), c) == \
        sp.direct_product(a, sp.direct_product(b, c))


@settings(max_examples=40, deadline=None)
@given(small_spectra, st.integers(0, 4))
def test_power_order(s, n):
    assert sp.power(s, n).group_order == s.group_order ** n


@settings(max_examples=60, deadline=None)
@given(small_spectra, st.integers(1, 120))
def test_wreath_identities(s, k):
    w = sp.wreath_c2(s)
    r = sp.rho(s, k)
    e = sp.exponent(s)
    if k % 2:
        assert sp.rho(w, k) == r * r / 2
        assert sp.rho(w, k) <= r / 2
        assert (r * r / 2 == r / 2) == (k % e == 0)
    else:
        half = sp.rho(s, k // 2)
        assert sp.rho(w, k) == r * r / 2 + half / 2
        assert sp.rho(w, k) <= r * (r + 1) / 2 <= r
        assert (sp.rho(w, k) == r * (r + 1) / 2) == (r == half)
        assert (r * (r + 1) / 2 == r) == (k % e == 0)


@settings(max_examples=40, deadline=None)
@given(small_spectra)
def test_dumps_loads_property(s):
    assert sp.loads(sp.dumps(s)) == s
