import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orderspec import spectrum as sp
from orderspec.families import sn_spectrum
from orderspec.perm import (CapExceeded, ElementSet, Permutation, PermutationError, center,
                            coset_spectrum, element_orders, generate, index2_subgroups,
                            is_normal, normalizer, parse_perm, quotient_spectrum,
                            read_generator_file, spectrum_of, subgroup_from_rows,
                            subgroup_index, sylow_subgroup, write_generator_file)
from orderspec.expr import FIXTURE_DIR, read_manifest

from conftest import quaternion_group


# ---------------------------------------------------------------- Permutation

def test_parse_perm_cycles_and_images():
    assert parse_perm("(1,2)", 3).images == [2, 1, 3]
    assert parse_perm("()", 5) == Permutation.identity(5)
    assert parse_perm("[2,3,1,5,4]", 5) == parse_perm("(1,2,3)(4,5)", 5)
    assert parse_perm(" (1, 3) ", 4).images == [3, 2, 1, 4]


@pytest.mark.parametrize("text,degree", [
    ("(1,2)(2,3)", 3), ("(1,4)", 3), ("(1,2", 3), ("[1,1,2]", 3), ("[1,2]", 3),
    ("(0,1)", 3), ("(a,b)", 3), ("[2,3,1", 3),
])
def test_parse_perm_errors(text, degree):
    with pytest.raises(PermutationError):
        parse_perm(text, degree)


def test_composition_is_left_to_right():
    p = parse_perm("(1,2)", 3)
    q = parse_perm("(2,3)", 3)
    # apply p first: 1 -> 2 -> 3
    assert (p * q).images[0] == 3
    assert (p * q) != (q * p)


def test_order_inverse_power_cycles():
    p = parse_perm("(1,2,3)(4,5)", 6)
    assert p.order() == 6
    assert p * p.inverse() == Permutation.identity(6)
    assert p ** 6 == Permutation.identity(6)
    assert p ** -1 == p.inverse()
    assert p.cycles() == [(1, 2, 3), (4, 5)]
    assert str(p) == "(1,2,3)(4,5)"
    assert str(Permutation.identity(3)) == "()"


@settings(max_examples=100, deadline=None)
@given(st.permutations(list(range(9))), st.permutations(list(range(9))))
def test_orders_numba_matches_python(a, b):
    p, q = Permutation(tuple(a)), Permutation(tuple(b))
    rows = np.array([p.img, q.img, (p * q).img], dtype=np.uint8)
    orders = element_orders(rows)
    assert list(orders) == [p.order(), q.order(), (p * q).order()]
    assert p.order() == math.lcm(*(len(c) for c in p.cycles()) or [1])


# ---------------------------------------------------------------- generate

def test_generate_a5():
    gens = [parse_perm("(1,2,3)", 5), parse_perm("(1,2,3,4,5)", 5)]
    g = generate(gens)
    assert len(g) == 60
    assert spectrum_of(g) == sp.make_spectrum([(1, 1), (2, 15), (3, 20), (5, 24)])


def test_generate_is_deterministic():
    gens = [parse_perm("(1,2,3,4,5,6)", 6), parse_perm("(1,2)", 6)]
    a, b = generate(gens), generate(gens)
    assert np.array_equal(a.elements, b.elements)


def test_generate_cap():
    gens = [parse_perm("(1,2,3,4,5,6,7)", 7), parse_perm("(1,2)", 7)]
    with pytest.raises(CapExceeded):
        generate(gens, cap=100)


def test_generate_rejects_mixed_degrees():
    with pytest.raises(PermutationError):
        generate([parse_perm("(1,2)", 3), parse_perm("(1,2)", 4)])


def test_generate_trivial():
    g = generate([], degree=4)
    assert len(g) == 1
    assert spectrum_of(g) == sp.trivial()


def test_fixture_m10():
    degree, gens, stem = read_generator_file(FIXTURE_DIR / "M10.gens")
    assert (degree, stem) == (10, "M10")
    g = generate(gens)
    assert len(g) == 720
    assert sp.rho(spectrum_of(g), 8) == Fraction(31, 45)


def test_fixture_psl3_4():
    _, gens, _ = read_generator_file(FIXTURE_DIR / "PSL3_4.gens")
    g = generate(gens)
    assert g.degree == 21 and len(g) == 20160
    assert sp.rho(spectrum_of(g), 35) == Fraction(395, 576)


@pytest.mark.parametrize("label", ["A6", "AutA6", "M10", "M11", "M12", "PSL3_4", "AutM12", "J1"])
def test_manifest_orders(label):
    path, order = read_manifest()[label]
    _, gens, _ = read_generator_file(path)
    assert len(generate(gens)) == order


def test_generator_file_roundtrip(tmp_path):
    gens = [parse_perm("(1,2,3)", 5), parse_perm("[2,1,3,5,4]", 5)]
    path = tmp_path / "mine.gens"
    write_generator_file(path, 5, gens, "two generators")
    text = path.read_text()
    assert text.startswith("# two generators\ndegree 5\n")
    assert read_generator_file(path) == (5, gens, "mine")


def test_generator_file_errors(tmp_path):
    bad = tmp_path / "bad.gens"
    bad.write_text("gen (1,2)\n")
    with pytest.raises(PermutationError):
        read_generator_file(bad)
    bad.write_text("degree 3\ngenerator (1,2)\n")
    with pytest.raises(PermutationError):
        read_generator_file(bad)


# ---------------------------------------------------------------- cosets and subgroups

def test_coset_spectrum_identity(get_group):
    a5 = get_group("A(5)")
    assert coset_spectrum(a5, Permutation.identity(5)) == spectrum_of(a5)


def test_coset_spectrum_total(get_group):
    a5 = get_group("A(5)")
    h = coset_spectrum(a5, parse_perm("(1,2)", 5))
    assert h.group_order == 60
    assert h[1] == 0
    # the odd half of S5: 10 transpositions, 30 four-cycles, 20 of cycle type (3,2)
    assert h.counts == {2: 10, 4: 30, 6: 20}


def test_normalizer(get_group):
    a5 = get_group("A(5)")
    p5 = sylow_subgroup(a5, 5)
    assert len(p5) == 5
    assert len(normalizer(a5, p5)) == 10
    assert normalizer(a5, a5) is a5


def test_normalizer_containment_error(get_group):
    a5 = get_group("A(5)")
    odd = generate([parse_perm("(1,2)", 5)])
    with pytest.raises(PermutationError):
        normalizer(a5, odd)


def test_normalizer_of_base_in_wreath(get_group):
    g = get_group("wr2(S(5))")
    base = generate([parse_perm("(1,2,3,4,5)", 10), parse_perm("(1,2)", 10),
                     parse_perm("(6,7,8,9,10)", 10), parse_perm("(6,7)", 10)])
    assert len(normalizer(g, base)) == len(g)
    assert quotient_spectrum(g, base) == sp.cyclic(2)


def test_sylow(get_group):
    a5 = get_group("A(5)")
    assert len(sylow_subgroup(a5, 2)) == 4
    with pytest.raises(ValueError):
        sylow_subgroup(a5, 7)
    m10 = get_group('load("M10")')
    p = sylow_subgroup(m10, 2)
    assert len(p) == 16
    assert sp.rho(spectrum_of(p), 8) >= Fraction(31, 45)


def test_center(get_group):
    assert len(center(get_group("A(5)"))) == 1
    assert len(center(get_group("C(6)"))) == 6
    assert len(center(quaternion_group())) == 2


def test_quotient_spectrum_s4_by_v4(get_group):
    s4 = get_group("S(4)")
    v4 = generate([parse_perm("(1,2)(3,4)", 4), parse_perm("(1,3)(2,4)", 4)])
    assert quotient_spectrum(s4, v4) == sn_spectrum(3)


def test_quotient_spectrum_projection(get_group):
    g = get_group("A(5) * A(5)")
    first = generate([parse_perm("(1,2,3)", 10), parse_perm("(1,2,3,4,5)", 10)])
    assert quotient_spectrum(g, first) == spectrum_of(get_group("A(5)"))


def test_quotient_spectrum_rejects_non_normal(get_group):
    s4 = get_group("S(4)")
    with pytest.raises(PermutationError):
        quotient_spectrum(s4, generate([parse_perm("(1,2)", 4)]))


def test_index2_subgroups(get_group):
    assert index2_subgroups(get_group("A(5)")) == []
    [a5] = index2_subgroups(get_group("S(5)"))
    assert spectrum_of(a5) == spectrum_of(get_group("A(5)"))
    subs = index2_subgroups(get_group("wr2(S(5))"))
    assert len(subs) == 3
    values = sorted(sp.rho(spectrum_of(h), 24) for h in subs)
    assert values == [Fraction(16, 25), Fraction(16, 25), Fraction(21, 25)]
    # the three subgroups are distinct
    assert len({frozenset(h.keys()) for h in subs}) == 3


def test_index2_of_elementary_abelian(get_group):
    # C2 x C2 x C2 has seven hyperplanes
    assert len(index2_subgroups(get_group("C(2)^3"))) == 7


def test_subgroup_index(get_group):
    s5, a5 = get_group("S(5)"), index2_subgroups(get_group("S(5)"))[0]
    assert subgroup_index(s5, a5) == 2
    assert subgroup_index(get_group("A(5)"), sylow_subgroup(get_group("A(5)"), 2)) == 15
    assert subgroup_index(s5, s5) == 1
    with pytest.raises(PermutationError):
        subgroup_index(get_group("A(5)"), generate([parse_perm("(1,2)", 5)]))


def test_is_normal(get_group):
    s4 = get_group("S(4)")
    assert is_normal(s4, generate([parse_perm("(1,2)(3,4)", 4), parse_perm("(1,3)(2,4)", 4)]))
    assert not is_normal(s4, generate([parse_perm("(1,2)", 4)]))


def test_element_set_lookup(get_group):
    a5 = get_group("A(5)")
    assert parse_perm("(1,2,3)", 5) in a5
    assert parse_perm("(1,2)", 5) not in a5
    rows = np.stack([parse_perm("(1,2)(3,4)", 5).as_array(a5.elements.dtype)])
    assert a5.lookup(rows)[0] >= 0
    sub = subgroup_from_rows(a5, a5.elements[:1])
    assert len(sub) == 1
