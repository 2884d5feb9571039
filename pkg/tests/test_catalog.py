import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from nielsen import CapacityError, ParseError, build_group, build_psl2, parse_group_spec
from nielsen.catalog import bgroup_index, bgroup_inverse, bgroup_normal_form, invariant_factors, psl2_order


@pytest.mark.parametrize("text,order", [
    ("cyclic:1", 1), ("cyclic:12", 12), ("abelian:2,2", 4), ("abelian:6,4", 24),
    ("dihedral:2", 4), ("dihedral:5", 10), ("quaternion", 8), ("sym:4", 24),
    ("alt:5", 60), ("psl2:4", 60), ("psl2:7", 168), ("psl2:9", 360), ("psl2:8", 504),
    ("bgroup", 4096),
])
def test_orders(text, order):
    assert build_group(text).order == order


@pytest.mark.parametrize("text", ["cyclic:7", " abelian : 2 , 4 ", "perm:(1 2 3)(4 5),(1 2)"])
def test_spec_round_trip(text):
    spec = parse_group_spec(text)
    assert parse_group_spec(spec.text()) == spec


@pytest.mark.parametrize("moduli,factors", [
    ([2, 3], [6]), ([2, 2], [2, 2]), ([4, 6], [12, 2]), ([2, 3, 4], [12, 2]), ([5, 5], [5, 5]),
    ([1], [1]), ([8, 4, 2], [8, 4, 2]),
])
def test_invariant_factors(moduli, factors):
    assert invariant_factors(moduli) == factors
    assert parse_group_spec("abelian:" + ",".join(map(str, moduli))).params == tuple(factors)


@pytest.mark.parametrize("text,pos", [
    ("cyclc:3", 0), ("cyclic:", 7), ("cyclic:0", 7), ("dihedral:1", 9), ("psl2:6", 5),
    ("quaternion:2", 11), ("cyclic:3,4", 7), ("perm:(1 2", 9), ("perm:(1 1)", 10), ("sym:3x", 5),
])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_group_spec(text)
    assert info.value.position == pos


def test_size_caps():
    with pytest.raises(CapacityError):
        build_group("cyclic:70000")
    with pytest.raises(CapacityError):
        build_group("sym:9")
    with pytest.raises(CapacityError):
        build_psl2(64)


@pytest.mark.parametrize("gens", [
    ["(1 2 3)", "(1 2)"],
    ["(1 2 3 4 5)", "(1 2)"],
    ["(1 2 3 4)", "(1 3)"],
    ["(1 2)(3 4)", "(1 3)(2 4)"],
    ["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"],
])
def test_perm_groups_match_sympy(gens):
    g = build_group("perm:" + ",".join(gens))
    degree = max(int(c) for s in gens for c in s if c.isdigit())
    ref = PermutationGroup([Permutation([[int(x) - 1 for x in cyc.split()] for cyc in s.strip("()").split(")(")],
                                        size=degree) for s in gens])
    assert g.order == ref.order()
    assert sorted(map(len, g.conjugacy_classes())) == sorted(len(c) for c in ref.conjugacy_classes())
    g.validate()


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_psl2(q):
    g = build_psl2(q)
    assert g.order == psl2_order(q)
    g.validate()
    assert g.is_generating(g.generators)
    assert g.center().order == 1


@pytest.mark.parametrize("a,b", [("psl2:4", "alt:5"), ("psl2:5", "alt:5"), ("psl2:9", "alt:6"), ("psl2:3", "alt:4")])
def test_exceptional_isomorphisms_have_matching_class_sizes(a, b):
    ga, gb = build_group(a), build_group(b)
    assert sorted(map(len, ga.conjugacy_classes())) == sorted(map(len, gb.conjugacy_classes()))
    assert np.array_equal(np.bincount(ga.elem_order), np.bincount(gb.elem_order))


def test_dihedral_relations():
    g = build_group("dihedral:7")
    s, r = g.generators
    assert g.elem_order[s] == 2 and g.elem_order[r] == 7
    assert g.product(s, r, s) == g.inv[r]


def test_quaternion_relations():
    g = build_group("quaternion")
    i, j = g.generators
    assert g.elem_order[i] == g.elem_order[j] == 4
    assert g.power(i, 2) == g.power(j, 2) == g.product(i, j, i, j)


def test_bgroup_structure():
    g = build_group("bgroup")
    x, y, z = g.generators
    assert [int(g.elem_order[e]) for e in (x, y, z)] == [8, 8, 64]
    z8 = g.power(z, 8)
    assert z8 in g.center()
    assert g.product(x, y) == g.product(y, x, z8)
    assert g.center().order == 64  # the center is <z>
    g.validate()


@settings(max_examples=300, deadline=None)
@given(*[st.integers(0, 63)] * 9)
def test_bgroup_normal_form_is_associative(a1, b1, c1, a2, b2, c2, a3, b3, c3):
    t1, t2, t3 = (a1 % 8, b1 % 8, c1), (a2 % 8, b2 % 8, c2), (a3 % 8, b3 % 8, c3)
    left = bgroup_normal_form(*bgroup_normal_form(*t1, *t2), *t3)
    right = bgroup_normal_form(*t1, *bgroup_normal_form(*t2, *t3))
    assert left == right
    assert bgroup_normal_form(*t1, *bgroup_inverse(*t1)) == (0, 0, 0)
    g = build_group("bgroup")
    assert g.mul[bgroup_index(*t1), bgroup_index(*t2)] == bgroup_index(*bgroup_normal_form(*t1, *t2))
