import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics.named_groups import AlternatingGroup, DihedralGroup, SymmetricGroup

from conftest import naive_automorphisms, naive_generates
from nielsen import ArgumentError, CapacityError, FiniteGroup, build_group

SMALL = ["cyclic:1", "cyclic:6", "abelian:2,2", "abelian:2,2,2", "abelian:4,2", "dihedral:4",
         "dihedral:6", "quaternion", "sym:3", "sym:4", "alt:4", "alt:5"]


def sympy_group(spec):
    kind, _, arg = spec.partition(":")
    if kind == "sym":
        return SymmetricGroup(int(arg))
    if kind == "alt":
        return AlternatingGroup(int(arg))
    if kind == "dihedral":
        return DihedralGroup(int(arg))
    raise KeyError(spec)


@pytest.mark.parametrize("spec", ["sym:3", "sym:4", "sym:5", "alt:4", "alt:5", "alt:6",
                                  "dihedral:5", "dihedral:7", "dihedral:12"])
def test_order_and_class_count_match_sympy(spec):
    g = build_group(spec)
    ref = sympy_group(spec)
    assert g.order == ref.order()
    assert len(g.conjugacy_classes()) == len(ref.conjugacy_classes())
    assert sorted(map(len, g.conjugacy_classes())) == sorted(len(c) for c in ref.conjugacy_classes())


@pytest.mark.parametrize("spec", SMALL)
def test_axioms(spec):
    g = build_group(spec)
    g.validate()
    ar = np.arange(g.order)
    assert np.array_equal(g.mul[ar, g.inv], np.zeros(g.order))
    assert g.elem_order[0] == 1


def test_identity_must_be_index_zero():
    bad = np.array([[1, 0], [0, 1]])
    with pytest.raises(ArgumentError):
        FiniteGroup(bad)


def test_nonassociative_table_is_rejected():
    # a Latin square with identity 0 that is not a group table (order 5 loop)
    t = np.array([
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ])
    with pytest.raises(ArgumentError):
        FiniteGroup(t).validate()


def test_element_arithmetic_range_check(d10):
    assert d10.element_arithmetic(0, 3)[0] == 3
    with pytest.raises(ArgumentError):
        d10.element_arithmetic(0, 10)


def naive_mu(g):
    mul = g.mul.tolist()
    for size in range(1, g.order + 1):
        for v in itertools.combinations(range(g.order), size):
            if naive_generates(mul, g.order, v):
                return size


@pytest.mark.parametrize("spec", SMALL + ["abelian:6,2", "abelian:2,2,2,2", "dihedral:9"])
def test_mu_matches_brute_force(spec):
    g = build_group(spec)
    assert g.mu() == naive_mu(g)
    assert g.is_generating(g.minimal_generating_vector())
    assert g.mu_lower_bound <= g.mu()


def naive_subgroups(g):
    mul = g.mul.tolist()
    subs = set()
    for size in (1, 2, 3):
        for gens in itertools.combinations(range(g.order), size):
            subs.add(frozenset(np.flatnonzero(g.closure_mask(gens)).tolist()))
    return subs


def naive_ell(g):
    subs = sorted(naive_subgroups(g), key=len)

    @lru_cache(maxsize=None)
    def longest(h):
        best = 0
        for k in subs:
            if 1 < len(k) < len(h) and k < h:
                best = max(best, longest(k))
        return best + 1

    return longest(frozenset(range(g.order))) if g.order > 1 else 0


@pytest.mark.parametrize("spec", ["cyclic:12", "abelian:2,2,2", "dihedral:4", "dihedral:5", "dihedral:6",
                                  "quaternion", "sym:3", "sym:4", "alt:4", "abelian:4,2"])
def test_ell_matches_brute_force(spec):
    g = build_group(spec)
    assert g.ell() == naive_ell(g)


def test_ell_of_small_cases():
    assert build_group("dihedral:5").ell() == 2
    assert build_group("alt:5").ell() == 4  # A5 > A4 > V4 > C2
    assert build_group("cyclic:16").ell() == 4


def test_lattice_is_refused_beyond_threshold():
    with pytest.raises(CapacityError):
        build_group("sym:6").ell()


@pytest.mark.parametrize("spec,count", [("cyclic:8", 4), ("abelian:2,2", 6), ("dihedral:4", 8),
                                        ("quaternion", 24), ("sym:3", 6), ("abelian:4,2", 8),
                                        ("dihedral:5", 20)])
def test_automorphisms_match_naive(spec, count):
    g = build_group(spec)
    auts = {tuple(r) for r in g.automorphism_array().tolist()}
    assert len(auts) == count
    assert auts == set(naive_automorphisms(g))


def test_automorphisms_of_a5_is_s5_sized(a5):
    assert len(a5.automorphism_array()) == 120


@pytest.mark.parametrize("spec", SMALL)
def test_generating_flags_agree_with_closure(spec, rng):
    g = build_group(spec)
    for n in (1, 2, 3):
        vecs = rng.integers(0, g.order, size=(200, n))
        flags = g.generating_flags(vecs)
        mul = g.mul.tolist()
        ref = [naive_generates(mul, g.order, tuple(v)) for v in vecs.tolist()]
        assert flags.tolist() == ref


def test_bgroup_generation_uses_frattini_hyperplanes(rng):
    g = build_group("bgroup")
    words = g.membership_words
    assert words is not None
    # 2-group of rank 3: seven maximal subgroups
    assert bin(int(np.bitwise_or.reduce(words[:, 0]))).count("1") == 7
    vecs = rng.integers(0, g.order, size=(40, 3))
    flags = g.generating_flags(vecs)
    ref = [g.is_generating(v) for v in vecs.tolist()]
    assert flags.tolist() == ref


def test_center_and_commutator(d10):
    assert d10.center().order == 1
    q = build_group("quaternion")
    assert q.center().order == 2
    x, y = q.generators
    c = q.commutator(x, y)
    assert c == q.product(x, y, q.inv[x], q.inv[y])
    assert c in q.center()


def test_words_reconstruct_every_element(a5):
    gens = a5.generators
    for x in range(a5.order):
        assert a5.product(*(gens[i] for i in a5.word(x))) == x


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10**6), st.integers(-7, 7))
def test_power_law(spec, seed, k):
    g = build_group(spec)
    x = seed % g.order
    assert g.mul[g.power(x, k), g.power(x, -k)] == 0
    assert g.power(x, int(g.elem_order[x])) == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.lists(st.integers(0, 10**6), min_size=1, max_size=3))
def test_closure_is_a_subgroup(spec, seeds):
    g = build_group(spec)
    elems = [s % g.order for s in seeds]
    mask = g.closure_mask(elems)
    members = np.flatnonzero(mask)
    assert mask[elems].all()
    assert mask[g.mul[np.ix_(members, members)]].all()
    assert g.order % len(members) == 0


def test_fingerprint_depends_on_table_only():
    a = build_group("cyclic:6")
    b = FiniteGroup(a.mul.copy(), label="other")
    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != build_group("sym:3").fingerprint
