import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, totient

from nielsen import (
    AbelianQuotient,
    ArgumentError,
    GenVector,
    UnsupportedError,
    all_moves,
    apply_move,
    build_group,
    classify,
    det_invariant,
    euler_phi,
    higman_pair,
    invariant_lower_bound,
    weak_det_orbit,
)
from nielsen.catalog import bgroup_index
from nielsen.invariants import _det_mod, canonical_residue


@pytest.mark.parametrize("k", range(1, 200))
def test_euler_phi(k):
    assert euler_phi(k) == int(totient(k))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(2, 64), st.data())
def test_bareiss_matches_sympy(m, d, data):
    rows = [data.draw(st.lists(st.integers(-70, 70), min_size=m, max_size=m)) for _ in range(m)]
    assert _det_mod(rows, d) == int(Matrix(rows).det()) % d


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["alt:5", "sym:4", "dihedral:7", "psl2:7", "quaternion"]),
       st.integers(0, 10**6), st.integers(0, 10**6), st.data())
def test_commutator_pair_is_a_nielsen_invariant(spec, a, b, data):
    g = build_group(spec)
    v = GenVector(g, [a % g.order, b % g.order])
    before = higman_pair(v)
    for m in data.draw(st.lists(st.sampled_from(all_moves(2)), max_size=20)):
        v = apply_move(v, m)
    assert higman_pair(v) == before


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["abelian:4,4", "abelian:5,5", "abelian:6,6,6", "cyclic:9", "abelian:12,4"]), st.data())
def test_determinant_is_a_nielsen_invariant(spec, data):
    g = build_group(spec)
    q = AbelianQuotient.standard(g)
    v = GenVector(g, data.draw(st.lists(st.integers(0, g.order - 1), min_size=q.rank, max_size=q.rank)))
    before = det_invariant(v, q)
    for m in data.draw(st.lists(st.sampled_from(all_moves(q.rank)), max_size=25)):
        v = apply_move(v, m)
    assert det_invariant(v, q) == before


@pytest.mark.parametrize("m", range(3, 26, 2))
def test_commutator_pair_separates_dihedral_pairs(m):
    g = build_group(f"dihedral:{m}")
    bound = invariant_lower_bound(g, 2)
    assert bound == euler_phi(m) // 2
    assert bound <= len(classify(g, 2))


def test_commutator_pair_is_weaker_for_even_m():
    # r^2 and r^6 = r^-2 are conjugate in D16, so (s, r) and (s, r^3) share the pair
    g = build_group("dihedral:8")
    assert invariant_lower_bound(g, 2) == 1
    assert len(classify(g, 2)) == 2


@pytest.mark.parametrize("spec", ["abelian:5,5", "abelian:7,7", "abelian:8,8", "abelian:9,3"])
def test_determinant_bound_is_sharp_for_abelian(spec):
    g = build_group(spec)
    q = AbelianQuotient.standard(g)
    d = q.modulus
    assert invariant_lower_bound(g, q.rank, q) == max(1, euler_phi(d) // 2)
    if g.order**q.rank <= 2**20:
        assert len(classify(g, q.rank)) == max(1, euler_phi(d) // 2)


def test_bgroup_determinants():
    g = build_group("bgroup")
    q = AbelianQuotient.standard(g)
    x, y, z = bgroup_index(1, 0, 0), bgroup_index(0, 1, 0), bgroup_index(0, 0, 1)
    z3 = bgroup_index(0, 0, 3)
    assert q(z3) == (0, 0, 3)
    assert det_invariant(GenVector(g, [x, y, z]), q).value == 1
    assert det_invariant(GenVector(g, [x, y, z3]), q).value == 3
    assert weak_det_orbit(1) == frozenset({1})
    assert weak_det_orbit(3) == frozenset({3})
    assert invariant_lower_bound(g, 3, q, samples=3000) == 2


def test_weak_orbit_is_mod_8_only():
    with pytest.raises(UnsupportedError):
        weak_det_orbit(1, d=5)


def test_canonical_residue():
    assert [canonical_residue(r, 8) for r in range(8)] == [0, 1, 2, 3, 4, 3, 2, 1]


def test_quotient_rejects_non_homomorphism():
    g = build_group("sym:3")  # generators: a transposition and a 3-cycle
    with pytest.raises(ArgumentError):
        AbelianQuotient(g, (3,), [(1,), (0,)])
    sign = AbelianQuotient(g, (2,), [(1,), (0,)])
    assert sum(sign(e)[0] for e in range(6)) == 3


def test_standard_quotient_needs_known_shape():
    with pytest.raises(ArgumentError):
        AbelianQuotient.standard(build_group("alt:5"))


def test_higman_needs_pairs(a5):
    with pytest.raises(ArgumentError):
        higman_pair(GenVector(a5, [1, 2, 3]))
    with pytest.raises(ArgumentError):
        invariant_lower_bound(a5, 3)


def test_a5_pairs_commutator_bound(a5):
    b = invariant_lower_bound(a5, 2)
    assert 1 <= b <= len(classify(a5, 2))
    rng_bound = invariant_lower_bound(a5, 2, samples=500, seed=3)
    assert rng_bound <= b
