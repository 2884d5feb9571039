import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nielsen import (
    ArgumentError,
    DomainError,
    GenVector,
    are_equivalent,
    build_group,
    classify,
    cyclic_tower,
    derived_series,
    is_solvable,
    stabilization_equivalence,
    stabilize,
    supraminimal_reduce,
    tower_reduce,
)

SOLVABLE = ["cyclic:12", "abelian:6,2", "dihedral:6", "dihedral:9", "quaternion", "sym:3", "sym:4",
            "alt:4", "abelian:2,2,2", "cyclic:1"]


def naive_derived_length(g):
    # commutator subgroup via all commutators, repeated
    current = list(range(g.order))
    length = 0
    while len(current) > 1:
        comms = {g.commutator(a, b) for a in current for b in current}
        nxt = np.flatnonzero(g.closure_mask(comms)).tolist()
        if len(nxt) == len(current):
            return None
        current = nxt
        length += 1
    return length


@pytest.mark.parametrize("spec", SOLVABLE + ["alt:5", "sym:5"])
def test_derived_series(spec):
    g = build_group(spec)
    series = derived_series(g)
    ref = naive_derived_length(g)
    assert is_solvable(g) == (ref is not None)
    if ref is not None:
        assert len(series) - 1 == ref


def test_derived_series_of_s4():
    assert [h.order for h in derived_series(build_group("sym:4"))] == [24, 12, 4, 1]


@pytest.mark.parametrize("spec", SOLVABLE)
def test_tower_quotients_are_cyclic_and_normal(spec):
    g = build_group(spec)
    t = cyclic_tower(g)
    t.check()
    orders = t.orders()
    assert orders[0] == g.order and orders[-1] == 1
    assert all(a % b == 0 and a > b for a, b in zip(orders, orders[1:]))


def test_tower_refuses_nonsolvable(a5):
    with pytest.raises(DomainError):
        cyclic_tower(a5)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SOLVABLE), st.data())
def test_tower_reduce(spec, data):
    g = build_group(spec)
    t = cyclic_tower(g)
    n = data.draw(st.integers(1, 5))
    v = GenVector(g, data.draw(st.lists(st.integers(0, g.order - 1), min_size=n, max_size=n)))
    out, tr = tower_reduce(v, t)
    assert tr.is_valid() and tr.start == v and tr.end == out
    for i, e in enumerate(out.entries):
        assert e in (t.chain[i] if i < len(t.chain) else t.chain[-1])
    assert np.array_equal(g.closure_mask(v.entries), g.closure_mask(out.entries))


def test_tower_reduce_on_cyclic_is_euclid():
    g = build_group("cyclic:12")
    t = cyclic_tower(g)
    out, tr = tower_reduce(GenVector(g, [8, 3]), t)
    # gcd(8, 3) = 1 ends up in front, the rest is the identity
    assert g.elem_order[out[0]] == 12 and out[1] == 0
    assert tr.is_valid()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sym:4", "dihedral:6", "alt:4", "abelian:6,2", "quaternion", "alt:5", "sym:3"]),
       st.integers(0, 2**32))
def test_supraminimal_reduce(spec, seed):
    g = build_group(spec)
    rng = np.random.default_rng(seed)
    m = g.ell() + 1
    while True:
        v = GenVector(g, rng.integers(0, g.order, size=m))
        if v.is_generating():
            break
    s = GenVector(g, g.minimal_generating_vector())
    out, tr = supraminimal_reduce(v, s)
    assert out == stabilize(s, m - s.n)
    assert tr.is_valid()


def test_supraminimal_needs_length_beyond_ell(d10):
    s = GenVector(d10, d10.minimal_generating_vector())
    with pytest.raises(ArgumentError):
        supraminimal_reduce(GenVector(d10, [5, 1]), s)
    with pytest.raises(ArgumentError):
        supraminimal_reduce(GenVector(d10, [1, 2, 3]), s)  # rotations only


def test_supraminimal_on_standard_vector_is_empty(d10):
    s = GenVector(d10, d10.minimal_generating_vector())
    out, tr = supraminimal_reduce(stabilize(s, 1), s)
    assert out == stabilize(s, 1) and len(tr) == 0


@pytest.mark.parametrize("spec", ["dihedral:5", "alt:5", "abelian:5,5", "dihedral:8", "sym:4"])
def test_stabilization_equivalence(spec):
    g = build_group(spec)
    reps = classify(g, g.mu()).representatives()
    for w in reps[1:]:
        tr = stabilization_equivalence(reps[0], w)
        assert tr.is_valid()
        assert tr.start == stabilize(reps[0], g.mu())
        assert tr.end == stabilize(w, g.mu())
    # independent check by orbit search where the space is small
    if g.order ** (2 * g.mu()) <= 2**20 and len(reps) > 1:
        assert are_equivalent(stabilize(reps[0], g.mu()), stabilize(reps[1], g.mu()))[0]


def test_stabilization_equivalence_argument_checks(d10, a5):
    with pytest.raises(ArgumentError):
        stabilization_equivalence(GenVector(d10, [5, 1]), GenVector(a5, [1, 2]))
    with pytest.raises(ArgumentError):
        stabilization_equivalence(GenVector(d10, [5, 1]), GenVector(d10, [5, 1, 0]))
    with pytest.raises(ArgumentError):
        stabilization_equivalence(GenVector(d10, [1, 2]), GenVector(d10, [5, 1]))
