"""Constructive reductions that emit replayable move traces.

``tower_reduce`` runs the subtraction-form Euclidean algorithm in each
cyclic quotient of a tower.  ``supraminimal_reduce`` and
``stabilization_equivalence`` rewrite entries as words in other entries
and cancel them one move at a time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import (
    MAX_LENGTH,
    GenVector,
    MoveTrace,
    RightMul,
    Swap,
    _TraceBuilder,
    stabilize,
)
from .errors import ArgumentError, CapacityError, DomainError
from .group import FiniteGroup, Subgroup


def _subgroup(group: FiniteGroup, mask: np.ndarray) -> Subgroup:
    return Subgroup(group.fingerprint, tuple(int(x) for x in np.flatnonzero(mask)))


def _mask(group: FiniteGroup, sub: Subgroup) -> np.ndarray:
    m = np.zeros(group.order, dtype=bool)
    m[list(sub.members)] = True
    return m


def _commutator_mask(group: FiniteGroup, mask: np.ndarray) -> np.ndarray:
    elems = np.flatnonzero(mask)
    g, h = elems[:, None], elems[None, :]
    gh = group.mul[g, h]
    hg = group.mul[h, g]
    comms = np.unique(group.mul[gh, group.inv[hg]])
    return group.closure_mask(comms)


def derived_series(group: FiniteGroup) -> list[Subgroup]:
    """``G, G', G'', ...`` until the series stabilises."""
    masks = [np.ones(group.order, dtype=bool)]
    while True:
        nxt = _commutator_mask(group, masks[-1])
        if nxt.sum() == masks[-1].sum():
            break
        masks.append(nxt)
    return [_subgroup(group, m) for m in masks]


def is_solvable(group: FiniteGroup) -> bool:
    return derived_series(group)[-1].order == 1


@dataclass(frozen=True)
class CyclicTower:
    """``chain[0] = G``, ``chain[-1] = {1}``; ``generators[i]`` generates
    ``chain[i] / chain[i + 1]``."""

    group: FiniteGroup
    chain: tuple[Subgroup, ...]
    generators: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.generators)

    def orders(self) -> list[int]:
        return [s.order for s in self.chain]

    def check(self) -> None:
        g = self.group
        for i, c in enumerate(self.generators):
            upper, lower = _mask(g, self.chain[i]), _mask(g, self.chain[i + 1])
            if not upper[c]:
                raise ArgumentError(f"designated generator {c} is not in term {i}")
            if not np.array_equal(g.closure_mask(np.concatenate([np.flatnonzero(lower), [c]])), upper):
                raise ArgumentError(f"quotient {i} is not generated by its designated coset")
            members = np.flatnonzero(upper)
            conj = g.mul[g.mul[members[:, None], np.flatnonzero(lower)[None, :]], g.inv[members][:, None]]
            if not lower[conj].all():
                raise ArgumentError(f"term {i + 1} is not normal in term {i}")


def cyclic_tower(group: FiniteGroup) -> CyclicTower:
    """Refine the derived series so that every quotient is cyclic.

    Inside each abelian step ``H / K`` the chain is built upwards from
    ``K`` by adjoining the smallest element of ``H`` not yet covered; every
    intermediate subgroup is normal in ``H`` because ``H / K`` is abelian.
    """
    series = derived_series(group)
    if series[-1].order != 1:
        raise DomainError(f"{group.label} is not solvable")
    chain = [np.ones(group.order, dtype=bool)]
    gens: list[int] = []
    for upper, lower in zip(series, series[1:] + [None]):
        if lower is None:
            break
        up = _mask(group, upper)
        cur = _mask(group, lower)
        steps = []
        while not np.array_equal(cur, up):
            c = int(np.flatnonzero(up & ~cur)[0])
            nxt = group.closure_mask(np.concatenate([np.flatnonzero(cur), [c]]))
            steps.append((cur, c))
            cur = nxt
        for below, c in reversed(steps):
            chain.append(below)
            gens.append(c)
    tower = CyclicTower(group, tuple(_subgroup(group, m) for m in chain), tuple(gens))
    tower.check()
    return tower


def _exponents(group: FiniteGroup, upper: np.ndarray, lower: np.ndarray, c: int) -> np.ndarray:
    """Exponent of each element of ``upper`` in the cyclic quotient by ``lower``."""
    exp = np.full(group.order, -1, dtype=np.int64)
    lower_elems = np.flatnonzero(lower)
    x, a = 0, 0
    while True:
        coset = group.mul[x, lower_elems]
        if exp[coset[0]] >= 0:
            break
        exp[coset] = a
        x = int(group.mul[x, c])
        a += 1
    if (exp[upper] < 0).any():
        raise ArgumentError("designated generator does not generate the quotient")
    return exp


def tower_reduce(v: GenVector, tower: CyclicTower) -> tuple[GenVector, MoveTrace]:
    """Nielsen-reduce ``v`` so that entry ``i`` lies in ``tower.chain[i]``.

    Entries beyond the tower length become the identity.  ``v`` need not
    generate the group.
    """
    g = v.group
    if tower.group.fingerprint != v.fingerprint:
        raise ArgumentError("the tower belongs to a different group")
    b = _TraceBuilder(v)
    n = v.n
    for i in range(min(n, len(tower))):
        upper = _mask(g, tower.chain[i])
        lower = _mask(g, tower.chain[i + 1])
        exp = _exponents(g, upper, lower, tower.generators[i])
        for j in range(i + 1, n):
            while True:
                a = int(exp[b.current[i]])
                c = int(exp[b.current[j]])
                if c == 0:
                    break
                if a == 0:
                    b.apply(Swap(i, j))
                elif a >= c:
                    b.apply(RightMul(i, j, -1))
                else:
                    b.apply(RightMul(j, i, -1))
    out = b.current
    for i, e in enumerate(out.entries):
        term = tower.chain[i] if i < len(tower.chain) else tower.chain[-1]
        assert e in term, f"entry {i} escaped term {i} of the tower"
    return out, b.build()


# -------------------------------------------------------------- rewriting


def _word(group: FiniteGroup, target: int, letters: list[tuple[int, int, int]]) -> list[tuple[int, int]]:
    """Shortest word for ``target`` over ``letters`` = (position, sign, element).

    BFS from the identity multiplying on the right; ties go to the earlier
    letter.  Returns ``[(position, sign), ...]`` read left to right.
    """
    if target == 0:
        return []
    parent = {0: None}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for li, (_, _, e) in enumerate(letters):
                y = int(group.mul[x, e])
                if y in parent:
                    continue
                parent[y] = (x, li)
                if y == target:
                    out = []
                    while parent[y] is not None:
                        y, idx = parent[y]
                        out.append(letters[idx][:2])
                    return out[::-1]
                nxt.append(y)
        frontier = nxt
    raise ArgumentError(f"element {target} is not in the subgroup generated by the given entries")


def _letters(b: _TraceBuilder, positions: Sequence[int]) -> list[tuple[int, int, int]]:
    g = b.current.group
    out = []
    for p in sorted(positions):
        e = b.current[p]
        out.append((p, 1, e))
        out.append((p, -1, int(g.inv[e])))
    return out


def _eliminate(b: _TraceBuilder, pos: int, others: Sequence[int]) -> None:
    """Turn entry ``pos`` into the identity using entries at ``others``."""
    word = _word(b.current.group, b.current[pos], _letters(b, others))
    for p, s in reversed(word):
        b.apply(RightMul(pos, p, -s))


def _splice(b: _TraceBuilder, pos: int, target: int, others: Sequence[int]) -> None:
    """Turn the identity at ``pos`` into ``target`` using entries at ``others``."""
    if b.current[pos] != 0:
        raise ArgumentError(f"position {pos} does not hold the identity")
    word = _word(b.current.group, target, _letters(b, others))
    for p, s in word:
        b.apply(RightMul(pos, p, s))


def _check_minimal(group: FiniteGroup, s: GenVector) -> None:
    if s.fingerprint != group.fingerprint:
        raise ArgumentError("the minimal vector belongs to a different group")
    if s.n != group.mu() or not s.is_generating():
        raise ArgumentError(f"s must be a generating vector of length mu = {group.mu()}")


def supraminimal_reduce(v: GenVector, s: GenVector) -> tuple[GenVector, MoveTrace]:
    """Reduce a generating ``m``-vector with ``m > ell`` to ``(s, 1, ..., 1)``."""
    g = v.group
    if not v.is_generating():
        raise ArgumentError(f"{v} does not generate the group")
    _check_minimal(g, s)
    m = v.n
    if m <= g.ell():
        raise ArgumentError(f"length {m} must exceed ell = {g.ell()}")
    b = _TraceBuilder(v)
    mu = s.n
    for k in range(mu):
        if b.current[k] == s[k]:
            continue
        # a pigeonhole position: the running closure does not grow at i
        span = np.zeros(g.order, dtype=bool)
        span[0] = True
        i = None
        for p in range(m):
            if span[b.current[p]]:
                if p >= k:
                    i = p
                    break
            span = g.closure_mask(np.concatenate([np.flatnonzero(span), [b.current[p]]]))
        if i is None:
            raise RuntimeError("no redundant entry although m > ell")
        _eliminate(b, i, range(i))
        _splice(b, i, s[k], [p for p in range(m) if p != i])
        if i != k:
            b.apply(Swap(k, i))
    for j in range(mu, m):
        _eliminate(b, j, range(mu))
    out = b.current
    expected = tuple(s.entries) + (0,) * (m - mu)
    assert out.entries == expected, "reduction did not reach (s, 1, ..., 1)"
    return out, b.build()


def _to_standard(v: GenVector, s: GenVector) -> MoveTrace:
    """Trace from ``stabilize(v, mu)`` to ``(s, 1, ..., 1)``."""
    m, mu = v.n, s.n
    b = _TraceBuilder(stabilize(v, mu))
    original = list(range(m))
    slots = list(range(m, m + mu))
    for i, p in enumerate(slots):
        _splice(b, p, s[i], original)
    for j in original:
        _eliminate(b, j, slots)
    for i in range(mu):
        b.apply(Swap(i, m + i))
    assert b.current.entries == tuple(s.entries) + (0,) * m
    return b.build()


def stabilization_equivalence(v: GenVector, w: GenVector) -> MoveTrace:
    """A trace from ``stabilize(v, mu)`` to ``stabilize(w, mu)``."""
    if v.fingerprint != w.fingerprint:
        raise ArgumentError("vectors belong to different groups")
    if v.n != w.n:
        raise ArgumentError(f"length mismatch: {v.n} vs {w.n}")
    for x in (v, w):
        if not x.is_generating():
            raise ArgumentError(f"{x} does not generate the group")
    g = v.group
    s = GenVector(g, g.minimal_generating_vector())
    if v.n + s.n > MAX_LENGTH:
        raise CapacityError(f"stabilized length {v.n + s.n} exceeds {MAX_LENGTH}")
    return _to_standard(v, s).then(_to_standard(w, s).inverse())
