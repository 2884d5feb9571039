"""Concrete finite groups given by a full Cayley table.

Elements are dense indices ``0..N-1`` with the identity at ``0``.  Every
structural computation (closure, conjugacy, center, subgroup lattice,
automorphisms, minimal generator count, longest subgroup chain) works on
these indices only.
"""
from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, CapacityError

MAX_ORDER = 65535
AUTOMORPHISM_THRESHOLD = 512
LATTICE_THRESHOLD = 384
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 512


@dataclass(frozen=True)
class Subgroup:
    parent: int
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        i = np.searchsorted(self.members, g)
        return i < len(self.members) and self.members[i] == g

    def __len__(self) -> int:
        return len(self.members)

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(self.members)] = True
        return m


@dataclass(frozen=True)
class Automorphism:
    parent: int
    map: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.map[g]


def _mask_to_int(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _rows_to_ints(rows: np.ndarray) -> list[int]:
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FiniteGroup:
    """An immutable finite group backed by its multiplication table.

    ``mul[g, h]`` is the index of ``g*h``.  ``generators`` is a distinguished
    generating vector used for element words and the CLI defaults; ``names``
    is an optional per-element legend.
    """

    def __init__(
        self,
        mul: np.ndarray,
        label: str = "G",
        generators: Sequence[int] | None = None,
        names: Sequence[str] | None = None,
        spec: str = "",
    ):
        mul = np.asarray(mul)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise ArgumentError("multiplication table must be a non-empty square array")
        n = mul.shape[0]
        if n > MAX_ORDER:
            raise CapacityError(f"group order {n} exceeds the cap of {MAX_ORDER}")
        mul = np.ascontiguousarray(mul, dtype=np.uint16)
        ar = np.arange(n)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            raise ArgumentError("index 0 must be the identity")
        is_id = mul == 0
        if not np.all(is_id.any(axis=1)):
            raise ArgumentError("table has an element without inverse")
        inv = np.argmax(is_id, axis=1).astype(np.int64)
        if not np.all(mul[inv, ar] == 0):
            raise ArgumentError("left and right inverses disagree")
        mul.flags.writeable = False
        inv.flags.writeable = False
        self.mul = mul
        self.inv = inv
        self.order = n
        self.label = label
        self.spec = spec
        self.names = tuple(names) if names is not None else None
        self.fingerprint = int.from_bytes(
            hashlib.blake2b(mul.astype("<u2").tobytes(), digest_size=8).digest(), "little"
        )
        self.generators = tuple(int(g) for g in generators) if generators is not None else None
        self.elem_order = self._element_orders()

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def _element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        order = np.zeros(n, dtype=np.int64)
        cur = ar.copy()
        k = 1
        while True:
            hit = (cur == 0) & (order == 0)
            order[hit] = k
            if order.all():
                break
            cur = self.mul[cur, ar].astype(np.int64)
            k += 1
        order.flags.writeable = False
        return order

    # ------------------------------------------------------------------ basics

    def _check(self, *elems: int) -> None:
        for g in elems:
            if not 0 <= int(g) < self.order:
                raise ArgumentError(f"element index {g} out of range for order {self.order}")

    def element_arithmetic(self, g: int, h: int) -> tuple[int, int, int]:
        """Return ``(g*h, g^-1, order(g))``."""
        self._check(g, h)
        return int(self.mul[g, h]), int(self.inv[g]), int(self.elem_order[g])

    def product(self, *elems: int) -> int:
        acc = 0
        for g in elems:
            acc = int(self.mul[acc, g])
        return acc

    def power(self, g: int, k: int) -> int:
        k %= int(self.elem_order[g])
        acc = 0
        for _ in range(k):
            acc = int(self.mul[acc, g])
        return acc

    def commutator(self, g: int, h: int) -> int:
        """``[g, h] = g h g^-1 h^-1``."""
        return int(self.mul[self.mul[g, h], self.inv[self.mul[h, g]]])

    def name(self, g: int) -> str:
        return self.names[g] if self.names is not None else str(g)

    def validate(self, rng: np.random.Generator | None = None) -> None:
        """Check the group axioms; exhaustive associativity up to 512 elements."""
        n = self.order
        mul = self.mul
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
            for a in range(n):
                left = mul[mul[a]]  # (a*b)*c for all b, c
                right = mul[a][mul]  # a*(b*c)
                if not np.array_equal(left, right):
                    raise ArgumentError(f"associativity fails with first factor {a}")
        else:
            rng = rng or np.random.default_rng(0)
            for _ in range(10):
                a, b, c = rng.integers(0, n, size=(3, 100_000))
                if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
                    raise ArgumentError("associativity fails on a random triple")
        if not np.all(mul[np.arange(n), self.inv] == 0):
            raise ArgumentError("inverse table is wrong")

    # ---------------------------------------------------------------- closure

    def closure_mask(self, seed: Iterable[int]) -> np.ndarray:
        gens = np.unique(np.fromiter((int(g) for g in seed), dtype=np.int64))
        self._check(*gens.tolist())
        member = np.zeros(self.order, dtype=bool)
        member[0] = True
        gens = gens[gens != 0]
        frontier = np.array([0], dtype=np.int64)
        while frontier.size and gens.size:
            cand = self.mul[np.ix_(frontier, gens)].ravel()
            cand = np.unique(cand[~member[cand]]).astype(np.int64)
            member[cand] = True
            frontier = cand
        return member

    def closure(self, seed: Iterable[int]) -> Subgroup:
        mask = self.closure_mask(seed)
        return Subgroup(self.fingerprint, tuple(int(x) for x in np.flatnonzero(mask)))

    def is_generating(self, entries: Iterable[int]) -> bool:
        return bool(self.closure_mask(entries).all())

    # ------------------------------------------------------------- conjugacy

    @cached_property
    def _classes(self) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
        n = self.order
        class_of = np.full(n, -1, dtype=np.int64)
        classes = []
        for x in range(n):
            if class_of[x] >= 0:
                continue
            members = np.unique(self.mul[self.mul[:, x], self.inv])
            class_of[members] = len(classes)
            classes.append(tuple(int(m) for m in members))
        class_of.flags.writeable = False
        return tuple(classes), class_of

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes sorted by their smallest element, which is the representative."""
        return self._classes[0]

    @property
    def class_of(self) -> np.ndarray:
        return self._classes[1]

    def class_representative(self, g: int) -> int:
        return self.conjugacy_classes()[self.class_of[g]][0]

    @cached_property
    def _center(self) -> Subgroup:
        mask = (self.mul == self.mul.T).all(axis=1)
        return Subgroup(self.fingerprint, tuple(int(x) for x in np.flatnonzero(mask)))

    def center(self) -> Subgroup:
        return self._center

    def is_abelian(self) -> bool:
        return self.center().order == self.order

    def conjugation_table(self) -> np.ndarray:
        """``T[g, x] = g x g^-1``."""
        return self.mul[self.mul, self.inv[:, None]]

    # --------------------------------------------------------------- words

    def words(self, generators: Sequence[int] | None = None):
        """BFS spanning tree of the Cayley graph for ``generators``.

        Returns ``(parent, gen_index, layers)`` where element ``x`` equals
        ``parent[x] * generators[gen_index[x]]`` and ``layers`` lists
        elements by distance from the identity.
        """
        if generators is None and self.generators is None:
            raise ArgumentError("no generators available")
        gens = list(self.generators if generators is None else generators)
        n = self.order
        parent = np.full(n, -1, dtype=np.int64)
        gidx = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        layers = [np.array([0], dtype=np.int64)]
        frontier = layers[0]
        g_arr = np.asarray(gens, dtype=np.int64)
        while frontier.size:
            nxt = []
            for i, s in enumerate(g_arr):
                cand = self.mul[frontier, s].astype(np.int64)
                fresh = ~seen[cand]
                cand_f, par = cand[fresh], frontier[fresh]
                cand_f, first = np.unique(cand_f, return_index=True)
                par = par[first]
                seen[cand_f] = True
                parent[cand_f] = par
                gidx[cand_f] = i
                nxt.append(cand_f)
            frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
            if frontier.size:
                layers.append(frontier)
        if not seen.all():
            raise ArgumentError("the given elements do not generate the group")
        return parent, gidx, layers

    def word(self, g: int, generators: Sequence[int] | None = None) -> list[int]:
        """Indices into ``generators`` whose product (left to right) is ``g``."""
        parent, gidx, _ = self.words(generators)
        out = []
        while g != 0:
            out.append(int(gidx[g]))
            g = int(parent[g])
        return out[::-1]

    # ------------------------------------------------------ subgroup lattice

    @cached_property
    def _lattice(self):
        n = self.order
        if n > LATTICE_THRESHOLD:
            raise CapacityError(
                f"subgroup lattice needs order <= {LATTICE_THRESHOLD}, got {n}"
            )
        conj = self.conjugation_table()
        cyclic: dict[int, int] = {}
        for x in range(1, n):
            key = _mask_to_int(self.closure_mask([x]))
            cyclic.setdefault(key, x)
        cyclic_gens = sorted(cyclic.values())

        known: dict[int, int] = {}
        reps: list[tuple[int, list[int], int]] = []  # (mask int, gens, order)
        all_subgroups: list[tuple[int, int, int]] = []  # (mask int, order, class id)

        def register(mask: np.ndarray, gens: list[int]) -> None:
            key = _mask_to_int(mask)
            if key in known:
                return
            cid = len(reps)
            elems = np.flatnonzero(mask)
            rows = np.zeros((n, n), dtype=bool)
            rows[np.arange(n)[:, None], conj[:, elems]] = True
            order = int(elems.size)
            for k in set(_rows_to_ints(rows)):
                known[k] = cid
                all_subgroups.append((k, order, cid))
            reps.append((key, gens, order))

        trivial = np.zeros(n, dtype=bool)
        trivial[0] = True
        register(trivial, [])
        i = 0
        while i < len(reps):
            key, gens, _ = reps[i]
            for g in cyclic_gens:
                if key >> g & 1:
                    continue
                register(self.closure_mask(gens + [g]), gens + [g])
            i += 1
        return reps, all_subgroups

    def subgroups(self) -> list[Subgroup]:
        """All subgroups, sorted by order then members."""
        _, subs = self._lattice
        out = []
        for k, _, _ in subs:
            members = tuple(i for i in range(self.order) if k >> i & 1)
            out.append(Subgroup(self.fingerprint, members))
        out.sort(key=lambda s: (s.order, s.members))
        return out

    def subgroup_class_count(self) -> int:
        return len(self._lattice[0])

    @cached_property
    def _maximal_masks(self) -> list[int]:
        reps, subs = self._lattice
        full = (1 << self.order) - 1
        maximal_classes = set()
        for cid, (key, _, order) in enumerate(reps):
            if key == full:
                continue
            over = any(
                o > order and k != full and k & key == key and o % order == 0
                for k, o, _ in subs
            )
            if not over:
                maximal_classes.add(cid)
        return sorted(k for k, _, cid in subs if cid in maximal_classes)

    def maximal_subgroups(self) -> list[Subgroup]:
        return [
            Subgroup(self.fingerprint, tuple(i for i in range(self.order) if k >> i & 1))
            for k in self._maximal_masks
        ]

    def _pgroup_maximal_masks(self) -> list[np.ndarray] | None:
        # Burnside basis theorem: for a p-group the maximal subgroups are the
        # preimages of the hyperplanes of the Frattini quotient G / G'G^p.
        factors = _prime_factors(self.order)
        if len(factors) != 1:
            return None
        (p,) = factors
        n = self.order
        cur = np.arange(n)
        for _ in range(p - 1):
            cur = self.mul[cur, np.arange(n)]
        phi = self.closure_mask(np.concatenate([np.flatnonzero(self.derived_subgroup_mask), cur]))
        basis: list[int] = []
        span = phi
        while not span.all():
            basis.append(int(np.argmin(span)))
            span = self.closure_mask(np.concatenate([np.flatnonzero(phi), basis]))
        r = len(basis)
        if (p**r - 1) // (p - 1) > 4096:
            return None
        phi_elems = np.flatnonzero(phi)
        coords = np.zeros((n, r), dtype=np.int64)
        for a in itertools.product(range(p), repeat=r):
            g = self.product(*(self.power(b, e) for b, e in zip(basis, a)))
            coords[self.mul[g, phi_elems]] = a
        masks = []
        for f in itertools.product(range(p), repeat=r):
            nz = [c for c in f if c]
            if not nz or nz[0] != 1:
                continue
            masks.append((coords @ np.asarray(f)) % p == 0)
        return masks

    @cached_property
    def membership_words(self) -> np.ndarray | None:
        """Per element, bitmask words of the maximal subgroups containing it.

        A vector generates the group iff the AND of its entries' words is
        zero.  ``None`` when no maximal-subgroup list is available.
        """
        n = self.order
        try:
            masks = [np.array([k >> i & 1 for i in range(n)], dtype=bool) for k in self._maximal_masks]
        except CapacityError:
            masks = self._pgroup_maximal_masks()
            if masks is None:
                return None
        nwords = max(1, -(-len(masks) // 64))
        out = np.zeros((n, nwords), dtype=np.uint64)
        for bit, m in enumerate(masks):
            out[m, bit // 64] |= np.uint64(1 << (bit % 64))
        out.flags.writeable = False
        return out

    @cached_property
    def _ell(self) -> int:
        reps, subs = self._lattice
        chain = [0] * len(reps)
        order_idx = sorted(range(len(reps)), key=lambda c: reps[c][2])
        for cid in order_idx:
            key, _, order = reps[cid]
            if order == 1:
                continue
            best = 0
            for k, o, c in subs:
                if 1 < o < order and order % o == 0 and k & key == k:
                    best = max(best, chain[c])
            chain[cid] = best + 1
        full_cid = max(range(len(reps)), key=lambda c: reps[c][2])
        ell = chain[full_cid]
        bound = sum(_prime_factors(self.order).values())
        if self.order > 1 and not (self.mu() <= ell <= bound):
            raise RuntimeError(f"chain length {ell} violates mu <= ell <= {bound}")
        return ell

    def ell(self) -> int:
        """Maximum length of a properly descending chain of nontrivial subgroups."""
        return self._ell

    # ------------------------------------------------------------------- mu

    @cached_property
    def derived_subgroup_mask(self) -> np.ndarray:
        n = self.order
        seen = np.zeros(n, dtype=bool)
        step = max(1, 2**22 // n)
        for start in range(0, n, step):
            g = np.arange(start, min(n, start + step))[:, None]
            h = np.arange(n)[None, :]
            gh = self.mul[g, h]
            hg = self.mul[h, g]
            seen[self.mul[gh, self.inv[hg]].ravel()] = True
        return self.closure_mask(np.flatnonzero(seen))

    @cached_property
    def mu_lower_bound(self) -> int:
        """max over primes p of the rank of G / G'G^p; exact for p-groups."""
        n = self.order
        if n == 1:
            return 1
        derived = np.flatnonzero(self.derived_subgroup_mask)
        best = 0
        for p in _prime_factors(n):
            cur = np.arange(n)
            for _ in range(p - 1):
                cur = self.mul[cur, np.arange(n)]
            powers = np.unique(cur)
            sub = self.closure_mask(np.concatenate([derived, powers]))
            index = n // int(sub.sum())
            best = max(best, round(math.log(index, p)) if index > 1 else 0)
        return max(best, 1)

    def generating_flags(self, vectors: np.ndarray) -> np.ndarray:
        """Vectorised generation test for an array of shape (count, n)."""
        vectors = np.asarray(vectors, dtype=np.int64)
        words = self.membership_words
        if words is not None:
            acc = words[vectors[:, 0]].copy()
            for j in range(1, vectors.shape[1]):
                acc &= words[vectors[:, j]]
            return ~acc.any(axis=1)
        if vectors.shape[1] == 1:
            return self.elem_order[vectors[:, 0]] == self.order
        return np.fromiter(
            (self.is_generating(row) for row in vectors.tolist()), dtype=bool, count=len(vectors)
        )

    @cached_property
    def _minimal_generating_vector(self) -> tuple[int, ...]:
        n = self.order
        if n == 1:
            return (0,)
        lb = self.mu_lower_bound
        if self.generators is not None and len(self.generators) == lb and self.is_generating(
            self.generators
        ):
            return self.generators
        reps = [c[0] for c in self.conjugacy_classes()]
        for size in range(lb, n + 1):
            if size == 1:
                hit = np.flatnonzero(self.elem_order == n)
                if hit.size:
                    return (int(hit[0]),)
                continue
            firsts = [r for r in reps if r != 0]
            if self.membership_words is not None and n ** (size - 1) <= 2**22:
                rest = np.indices((n,) * (size - 1)).reshape(size - 1, -1).T
                for first in firsts:
                    vecs = np.column_stack([np.full(len(rest), first), rest])
                    hit = np.flatnonzero(self.generating_flags(vecs))
                    if hit.size:
                        return tuple(int(x) for x in vecs[hit[0]])
                continue
            for first in firsts:
                for rest in itertools.product(range(1, n), repeat=size - 1):
                    if self.is_generating((first,) + rest):
                        return (first,) + tuple(rest)
        raise RuntimeError("unreachable: the whole group generates itself")

    def minimal_generating_vector(self) -> tuple[int, ...]:
        return self._minimal_generating_vector

    def mu(self) -> int:
        """Minimum number of generators."""
        return len(self._minimal_generating_vector)

    # ---------------------------------------------------------- automorphisms

    @cached_property
    def _automorphisms(self) -> np.ndarray:
        n = self.order
        if n > AUTOMORPHISM_THRESHOLD:
            raise CapacityError(
                f"automorphism search needs order <= {AUTOMORPHISM_THRESHOLD}, got {n}"
            )
        if n == 1:
            return np.zeros((1, 1), dtype=np.int64)
        gens = list(self.minimal_generating_vector())
        parent, gidx, layers = self.words(gens)
        cands = [np.flatnonzero(self.elem_order == self.elem_order[s]) for s in gens]
        found = []
        right = [self.mul[:, s].astype(np.int64) for s in gens]
        for images in itertools.product(*cands):
            img = np.zeros(n, dtype=np.int64)
            im_arr = np.asarray(images, dtype=np.int64)
            for layer in layers[1:]:
                img[layer] = self.mul[img[parent[layer]], im_arr[gidx[layer]]]
            if np.bincount(img, minlength=n).max() != 1:
                continue
            if all(
                np.array_equal(img[right[i]], self.mul[img, images[i]]) for i in range(len(gens))
            ):
                found.append(img)
        auts = np.array(sorted(found, key=lambda a: a.tolist()), dtype=np.int64)
        auts.flags.writeable = False
        return auts

    def automorphism_array(self) -> np.ndarray:
        """All automorphisms as rows of an (|Aut|, N) index array."""
        return self._automorphisms

    def automorphisms(self) -> list[Automorphism]:
        return [Automorphism(self.fingerprint, tuple(int(x) for x in row)) for row in self._automorphisms]
