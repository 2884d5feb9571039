"""Cheap invariants of Nielsen classes.

Two invariants are mechanised.  For 2-vectors, the unordered pair of
conjugacy classes of ``[x, y]`` and ``[y, x]`` is unchanged by every move.
For ``m``-vectors with an abelian quotient ``(Z/d)^m`` the determinant of
the image matrix changes only by a sign, so ``min(r, d - r)`` is invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .catalog import parse_group_spec
from .engine import CLASSIFY_CAP, GenVector, _Space
from .errors import ArgumentError, UnsupportedError
from .group import FiniteGroup


def euler_phi(k: int) -> int:
    if k < 1:
        raise ArgumentError("euler_phi needs a positive integer")
    out, m, p = k, k, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


# ------------------------------------------------------------------ Higman


@dataclass(frozen=True)
class HigmanInvariant:
    """Sorted pair of conjugacy-class representatives (may be equal)."""

    classes: tuple[int, int]

    def __str__(self) -> str:
        a, b = self.classes
        return f"{{{a}}}" if a == b else f"{{{a},{b}}}"


def _higman_keys(group: FiniteGroup, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    mul, inv = group.mul, group.inv
    xy = mul[x, y].astype(np.int64)
    yx = mul[y, x].astype(np.int64)
    c1 = group.class_of[mul[xy, inv[yx]]]
    c2 = group.class_of[mul[yx, inv[xy]]]
    return np.minimum(c1, c2) * len(group.conjugacy_classes()) + np.maximum(c1, c2)


def higman_pair(v: GenVector) -> HigmanInvariant:
    if v.n != 2:
        raise ArgumentError(f"the commutator pair needs a 2-vector, got length {v.n}")
    g = v.group
    x, y = v.entries
    a = g.class_representative(g.commutator(x, y))
    b = g.class_representative(g.commutator(y, x))
    return HigmanInvariant((min(a, b), max(a, b)))


# ------------------------------------------------------------- determinant


class AbelianQuotient:
    """A homomorphism from a group onto ``Z/d_1 x ... x Z/d_m``.

    It is specified by images of the group's distinguished generators and
    extended to every element through BFS words.  The extension is checked
    to be a homomorphism on every (element, generator) pair.
    """

    def __init__(self, group: FiniteGroup, moduli: Sequence[int], images: Sequence[Sequence[int]]):
        if group.generators is None:
            raise ArgumentError("the group has no distinguished generators")
        moduli = tuple(int(d) for d in moduli)
        if not moduli or any(d < 1 for d in moduli):
            raise ArgumentError("moduli must be positive")
        if len(images) != len(group.generators):
            raise ArgumentError(
                f"need {len(group.generators)} generator images, got {len(images)}"
            )
        mod = np.array(moduli, dtype=np.int64)
        img = np.array(images, dtype=np.int64).reshape(len(images), len(moduli)) % mod
        parent, gidx, layers = group.words(group.generators)
        proj = np.zeros((group.order, len(moduli)), dtype=np.int64)
        for layer in layers[1:]:
            proj[layer] = (proj[parent[layer]] + img[gidx[layer]]) % mod
        for i, s in enumerate(group.generators):
            right = group.mul[:, s].astype(np.int64)
            if not np.array_equal(proj[right], (proj + img[i]) % mod):
                raise ArgumentError("the generator images do not define a homomorphism")
        proj.flags.writeable = False
        self.group = group
        self.moduli = moduli
        self.images = [tuple(int(x) for x in row) for row in img]
        self.projection = proj

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def modulus(self) -> int:
        """The last (smallest) modulus, which determinants are reduced by."""
        return self.moduli[-1]

    def __call__(self, g: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.projection[g])

    @classmethod
    def standard(cls, group: FiniteGroup) -> AbelianQuotient:
        """The quotient ``(Z/d_m)^m`` used for catalog abelian groups and bgroup."""
        spec = parse_group_spec(group.spec) if group.spec else None
        if spec is not None and spec.kind in ("cyclic", "abelian"):
            factors = [d for d in spec.params if d > 1] or [1]
            m = len(factors)
            d = factors[-1]
            return cls(group, (d,) * m, [tuple(int(i == j) for j in range(m)) for i in range(m)])
        if spec is not None and spec.kind == "bgroup":
            return cls(group, (8, 8, 8), [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        raise ArgumentError(f"no standard abelian quotient for {group.label}")


def _det_mod(rows: list[list[int]], d: int) -> int:
    # fraction-free Bareiss elimination over the integers
    a = [row[:] for row in rows]
    m = len(a)
    sign, prev = 1, 1
    for k in range(m - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, m) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return (sign * a[m - 1][m - 1]) % d


@dataclass(frozen=True)
class DetInvariant:
    modulus: int
    value: int

    def __str__(self) -> str:
        return f"{self.value} (mod {self.modulus}, up to sign)"


def canonical_residue(r: int, d: int) -> int:
    r %= d
    return min(r, d - r)


def abelianized_matrix(v: GenVector, quotient: AbelianQuotient) -> np.ndarray:
    if quotient.group.fingerprint != v.fingerprint:
        raise ArgumentError("the quotient belongs to a different group")
    if v.n != quotient.rank:
        raise ArgumentError(f"need a {quotient.rank}-vector, got length {v.n}")
    return quotient.projection[list(v.entries)] % quotient.modulus


def det_invariant(v: GenVector, quotient: AbelianQuotient) -> DetInvariant:
    d = quotient.modulus
    mat = abelianized_matrix(v, quotient).tolist()
    return DetInvariant(d, canonical_residue(_det_mod(mat, d), d))


def weak_det_orbit(value: DetInvariant | int, d: int = 8) -> frozenset[int]:
    """Canonical residues reachable by automorphisms, for modulus 8 only.

    An automorphism rescales the determinant by a unit square up to sign;
    every odd square is 1 mod 8, so the orbit is just ``{r, -r}``.
    """
    if d != 8:
        raise UnsupportedError("the weak determinant orbit is only mechanised for modulus 8")
    r = value.value if isinstance(value, DetInvariant) else int(value)
    units = [u for u in range(1, d) if math.gcd(u, d) == 1]
    return frozenset(canonical_residue(s * u * u * r, d) for s in (1, -1) for u in units)


# ------------------------------------------------------------ lower bounds


def _det_keys(quotient: AbelianQuotient, vectors: np.ndarray) -> np.ndarray:
    d = quotient.modulus
    m = quotient.rank
    mats = quotient.projection[vectors] % d  # (count, m, m)
    if m == 1:
        dets = mats[:, 0, 0]
    elif m == 2:
        dets = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    else:
        dets = np.array([_det_mod(mat.tolist(), d) for mat in mats], dtype=np.int64)
    dets %= d
    return np.minimum(dets, d - dets)


def invariant_lower_bound(
    group: FiniteGroup,
    n: int,
    quotient: AbelianQuotient | None = None,
    samples: int | None = None,
    seed: int = 0,
) -> int:
    """Number of distinct invariant values over generating ``n``-vectors.

    Uses the commutator pair when no quotient is given (``n`` must be 2),
    otherwise the determinant.  All vectors are scanned when ``N**n`` is
    within the classification cap and ``samples`` is not given; otherwise
    ``samples`` random vectors (default 20000) are drawn.
    """
    if quotient is None and n != 2:
        raise ArgumentError("the commutator pair needs n = 2; pass a quotient for other lengths")
    if quotient is not None and quotient.rank != n:
        raise ArgumentError(f"quotient rank {quotient.rank} does not match n = {n}")
    N = group.order
    total = N**n
    if samples is None and total <= CLASSIFY_CAP:
        space = _Space(group, n, CLASSIFY_CAP)
        batches = (
            np.stack(space.decode(np.arange(s, min(total, s + (1 << 20)), dtype=np.int64)), axis=1)
            for s in range(0, total, 1 << 20)
        )
    else:
        rng = np.random.default_rng(seed)
        count = samples or 20000
        batches = iter([rng.integers(0, N, size=(count, n))])
    seen: set[int] = set()
    for vecs in batches:
        vecs = vecs[group.generating_flags(vecs)]
        if not len(vecs):
            continue
        if quotient is None:
            keys = _higman_keys(group, vecs[:, 0], vecs[:, 1])
        else:
            keys = _det_keys(quotient, vecs)
        seen.update(np.unique(keys).tolist())
    return len(seen)
