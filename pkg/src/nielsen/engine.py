"""Nielsen moves, orbit enumeration and class partitions of generating vectors.

States are addressed two ways.  The public *code* packs the entries with
``ceil(log2 N)`` bits each, first entry most significant.  Internally the
BFS works with the mixed-radix *rank* ``sum e_j * N**(n-1-j)``, which is a
dense index into the visited structure.  Both orders agree with the
lexicographic order on entries, so "smallest code" and "smallest rank"
pick the same class representative.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ArgumentError, CapacityError
from .group import FiniteGroup

MAX_LENGTH = 8
CLASSIFY_CAP = 2**27
ORBIT_CAP = 2**28
CHUNK = 1 << 18
_SCAN = 1 << 22


class Variant(str, enum.Enum):
    RIGHT_MUL = "RightMul"
    LEFT_MUL = "LeftMul"
    SWAP = "Swap"
    INVERT = "Invert"


@dataclass(frozen=True)
class NielsenMove:
    """One elementary move.

    ``RightMul(j, k, s)`` replaces ``t_j`` by ``t_j * t_k**s``;
    ``LeftMul(j, k, s)`` replaces it by ``t_k**s * t_j``.
    """

    variant: Variant
    j: int
    k: int | None = None
    sign: int | None = None

    def __post_init__(self):
        v = Variant(self.variant)
        object.__setattr__(self, "variant", v)
        if v in (Variant.RIGHT_MUL, Variant.LEFT_MUL):
            if self.k is None or self.sign not in (1, -1):
                raise ArgumentError(f"{v.value} needs k and a sign of +1/-1")
            if self.j == self.k:
                raise ArgumentError("a move needs two distinct positions")
        elif v is Variant.SWAP:
            if self.k is None or self.sign is not None:
                raise ArgumentError("Swap takes two positions and no sign")
            if self.j == self.k:
                raise ArgumentError("a move needs two distinct positions")
        elif self.k is not None or self.sign is not None:
            raise ArgumentError("Invert takes a single position")
        if self.j < 0 or (self.k is not None and self.k < 0):
            raise ArgumentError("positions must be non-negative")

    def inverse(self) -> NielsenMove:
        if self.sign is None:
            return self
        return NielsenMove(self.variant, self.j, self.k, -self.sign)

    def check(self, n: int) -> None:
        if self.j >= n or (self.k is not None and self.k >= n):
            raise ArgumentError(f"move {self} has a position outside 0..{n - 1}")

    def to_json(self) -> dict:
        d = {"variant": self.variant.value, "j": self.j}
        if self.k is not None:
            d["k"] = self.k
        if self.sign is not None:
            d["sign"] = self.sign
        return d

    @classmethod
    def from_json(cls, d: dict) -> NielsenMove:
        return cls(Variant(d["variant"]), int(d["j"]), d.get("k"), d.get("sign"))

    def __str__(self) -> str:
        if self.variant is Variant.INVERT:
            return f"Invert({self.j})"
        if self.variant is Variant.SWAP:
            return f"Swap({self.j},{self.k})"
        return f"{self.variant.value}({self.j},{self.k},{self.sign:+d})"


def RightMul(j: int, k: int, sign: int = 1) -> NielsenMove:
    return NielsenMove(Variant.RIGHT_MUL, j, k, sign)


def LeftMul(j: int, k: int, sign: int = 1) -> NielsenMove:
    return NielsenMove(Variant.LEFT_MUL, j, k, sign)


def Swap(j: int, k: int) -> NielsenMove:
    return NielsenMove(Variant.SWAP, min(j, k), max(j, k))


def Invert(j: int) -> NielsenMove:
    return NielsenMove(Variant.INVERT, j)


@lru_cache(maxsize=None)
def all_moves(n: int) -> tuple[NielsenMove, ...]:
    """Every elementary move on length-``n`` vectors, in a fixed order."""
    moves = []
    for j in range(n):
        for k in range(n):
            if j != k:
                moves += [RightMul(j, k, 1), RightMul(j, k, -1), LeftMul(j, k, 1), LeftMul(j, k, -1)]
    moves += [Swap(j, k) for j in range(n) for k in range(j + 1, n)]
    moves += [Invert(j) for j in range(n)]
    return tuple(moves)


class GenVector:
    """A fixed-length tuple of element indices of one group."""

    __slots__ = ("group", "entries")

    def __init__(self, group: FiniteGroup, entries: Iterable[int]):
        entries = tuple(int(e) for e in entries)
        if not 1 <= len(entries) <= MAX_LENGTH:
            raise CapacityError(f"vector length must be 1..{MAX_LENGTH}, got {len(entries)}")
        for e in entries:
            if not 0 <= e < group.order:
                raise ArgumentError(f"entry {e} out of range for a group of order {group.order}")
        self.group = group
        self.entries = entries

    @property
    def fingerprint(self) -> int:
        return self.group.fingerprint

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GenVector)
            and other.fingerprint == self.fingerprint
            and other.entries == self.entries
        )

    def __hash__(self) -> int:
        return hash((self.fingerprint, self.entries))

    def __repr__(self) -> str:
        return f"GenVector({self.group.label}, {self.entries})"

    def is_generating(self) -> bool:
        return self.group.is_generating(self.entries)

    def names(self) -> list[str]:
        return [self.group.name(e) for e in self.entries]


def is_generating(v: GenVector) -> bool:
    return v.is_generating()


def apply_move(v: GenVector, m: NielsenMove) -> GenVector:
    m.check(v.n)
    g = v.group
    t = list(v.entries)
    if m.variant is Variant.SWAP:
        t[m.j], t[m.k] = t[m.k], t[m.j]
    elif m.variant is Variant.INVERT:
        t[m.j] = int(g.inv[t[m.j]])
    else:
        x = t[m.k] if m.sign > 0 else int(g.inv[t[m.k]])
        t[m.j] = int(g.mul[t[m.j], x]) if m.variant is Variant.RIGHT_MUL else int(g.mul[x, t[m.j]])
    return GenVector(g, t)


def neighbors(v: GenVector) -> list[GenVector]:
    """Distinct vectors one move away (may include ``v`` itself)."""
    seen: dict[GenVector, None] = {}
    for m in all_moves(v.n):
        seen.setdefault(apply_move(v, m), None)
    return list(seen)


def stabilize(v: GenVector, m: int) -> GenVector:
    """Append ``m`` identity entries."""
    if m < 0:
        raise ArgumentError("stabilization count must be non-negative")
    if v.n + m > MAX_LENGTH:
        raise CapacityError(f"stabilized length {v.n + m} exceeds {MAX_LENGTH}")
    return GenVector(v.group, v.entries + (0,) * m)


# ------------------------------------------------------------------ packing


def bits_per_entry(order: int) -> int:
    return max(1, (order - 1).bit_length())


def pack(v: GenVector) -> int:
    b = bits_per_entry(v.group.order)
    if b * v.n > 64:
        raise CapacityError(f"{v.n} entries of {b} bits do not fit in 64 bits")
    code = 0
    for e in v.entries:
        code = (code << b) | e
    return code


def unpack(code: int, group: FiniteGroup, n: int) -> GenVector:
    b = bits_per_entry(group.order)
    if b * n > 64:
        raise CapacityError(f"{n} entries of {b} bits do not fit in 64 bits")
    if not 0 <= code < 1 << (b * n):
        raise ArgumentError(f"code {code} out of range")
    mask = (1 << b) - 1
    return GenVector(group, [(code >> (b * (n - 1 - j))) & mask for j in range(n)])


# ------------------------------------------------------------------- traces


@dataclass(frozen=True)
class MoveTrace:
    """A replayable certificate that ``start`` and ``end`` are equivalent."""

    start: GenVector
    moves: tuple[NielsenMove, ...]
    end: GenVector

    def replay(self) -> GenVector:
        v = self.start
        for m in self.moves:
            v = apply_move(v, m)
        return v

    def is_valid(self) -> bool:
        try:
            return self.replay() == self.end
        except ArgumentError:
            return False

    def inverse(self) -> MoveTrace:
        return MoveTrace(self.end, tuple(m.inverse() for m in reversed(self.moves)), self.start)

    def then(self, other: MoveTrace) -> MoveTrace:
        if other.start != self.end:
            raise ArgumentError("traces do not meet")
        return MoveTrace(self.start, self.moves + other.moves, other.end)

    def __len__(self) -> int:
        return len(self.moves)

    def to_json(self) -> dict:
        return {
            "group": self.start.group.spec,
            "fingerprint": f"{self.start.fingerprint:016x}",
            "start": list(self.start.entries),
            "moves": [m.to_json() for m in self.moves],
            "end": list(self.end.entries),
        }

    @classmethod
    def from_json(cls, d: dict, group: FiniteGroup) -> MoveTrace:
        return cls(
            GenVector(group, d["start"]),
            tuple(NielsenMove.from_json(m) for m in d["moves"]),
            GenVector(group, d["end"]),
        )


class _TraceBuilder:
    """Collects moves while mutating a running vector."""

    def __init__(self, v: GenVector):
        self.start = v
        self.current = v
        self.moves: list[NielsenMove] = []

    def apply(self, m: NielsenMove) -> GenVector:
        self.current = apply_move(self.current, m)
        self.moves.append(m)
        return self.current

    def extend(self, trace: MoveTrace) -> None:
        if trace.start != self.current:
            raise ArgumentError("trace does not start at the running vector")
        for m in trace.moves:
            self.apply(m)

    def build(self) -> MoveTrace:
        return MoveTrace(self.start, tuple(self.moves), self.current)


# ------------------------------------------------------------ state space


class _Space:
    def __init__(self, group: FiniteGroup, n: int, cap: int):
        if not 1 <= n <= MAX_LENGTH:
            raise CapacityError(f"vector length must be 1..{MAX_LENGTH}, got {n}")
        if bits_per_entry(group.order) * n > 64:
            raise CapacityError("packed code does not fit in 64 bits")
        self.group = group
        self.N = group.order
        self.n = n
        self.total = self.N**n
        if self.total > cap:
            raise CapacityError(
                f"{self.N}^{n} = {self.total} states exceeds the cap of {cap}; "
                "use invariant_lower_bound for a lower bound on the class count"
            )
        self.P = np.array([self.N ** (n - 1 - j) for j in range(n)], dtype=np.int64)
        self.mul = group.mul.astype(np.int64).ravel()
        self.inv = group.inv
        self.moves = all_moves(n)

    def rank(self, entries: Sequence[int]) -> int:
        return int(sum(int(e) * int(p) for e, p in zip(entries, self.P)))

    def entries(self, rank: int) -> tuple[int, ...]:
        return tuple((int(rank) // int(p)) % self.N for p in self.P)

    def decode(self, ranks: np.ndarray) -> list[np.ndarray]:
        return [(ranks // p) % self.N for p in self.P]

    def codes(self, ranks: np.ndarray) -> np.ndarray:
        b = bits_per_entry(self.N)
        out = np.zeros(ranks.shape, dtype=np.uint64)
        for col in self.decode(ranks):
            out = (out << np.uint64(b)) | col.astype(np.uint64)
        return out

    def ranks_of_codes(self, codes: np.ndarray) -> np.ndarray:
        b = bits_per_entry(self.N)
        codes = np.asarray(codes, dtype=np.uint64)
        mask = np.uint64((1 << b) - 1)
        out = np.zeros(codes.shape, dtype=np.int64)
        for j in range(self.n):
            col = (codes >> np.uint64(b * (self.n - 1 - j))) & mask
            out += col.astype(np.int64) * self.P[j]
        return out

    def expand(self, ranks: np.ndarray) -> list[np.ndarray]:
        N, P, mul, inv = self.N, self.P, self.mul, self.inv
        cols = self.decode(ranks)
        icols = [inv[c] for c in cols]
        out = []
        for m in self.moves:
            j = m.j
            if m.variant is Variant.SWAP:
                k = m.k
                out.append(ranks + (cols[k] - cols[j]) * (P[j] - P[k]))
            elif m.variant is Variant.INVERT:
                out.append(ranks + (icols[j] - cols[j]) * P[j])
            else:
                x = cols[m.k] if m.sign > 0 else icols[m.k]
                if m.variant is Variant.RIGHT_MUL:
                    prod = mul[cols[j] * N + x]
                else:
                    prod = mul[x * N + cols[j]]
                out.append(ranks + (prod - cols[j]) * P[j])
        return out

    def step(self, rank: int, m: NielsenMove) -> int:
        v = apply_move(GenVector(self.group, self.entries(rank)), m)
        return self.rank(v.entries)


def _bfs(
    space: _Space,
    seed: int,
    is_new: Callable[[np.ndarray], np.ndarray],
    mark: Callable[[np.ndarray, int], None],
    workers: int = 1,
    stop: Callable[[np.ndarray], int | None] | None = None,
) -> tuple[int, int | None]:
    """Level-synchronous BFS from ``seed``.

    Workers expand fixed-size chunks of the frontier and pre-filter against
    the visited structure; the calling thread then merges chunk results in
    chunk order, so the visited set, the discovery order and the recorded
    moves do not depend on the worker count.  Returns ``(states, hit)``
    where ``hit`` is the first rank accepted by ``stop``.
    """
    start = np.array([seed], dtype=np.int64)
    mark(start, -1)
    count = 1
    if stop is not None and (i := stop(start)) is not None:
        return count, seed
    frontier = start

    def work(chunk: np.ndarray) -> list[np.ndarray]:
        return [c[is_new(c)] for c in space.expand(chunk)]

    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier.size:
            chunks = [frontier[i : i + CHUNK] for i in range(0, frontier.size, CHUNK)]
            results = pool.map(work, chunks) if pool else map(work, chunks)
            parts = []
            for per_move in results:
                for mid, cand in enumerate(per_move):
                    if not cand.size:
                        continue
                    cand = np.unique(cand)
                    cand = cand[is_new(cand)]
                    if cand.size:
                        mark(cand, mid)
                        parts.append(cand)
            frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
            count += frontier.size
            if stop is not None and frontier.size:
                i = stop(frontier)
                if i is not None:
                    return count, int(frontier[i])
    finally:
        if pool:
            pool.shutdown()
    return count, None


class _Visited:
    """Dense flag array when the space is small enough, else sorted runs."""

    def __init__(self, space: _Space, trace: bool):
        self.dense = space.total <= (CLASSIFY_CAP if trace else ORBIT_CAP)
        self.trace = trace
        if self.dense:
            self.flags = np.zeros(space.total, dtype=bool)
            self.via = np.full(space.total, -1, dtype=np.int16) if trace else None
        else:
            self.runs: list[np.ndarray] = []
            self.via_map: dict[int, int] = {}

    def is_new(self, cand: np.ndarray) -> np.ndarray:
        if self.dense:
            return ~self.flags[cand]
        out = np.ones(cand.shape, dtype=bool)
        for run in self.runs:
            pos = np.searchsorted(run, cand)
            pos[pos == run.size] = 0
            out &= run[pos] != cand
        return out

    def mark(self, cand: np.ndarray, mid: int) -> None:
        if self.dense:
            self.flags[cand] = True
            if self.trace:
                self.via[cand] = mid
            return
        self.runs.append(np.sort(cand))
        if len(self.runs) > 16:
            self.runs = [np.concatenate(self.runs)]
            self.runs[0].sort()
        if self.trace:
            self.via_map.update(dict.fromkeys(cand.tolist(), mid))

    def contains(self, rank: int) -> bool:
        return not bool(self.is_new(np.array([rank], dtype=np.int64))[0])

    def move_to(self, rank: int) -> int:
        return int(self.via[rank]) if self.dense else self.via_map[rank]

    def ranks(self) -> np.ndarray:
        if self.dense:
            return np.flatnonzero(self.flags)
        if not self.runs:
            return np.empty(0, dtype=np.int64)
        return np.sort(np.concatenate(self.runs))


def _path(space: _Space, visited: _Visited, seed: int, target: int) -> tuple[NielsenMove, ...]:
    moves = []
    r = target
    while r != seed:
        m = space.moves[visited.move_to(r)]
        moves.append(m)
        r = space.step(r, m.inverse())
    return tuple(reversed(moves))


@dataclass
class Orbit:
    """The Nielsen orbit of ``start``."""

    start: GenVector
    size: int
    _space: _Space = field(repr=False)
    _visited: _Visited = field(repr=False)

    def codes(self) -> np.ndarray:
        """Sorted packed codes of every orbit member."""
        return self._space.codes(self._visited.ranks())

    def __contains__(self, w: GenVector) -> bool:
        return w.n == self.start.n and w.fingerprint == self.start.fingerprint and self._visited.contains(
            self._space.rank(w.entries)
        )

    def trace_to(self, w: GenVector) -> MoveTrace:
        if not self._visited.trace:
            raise ArgumentError("orbit was enumerated without trace support")
        if w not in self:
            raise ArgumentError(f"{w} is not in the orbit")
        seed = self._space.rank(self.start.entries)
        moves = _path(self._space, self._visited, seed, self._space.rank(w.entries))
        return MoveTrace(self.start, moves, w)


def _require_generating(*vs: GenVector) -> None:
    for v in vs:
        if not v.is_generating():
            raise ArgumentError(f"{v} does not generate the group")


def orbit(v: GenVector, trace: bool = False, workers: int = 1) -> Orbit:
    """BFS closure of ``v`` under all Nielsen moves."""
    _require_generating(v)
    space = _Space(v.group, v.n, ORBIT_CAP)
    visited = _Visited(space, trace)
    size, _ = _bfs(space, space.rank(v.entries), visited.is_new, visited.mark, workers)
    return Orbit(v, size, space, visited)


def are_equivalent(
    v: GenVector, w: GenVector, trace: bool = False, workers: int = 1
) -> tuple[bool, MoveTrace | None]:
    if v.fingerprint != w.fingerprint or v.n != w.n:
        raise ArgumentError("vectors must belong to the same group and have the same length")
    _require_generating(v, w)
    if v == w:
        return True, (MoveTrace(v, (), w) if trace else None)
    space = _Space(v.group, v.n, ORBIT_CAP)
    visited = _Visited(space, trace)
    target = space.rank(w.entries)
    seed = space.rank(v.entries)

    def stop(frontier: np.ndarray) -> int | None:
        hit = np.flatnonzero(frontier == target)
        return int(hit[0]) if hit.size else None

    _, hit = _bfs(space, seed, visited.is_new, visited.mark, workers, stop)
    if hit is None:
        return False, None
    return True, (MoveTrace(v, _path(space, visited, seed, target), w) if trace else None)


def is_redundant(v: GenVector, trace: bool = False, workers: int = 1) -> tuple[bool, MoveTrace | None]:
    """Whether the orbit of ``v`` contains a vector with an identity entry."""
    _require_generating(v)
    space = _Space(v.group, v.n, ORBIT_CAP)
    visited = _Visited(space, trace)
    seed = space.rank(v.entries)

    def stop(frontier: np.ndarray) -> int | None:
        has_one = np.zeros(frontier.shape, dtype=bool)
        for col in space.decode(frontier):
            has_one |= col == 0
        hit = np.flatnonzero(has_one)
        return int(hit[0]) if hit.size else None

    _, hit = _bfs(space, seed, visited.is_new, visited.mark, workers, stop)
    if hit is None:
        return False, None
    if not trace:
        return True, None
    end = GenVector(v.group, space.entries(hit))
    return True, MoveTrace(v, _path(space, visited, seed, hit), end)


# --------------------------------------------------------------- partitions


@dataclass(frozen=True)
class OrbitPartition:
    """Nielsen (or weak Nielsen) classes of all generating ``n``-vectors.

    ``codes[i]`` is the packed code of the lexicographically smallest
    vector of class ``i``; classes are sorted by it.
    """

    fingerprint: int
    n: int
    mode: str
    codes: tuple[int, ...]
    sizes: tuple[int, ...]
    total_generating: int
    group: FiniteGroup | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def class_count(self) -> int:
        return len(self.codes)

    @property
    def classes(self) -> list[tuple[GenVector, int]]:
        return [(unpack(c, self.group, self.n), s) for c, s in zip(self.codes, self.sizes)]

    def representatives(self) -> list[GenVector]:
        return [unpack(c, self.group, self.n) for c in self.codes]

    def to_json(self) -> dict:
        return {
            "group": self.group.spec if self.group is not None else "",
            "label": self.group.label if self.group is not None else "",
            "fingerprint": f"{self.fingerprint:016x}",
            "n": self.n,
            "mode": self.mode,
            "total_generating": self.total_generating,
            "class_count": self.class_count,
            "classes": [
                {"representative": list(unpack(c, self.group, self.n).entries), "code": c, "size": s}
                for c, s in zip(self.codes, self.sizes)
            ],
        }


def generating_mask(group: FiniteGroup, n: int, cap: int = CLASSIFY_CAP) -> np.ndarray:
    """Flags over all ranks: does the ``n``-vector of that rank generate?"""
    space = _Space(group, n, cap)
    out = np.zeros(space.total, dtype=bool)
    if n < group.mu_lower_bound:
        return out
    for start in range(0, space.total, _SCAN):
        ranks = np.arange(start, min(space.total, start + _SCAN), dtype=np.int64)
        out[start : start + ranks.size] = group.generating_flags(np.stack(space.decode(ranks), axis=1))
    return out


@dataclass
class _Classified:
    partition: OrbitPartition
    labels: np.ndarray | None
    space: _Space

    def class_of(self, entries: Sequence[int]) -> int:
        return int(self.labels[self.space.rank(entries)])


_classify_cache: dict[tuple[int, int], _Classified] = {}
_CACHE_STATES = 2**24


def _classify(group: FiniteGroup, n: int, workers: int = 1, labels_needed: bool = False) -> _Classified:
    # large label arrays are dropped from the cache; only the partition stays
    key = (group.fingerprint, n)
    hit = _classify_cache.get(key)
    if hit is not None and (hit.labels is not None or not labels_needed):
        return hit
    space = _Space(group, n, CLASSIFY_CAP)
    gen = generating_mask(group, n)
    total = int(gen.sum())
    labels = np.where(gen, -1, -2).astype(np.int32)
    del gen
    codes, sizes = [], []
    pos = 0
    while True:
        seed = None
        while pos < space.total:
            hits = np.flatnonzero(labels[pos : pos + _SCAN] == -1)
            if hits.size:
                seed = pos + int(hits[0])
                break
            pos += _SCAN
        if seed is None:
            break
        cid = len(codes)

        def is_new(c):
            return labels[c] == -1

        def mark(c, mid, cid=cid):
            labels[c] = cid

        size, _ = _bfs(space, seed, is_new, mark, workers)
        codes.append(int(space.codes(np.array([seed]))[0]))
        sizes.append(size)
        pos = seed + 1
    part = OrbitPartition(group.fingerprint, n, "nielsen", tuple(codes), tuple(sizes), total, group)
    result = _Classified(part, labels, space)
    if len(_classify_cache) >= 32:
        _classify_cache.pop(next(iter(_classify_cache)))
    _classify_cache[key] = result if space.total <= _CACHE_STATES else _Classified(part, None, space)
    return result


def classify(group: FiniteGroup, n: int, workers: int = 1) -> OrbitPartition:
    """Partition all generating ``n``-vectors into Nielsen classes."""
    return _classify(group, n, workers).partition


def weak_classify(group: FiniteGroup, n: int, workers: int = 1) -> OrbitPartition:
    """Merge Nielsen classes that differ by an automorphism applied entrywise."""
    auts = group.automorphism_array()
    cl = _classify(group, n, workers, labels_needed=True)
    part = cl.partition
    parent = list(range(part.class_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cid, code in enumerate(part.codes):
        rep = np.array(unpack(code, group, n).entries, dtype=np.int64)
        images = auts[:, rep]
        ranks = images @ cl.space.P
        for other in np.unique(cl.labels[ranks]):
            a, b = find(cid), find(int(other))
            if a != b:
                parent[max(a, b)] = min(a, b)
    merged: dict[int, list[int]] = {}
    for cid in range(part.class_count):
        merged.setdefault(find(cid), []).append(cid)
    classes = sorted(
        (min(part.codes[c] for c in members), sum(part.sizes[c] for c in members))
        for members in merged.values()
    )
    return OrbitPartition(
        group.fingerprint,
        n,
        "weak",
        tuple(c for c, _ in classes),
        tuple(s for _, s in classes),
        part.total_generating,
        group,
    )


def class_index(group: FiniteGroup, v: GenVector, workers: int = 1) -> int:
    """Position of ``v``'s Nielsen class in ``classify(group, v.n)``."""
    cl = _classify(group, v.n, workers, labels_needed=True)
    label = cl.class_of(v.entries)
    if label < 0:
        raise ArgumentError(f"{v} does not generate the group")
    return label


def clear_cache() -> None:
    _classify_cache.clear()
