"""Constructors for the named groups and the group-spec mini-language.

Grammar::

    spec := name (":" args)?
    name := cyclic | abelian | dihedral | quaternion | sym | alt | psl2 | bgroup | perm
    args := int ("," int)*            for every name except perm
          | perm ("," perm)*          perm := cycle+ ; cycle := "(" int+ ")"

``dihedral:m`` has order 2m.  Abelian moduli are normalised to invariant
factors ``d_1, ..., d_m`` with ``d_{i+1} | d_i``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd

import numpy as np

from .errors import ArgumentError, CapacityError, ParseError
from .fields import galois_field, prime_power
from .group import MAX_ORDER, FiniteGroup, _prime_factors

KINDS = {
    "cyclic": "cyclic",
    "abelian": "abelian",
    "dihedral": "dihedral",
    "quaternion": "quaternion",
    "sym": "symmetric",
    "alt": "alternating",
    "psl2": "psl2",
    "bgroup": "bgroup",
    "perm": "perm",
}
SHORT = {v: k for k, v in KINDS.items()}

# (x, y, z) in x^a y^b z^c normal form
BGROUP_MODULI = (8, 8, 64)


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: tuple[int, ...] = ()
    perm_generators: tuple[tuple[int, ...], ...] | None = None

    def text(self) -> str:
        name = SHORT[self.kind]
        if self.kind == "perm":
            return name + ":" + ",".join(cycle_notation(p) for p in self.perm_generators)
        if not self.params:
            return name
        return name + ":" + ",".join(str(p) for p in self.params)

    def __str__(self) -> str:
        return self.text()


def cycle_notation(perm: tuple[int, ...]) -> str:
    """1-based cycle notation of a 0-based image tuple; identity is ``()``."""
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        out.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(out) or "()"


def invariant_factors(moduli: list[int]) -> list[int]:
    by_prime: dict[int, list[int]] = {}
    for d in moduli:
        for p, e in _prime_factors(d).items():
            by_prime.setdefault(p, []).append(p**e)
    for v in by_prime.values():
        v.sort(reverse=True)
    m = max((len(v) for v in by_prime.values()), default=0)
    out = []
    for i in range(m):
        out.append(reduce(lambda a, b: a * b, (v[i] for v in by_prime.values() if len(v) > i), 1))
    return out or [1]


# ------------------------------------------------------------------ parsing


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a positive integer", start)
        value = int(self.text[start : self.pos])
        if value <= 0:
            raise ParseError("expected a positive integer", start)
        return value

    def name(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        word = self.text[start : self.pos]
        if word not in KINDS:
            raise ParseError(f"unknown group name {word!r}", start)
        return word

    def at_end(self) -> bool:
        return self.peek() == ""


def _parse_perm(sc: _Scanner) -> list[list[int]]:
    cycles = []
    if sc.peek() != "(":
        raise ParseError("expected '(' starting a cycle", sc.pos)
    while sc.peek() == "(":
        sc.expect("(")
        cyc = []
        while sc.peek() != ")":
            if sc.peek() == "":
                raise ParseError("unterminated cycle", sc.pos)
            if sc.peek() == ",":
                sc.pos += 1
                continue
            cyc.append(sc.integer())
        sc.expect(")")
        if len(set(cyc)) != len(cyc):
            raise ParseError("repeated point in cycle", sc.pos)
        cycles.append(cyc)
    return cycles


def _cycles_to_perm(cycles: list[list[int]], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        # cycles compose left to right: apply earlier cycles first
        step = {a - 1: b - 1 for a, b in zip(cyc, cyc[1:] + cyc[:1])}
        img = [step.get(x, x) for x in img]
    return tuple(img)


def parse_group_spec(text: str) -> GroupSpec:
    sc = _Scanner(text)
    name = sc.name()
    kind = KINDS[name]
    if kind == "perm":
        sc.expect(":")
        raw = [_parse_perm(sc)]
        while sc.peek() == ",":
            sc.pos += 1
            raw.append(_parse_perm(sc))
        if not sc.at_end():
            raise ParseError("trailing characters", sc.pos)
        degree = max(max(c) for cycles in raw for c in cycles if c) if any(
            c for cycles in raw for c in cycles
        ) else 1
        perms = tuple(_cycles_to_perm(cycles, degree) for cycles in raw)
        return GroupSpec(kind, (degree,), perms)

    params: list[int] = []
    arg_pos = sc.pos
    if not sc.at_end():
        sc.expect(":")
        arg_pos = sc.pos
        params.append(sc.integer())
        while sc.peek() == ",":
            sc.pos += 1
            params.append(sc.integer())
        if not sc.at_end():
            raise ParseError("trailing characters", sc.pos)

    def arity(lo: int, hi: int | None) -> None:
        if len(params) < lo or (hi is not None and len(params) > hi):
            want = f"{lo}" if lo == hi else f"at least {lo}"
            raise ParseError(f"{name} takes {want} argument(s), got {len(params)}", arg_pos)

    if kind in ("quaternion", "bgroup"):
        arity(0, 0)
    elif kind == "abelian":
        arity(1, None)
        params = invariant_factors(params)
        if any(params[i] % params[i + 1] for i in range(len(params) - 1)):
            raise ParseError("abelian moduli violate divisibility", arg_pos)
    else:
        arity(1, 1)
    if kind == "dihedral" and params[0] < 2:
        raise ParseError("dihedral parameter must be at least 2", arg_pos)
    if kind == "psl2":
        q = params[0]
        pk = prime_power(q)
        if pk is None:
            raise ParseError(f"{q} is not a prime power", arg_pos)
        if q < 3 or (pk[0] == 2 and q < 4):
            raise ParseError(f"psl2 needs q >= 3 odd or q >= 4 even, got {q}", arg_pos)
    return GroupSpec(kind, tuple(params))


# ------------------------------------------------------------ constructors


def _table_from_perms(perms: list[tuple[int, ...]], gens: list[tuple[int, ...]]) -> np.ndarray:
    """Cayley table of a permutation group; products compose left to right."""
    n = len(perms)
    index = {p: i for i, p in enumerate(perms)}
    arr = np.array(perms, dtype=np.int64)
    right = []
    for s in gens:
        composed = np.asarray(s, dtype=np.int64)[arr]
        right.append(np.array([index[tuple(r)] for r in composed.tolist()], dtype=np.int64))
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    order = [0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for gi, r in enumerate(right):
            y = int(r[x])
            if not seen[y]:
                seen[y] = True
                parent[y], via[y] = x, gi
                order.append(y)
                queue.append(y)
    if not seen.all():
        raise ArgumentError("generators do not reach every listed element")
    mul = np.empty((n, n), dtype=np.uint16)
    mul[:, 0] = np.arange(n)
    for h in order[1:]:
        mul[:, h] = right[via[h]][mul[:, parent[h]]]
    return mul


def _perm_closure(gens: list[tuple[int, ...]], degree: int) -> list[tuple[int, ...]]:
    ident = tuple(range(degree))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple(s[i] for i in x)
            if y not in seen:
                seen.add(y)
                if len(seen) > MAX_ORDER:
                    raise CapacityError(f"permutation group has more than {MAX_ORDER} elements")
                queue.append(y)
    return sorted(seen)


def _perm_group(perms, gens, label, spec) -> FiniteGroup:
    mul = _table_from_perms(perms, gens)
    index = {p: i for i, p in enumerate(perms)}
    names = [cycle_notation(p) for p in perms]
    return FiniteGroup(mul, label, [index[g] for g in gens], names, spec)


def _abelian(moduli: list[int], spec: str) -> FiniteGroup:
    moduli = [d for d in moduli]
    n = reduce(lambda a, b: a * b, moduli, 1)
    if n > MAX_ORDER:
        raise CapacityError(f"group order {n} exceeds the cap of {MAX_ORDER}")
    digits = np.array(list(itertools.product(*[range(d) for d in moduli])), dtype=np.int64)
    digits = digits.reshape(n, len(moduli))
    weights = np.array(
        [reduce(lambda a, b: a * b, moduli[i + 1 :], 1) for i in range(len(moduli))], dtype=np.int64
    )
    summed = (digits[:, None, :] + digits[None, :, :]) % np.array(moduli)
    mul = (summed * weights).sum(axis=2)
    if len(moduli) == 1:
        label = f"C{moduli[0]}"
        names = ["1"] + ["t" if i == 1 else f"t^{i}" for i in range(1, n)]
    else:
        label = "x".join(f"C{d}" for d in moduli)
        names = ["(" + ",".join(str(int(x)) for x in row) + ")" for row in digits]
    gens = [int(w) for w, d in zip(weights, moduli) if d > 1] or [0]
    return FiniteGroup(mul, label, gens, names, spec)


def _dihedral(m: int, spec: str) -> FiniteGroup:
    n = 2 * m
    s = np.arange(n) // m
    r = np.arange(n) % m
    s1, s2 = s[:, None], s[None, :]
    r1, r2 = r[:, None], r[None, :]
    rot = (np.where(s2 == 1, -r1, r1) + r2) % m
    mul = (s1 ^ s2) * m + rot
    names = []
    for i in range(n):
        base = "a" if i >= m else ""
        k = i % m
        rot_name = "" if k == 0 else ("b" if k == 1 else f"b^{k}")
        names.append((base + ("*" if base and rot_name else "") + rot_name) or "1")
    return FiniteGroup(mul, f"D{n}", [m, 1], names, spec)


def _quaternion(spec: str) -> FiniteGroup:
    # units 1, i, j, k as 0..3; element index = 2*unit + (sign bit)
    unit_mul = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }  # (u, v) -> (sign, unit)
    mul = np.zeros((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            sgn, unit = unit_mul[(x // 2, y // 2)]
            mul[x, y] = 2 * unit + (sgn ^ (x % 2) ^ (y % 2))
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return FiniteGroup(mul, "Q8", [2, 4], names, spec)


def _symmetric(n: int, spec: str, alternating: bool) -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))

    def even(p):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inversions % 2 == 0

    if alternating:
        perms = [p for p in perms if even(p)]
        gens = []
        for k in range(2, n):
            g = list(range(n))
            g[0], g[1], g[k] = 1, k, 0
            gens.append(tuple(g))
        label = f"A{n}"
    else:
        gens = []
        if n >= 2:
            t = list(range(n))
            t[0], t[1] = 1, 0
            gens = [tuple(t), tuple(list(range(1, n)) + [0])]
        label = f"S{n}"
    if len(perms) > MAX_ORDER:
        raise CapacityError(f"group order {len(perms)} exceeds the cap of {MAX_ORDER}")
    if not gens:
        gens = [tuple(range(n))]
    return _perm_group(perms, gens, label, spec)


def bgroup_normal_form(a1: int, b1: int, c1: int, a2: int, b2: int, c2: int) -> tuple[int, int, int]:
    """Product of ``x^a1 y^b1 z^c1`` and ``x^a2 y^b2 z^c2`` in normal form."""
    return ((a1 + a2) % 8, (b1 + b2) % 8, (c1 + c2 - 8 * a2 * b1) % 64)


def bgroup_inverse(a: int, b: int, c: int) -> tuple[int, int, int]:
    return ((-a) % 8, (-b) % 8, (-c - 8 * a * b) % 64)


def bgroup_index(a: int, b: int, c: int) -> int:
    return ((a % 8) * 8 + (b % 8)) * 64 + (c % 64)


def _bgroup(spec: str) -> FiniteGroup:
    idx = np.arange(4096)
    a, b, c = idx // 512, (idx // 64) % 8, idx % 64
    a1, b1, c1 = a[:, None], b[:, None], c[:, None]
    a2, b2, c2 = a[None, :], b[None, :], c[None, :]
    mul = (((a1 + a2) % 8) * 8 + (b1 + b2) % 8) * 64 + (c1 + c2 - 8 * a2 * b1) % 64
    names = [f"({int(x)},{int(y)},{int(z)})" for x, y, z in zip(a, b, c)]
    gens = [bgroup_index(1, 0, 0), bgroup_index(0, 1, 0), bgroup_index(0, 0, 1)]
    return FiniteGroup(mul, "bgroup", gens, names, spec)


def psl2_order(q: int) -> int:
    return q * (q * q - 1) // gcd(2, q - 1)


def build_psl2(q: int) -> FiniteGroup:
    """PSL(2, q) acting on the projective line; point 0 is infinity, 1+v is v."""
    pk = prime_power(q)
    if pk is None:
        raise ArgumentError(f"{q} is not a prime power")
    order = psl2_order(q)
    if order > MAX_ORDER:
        raise CapacityError(f"PSL(2,{q}) has order {order} > {MAX_ORDER}")
    F = galois_field(q)
    add, mul, inv, neg = F.add_table, F.mul_table, F.inv_table, F.neg_table
    dets = F.squares() if q % 2 else list(range(1, q))
    INF = -1

    def apply(a, b, c, d, x):
        if x == INF:
            return INF if c == 0 else int(mul[a, inv[c]])
        num = int(add[mul[a, x], b])
        den = int(add[mul[c, x], d])
        return INF if den == 0 else int(mul[num, inv[den]])

    def perm(a, b, c, d):
        pts = [INF] + list(range(q))
        return tuple(apply(a, b, c, d, x) + 1 for x in pts)

    maps = set()
    for a in dets:
        for b in range(q):
            maps.add(perm(a, b, 0, 1))
    for a in range(q):
        for d in range(q):
            ad = int(mul[a, d])
            for delta in dets:
                maps.add(perm(a, int(add[ad, neg[delta]]), 1, d))
    perms = sorted(maps)
    if len(perms) != order:
        raise RuntimeError(f"expected {order} Mobius maps, found {len(perms)}")
    w = F.primitive_element()
    lam = int(mul[w, w]) if q % 2 else w
    gens = [perm(1, 1, 0, 1), perm(lam, 0, 0, 1), perm(0, int(neg[1]), 1, 0)]
    g = _perm_group(perms, gens, f"PSL(2,{q})", f"psl2:{q}")
    return g


@lru_cache(maxsize=64)
def _build(text: str) -> FiniteGroup:
    spec = parse_group_spec(text)
    if spec.kind == "cyclic":
        return _abelian([spec.params[0]], text)
    if spec.kind == "abelian":
        return _abelian(list(spec.params), text)
    if spec.kind == "dihedral":
        if 2 * spec.params[0] > MAX_ORDER:
            raise CapacityError(f"group order {2 * spec.params[0]} exceeds the cap of {MAX_ORDER}")
        return _dihedral(spec.params[0], text)
    if spec.kind == "quaternion":
        return _quaternion(text)
    if spec.kind in ("symmetric", "alternating"):
        n = spec.params[0]
        if n > 8:
            raise CapacityError(f"degree {n} gives order beyond {MAX_ORDER}")
        return _symmetric(n, text, spec.kind == "alternating")
    if spec.kind == "psl2":
        return build_psl2(spec.params[0])
    if spec.kind == "bgroup":
        return _bgroup(text)
    degree = spec.params[0]
    perms = _perm_closure(list(spec.perm_generators), degree)
    return _perm_group(perms, list(spec.perm_generators), f"<{text}>", text)


def build_group(spec: GroupSpec | str) -> FiniteGroup:
    """Build (and memoise) the concrete group for a spec or spec text."""
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    return _build(spec.text())
