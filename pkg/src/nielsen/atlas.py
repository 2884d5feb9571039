"""Genus bookkeeping for free actions on handlebodies, and the claims report.

A free action of ``G`` on a handlebody of genus ``g`` corresponds to a
generating ``n``-vector with ``g = 1 + |G| (n - 1)``; equivalence classes of
actions are Nielsen classes and weak classes are weak Nielsen classes.
"""
from __future__ import annotations

import io
import itertools
import resource
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .catalog import bgroup_index, build_group, build_psl2
from .engine import (
    CLASSIFY_CAP,
    MAX_LENGTH,
    GenVector,
    _classify,
    _classify_cache,
    all_moves,
    apply_move,
    are_equivalent,
    classify,
    neighbors,
    orbit,
    stabilize,
    unpack,
    weak_classify,
)
from .errors import ArgumentError, CapacityError, NoActionError
from .group import FiniteGroup
from .invariants import (
    AbelianQuotient,
    det_invariant,
    euler_phi,
    invariant_lower_bound,
    weak_det_orbit,
)
from .persistence import load_partition, save_partition
from .solvable import is_solvable, stabilization_equivalence, supraminimal_reduce


def psi(group: FiniteGroup) -> int:
    """Minimal genus of a handlebody with a free ``G``-action."""
    return 1 + group.order * (group.mu() - 1)


def genus_for_n(group: FiniteGroup, n: int) -> int:
    if n < 1:
        raise ArgumentError("n must be at least 1")
    return 1 + group.order * (n - 1)


def n_for_genus(group: FiniteGroup, genus: int) -> int:
    if genus < 1:
        raise ArgumentError("genus must be at least 1")
    q, r = divmod(genus - 1, group.order)
    if r:
        raise NoActionError(
            f"no free action of {group.label} exists at genus {genus}: "
            f"{genus - 1} is not divisible by {group.order}"
        )
    n = q + 1
    if n < group.mu():
        raise NoActionError(
            f"no free action of {group.label} exists at genus {genus}: "
            f"it needs at least {group.mu()} generators"
        )
    return n


@dataclass(frozen=True)
class ClassCount:
    """A class count, exact or a lower bound, or ``None`` when unavailable."""

    value: int | None
    exact: bool
    method: str = "orbit enumeration"

    def __str__(self) -> str:
        if self.value is None:
            return "n/a"
        return str(self.value) if self.exact else f">={self.value}"


def _weak_lower_bound(group: FiniteGroup, n: int, quotient: AbelianQuotient | None) -> int:
    if quotient is None or quotient.modulus != 8:
        return 1
    rng = np.random.default_rng(0)
    orbits = set()
    vecs = rng.integers(0, group.order, size=(20000, n))
    vecs = vecs[group.generating_flags(vecs)]
    for row in vecs[:2000]:
        orbits.add(weak_det_orbit(det_invariant(GenVector(group, row), quotient)))
    return max(1, len(orbits))


def action_class_counts(group: FiniteGroup, k: int, workers: int = 1) -> tuple[ClassCount, ClassCount]:
    """``(e(k), w(k))`` at genus ``1 + |G| (mu + k - 1)``."""
    if k < 0:
        raise ArgumentError("k must be non-negative")
    n = group.mu() + k
    genus = genus_for_n(group, n)
    try:
        e = ClassCount(len(classify(group, n, workers)), True)
    except CapacityError as exc:
        quotient = None
        try:
            quotient = AbelianQuotient.standard(group)
        except ArgumentError:
            pass
        if quotient is not None and quotient.rank == n:
            e = ClassCount(invariant_lower_bound(group, n, quotient), False, "determinant invariant")
            w = ClassCount(_weak_lower_bound(group, n, quotient), False, "weak determinant orbit")
            return e, w
        if n == 2:
            e = ClassCount(invariant_lower_bound(group, 2), False, "commutator pair invariant")
            return e, ClassCount(1, False, "trivial bound")
        raise CapacityError(f"genus {genus} (n = {n}): {exc}") from exc
    try:
        w = ClassCount(len(weak_classify(group, n, workers)), True)
    except CapacityError:
        w = ClassCount(1, False, "trivial bound")
    return e, w


def stabilization_map(group: FiniteGroup, n: int, workers: int = 1) -> list[int]:
    """Entry ``i``: the class at ``n + 1`` containing the stabilized ``i``-th representative."""
    if n + 1 > MAX_LENGTH:
        raise CapacityError(f"n + 1 = {n + 1} exceeds {MAX_LENGTH}")
    low = classify(group, n, workers)
    high = _classify(group, n + 1, workers, labels_needed=True)
    return [high.class_of(stabilize(r, 1).entries) for r in low.representatives()]


@dataclass
class GenusRow:
    k: int
    n: int
    genus: int
    e: ClassCount
    w: ClassCount
    note: str = ""


@dataclass
class GenusRecord:
    label: str
    spec: str
    fingerprint: int
    order: int
    mu: int
    ell: int | None
    psi: int
    rows: list[GenusRow] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "group": self.label,
            "spec": self.spec,
            "fingerprint": f"{self.fingerprint:016x}",
            "order": self.order,
            "mu": self.mu,
            "ell": self.ell,
            "psi": self.psi,
            "rows": [
                {
                    "k": r.k,
                    "n": r.n,
                    "genus": r.genus,
                    "e": r.e.value,
                    "w": r.w.value,
                    "e_exact": r.e.exact,
                    "w_exact": r.w.exact,
                    "e_method": r.e.method,
                    "w_method": r.w.method,
                    "note": r.note,
                }
                for r in self.rows
            ],
        }


def genus_record(group: FiniteGroup, ks: Iterable[int] | None = None, workers: int = 1) -> GenusRecord:
    """Class counts for a range of ``k`` (default ``0..min(2, ell - mu + 1)``)."""
    mu = group.mu()
    try:
        ell = group.ell()
    except CapacityError:
        ell = None
    if ks is None:
        ks = range(0, (min(2, ell - mu + 1) if ell is not None else 0) + 1)
    rec = GenusRecord(group.label, group.spec, group.fingerprint, group.order, mu, ell, psi(group))
    for k in ks:
        n = mu + k
        g = genus_for_n(group, n)
        try:
            e, w = action_class_counts(group, k, workers)
            note = ""
        except CapacityError as exc:
            e = w = ClassCount(None, False, "cap exceeded")
            note = str(exc)
        rec.rows.append(GenusRow(k, n, g, e, w, note))
    return rec


# --------------------------------------------------------------- claims


@dataclass
class ClaimResult:
    number: int
    title: str
    statement: str
    status: str  # pass | fail | skipped | error
    seconds: float = 0.0
    limit: float | None = None
    checks: list[tuple[str, bool]] = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "statement": self.statement,
            "status": self.status,
            "seconds": round(self.seconds, 3),
            "limit_seconds": self.limit,
            "checks": [{"check": c, "ok": ok} for c, ok in self.checks],
            "detail": self.detail,
        }


class _Checks:
    def __init__(self):
        self.items: list[tuple[str, bool]] = []
        self.notes: list[str] = []

    def __call__(self, text: str, ok) -> bool:
        self.items.append((text, bool(ok)))
        return bool(ok)

    def note(self, text: str) -> None:
        self.notes.append(text)


def _random_generating(group: FiniteGroup, n: int, rng: np.random.Generator, count: int) -> list[GenVector]:
    out: list[GenVector] = []
    while len(out) < count:
        vecs = rng.integers(0, group.order, size=(max(64, 4 * count), n))
        for row in vecs[group.generating_flags(vecs)]:
            out.append(GenVector(group, row))
            if len(out) == count:
                break
    return out


def _claim_cyclic_minimal(c: _Checks, workers: int, full: bool) -> None:
    for k in range(1, 25):
        want = 1 if k <= 2 else euler_phi(k) // 2
        got = len(classify(build_group(f"cyclic:{k}"), 1, workers))
        c(f"e(C{k}, n=1) = {got}, expected {want}", got == want)


def _claim_cyclic_collapse(c: _Checks, workers: int, full: bool) -> None:
    for k in range(3, 25):
        got = len(classify(build_group(f"cyclic:{k}"), 2, workers))
        c(f"e(C{k}, n=2) = {got}, expected 1", got == 1)


def _claim_abelian(c: _Checks, workers: int, full: bool) -> None:
    g = build_group("abelian:5,5")
    c("C5xC5: mu = 2", g.mu() == 2)
    c("C5xC5: 2 Nielsen classes of pairs", len(classify(g, 2, workers)) == 2)
    c("C5xC5: 1 weak class of pairs", len(weak_classify(g, 2, workers)) == 1)
    for spec, want in [("abelian:4,2", 1), ("abelian:9,3", euler_phi(3) // 2), ("abelian:25,5", euler_phi(5) // 2)]:
        got = len(classify(build_group(spec), 2, workers))
        c(f"{spec}: {got} classes of pairs, expected {want}", got == want)


def _claim_dihedral(c: _Checks, workers: int, full: bool) -> None:
    for m in (2, 3, 4, 5, 6, 7, 9):
        g = build_group(f"dihedral:{m}")
        want = max(1, euler_phi(m) // 2)
        e = len(classify(g, 2, workers))
        c(f"D{2 * m}: e(0) = {e}, expected {want}", e == want)
        c(f"D{2 * m}: w(0) = 1", len(weak_classify(g, 2, workers)) == 1)
        c(f"D{2 * m}: Psi = {psi(g)}, expected {2 * m + 1}", psi(g) == 2 * m + 1)
        if m >= 3:
            lb = invariant_lower_bound(g, 2)
            c(f"D{2 * m}: commutator-pair bound {lb} equals {e}", lb == e)


ORDER_AT_MOST_9 = [f"cyclic:{k}" for k in range(1, 10)] + [
    "abelian:2,2",
    "abelian:4,2",
    "abelian:2,2,2",
    "abelian:3,3",
    "dihedral:3",
    "dihedral:4",
    "quaternion",
]


def _claim_smallest_genus(c: _Checks, workers: int, full: bool) -> None:
    q = build_group("quaternion")
    c("Q8: 1 class of generating pairs", len(classify(q, 2, workers)) == 1)
    d = build_group("dihedral:5")
    n = n_for_genus(d, 11)
    c("D10 at genus 11: n = 2 and 2 classes", n == 2 and len(classify(d, n, workers)) == 2)
    a = build_group("abelian:5,5")
    n = n_for_genus(a, 26)
    c("C5xC5 at genus 26: n = 2 and 2 classes", n == 2 and len(classify(a, n, workers)) == 2)
    # Every genus 2..10 action comes from a group of order <= 9; cyclic
    # groups at genus 1 (the solid torus) are the cyclic-minimal claim.
    worst = []
    for spec in ORDER_AT_MOST_9:
        g = build_group(spec)
        for n in range(max(2, g.mu()), MAX_LENGTH + 1):
            genus = genus_for_n(g, n)
            if genus > 10:
                break
            e = len(classify(g, n, workers))
            if e != 1:
                worst.append(f"{spec} n={n} genus={genus}: {e}")
    c("all groups of order <= 9: one class at every genus 2..10", not worst)
    if worst:
        c.note("; ".join(worst))


def _claim_a5(c: _Checks, workers: int, full: bool) -> None:
    g = build_group("alt:5")
    c("A5: 2 weak classes of pairs", len(weak_classify(g, 2, workers)) == 2)
    c("A5: 1 Nielsen class of triples", len(classify(g, 3, workers)) == 1)


def _claim_a6(c: _Checks, workers: int, full: bool) -> None:
    g = build_group("alt:6")
    p = build_psl2(9)
    c("PSL(2,9) has order 360", p.order == 360)
    sizes = lambda h: sorted(len(x) for x in h.conjugacy_classes())
    orders = lambda h: sorted(h.elem_order.tolist())
    c("PSL(2,9) and A6: equal class-size and element-order multisets", sizes(p) == sizes(g) and orders(p) == orders(g))
    c("A6: 4 weak classes of pairs", len(weak_classify(g, 2, workers)) == 4)
    if full:
        part = classify(g, 3, workers)
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
        c(f"A6: 1 Nielsen class of triples ({part.total_generating} generating triples)", len(part) == 1)
        c(f"peak resident memory {peak:.0f} MB <= 2048 MB", peak <= 2048)
    else:
        c.note("single-orbit check over 360^3 states runs in the full suite only")


def _claim_bgroup(c: _Checks, workers: int, full: bool) -> None:
    g = build_group("bgroup")
    x, y, z = bgroup_index(1, 0, 0), bgroup_index(0, 1, 0), bgroup_index(0, 0, 1)
    c("order 4096", g.order == 4096)
    c("x^8 = y^8 = z^64 = 1", g.power(x, 8) == 0 and g.power(y, 8) == 0 and g.power(z, 64) == 0)
    c("orders of x, y, z are 8, 8, 64", (g.elem_order[x], g.elem_order[y], g.elem_order[z]) == (8, 8, 64))
    c("[x,z] = [y,z] = 1", g.commutator(x, z) == 0 and g.commutator(y, z) == 0)
    c("[x,y] = z^8", g.commutator(x, y) == g.power(z, 8))
    c("(x, y, z) generates", g.is_generating([x, y, z]))
    c("center is cyclic of order 64 generated by z", g.center().order == 64 and g.closure([z]) == g.center())
    q = AbelianQuotient.standard(g)
    v1 = GenVector(g, [x, y, z])
    v3 = GenVector(g, [x, y, g.power(z, 3)])
    d1, d3 = det_invariant(v1, q), det_invariant(v3, q)
    c(f"det(x,y,z) = {d1.value}, expected 1", d1.value == 1)
    c(f"det(x,y,z^3) = {d3.value}, expected 3", d3.value == 3)
    c("weak determinant orbits are disjoint", not (weak_det_orbit(d1) & weak_det_orbit(d3)))
    rng = np.random.default_rng(8)
    moves = all_moves(3)
    ok = True
    for v in _random_generating(g, 3, rng, 10):
        before = det_invariant(v, q)
        for i in rng.integers(0, len(moves), size=1000):
            v = apply_move(v, moves[i])
        ok &= det_invariant(v, q) == before
    c("determinant invariant under 10^4 random moves", ok)


def _solvable_groups() -> list[str]:
    specs = [f"cyclic:{k}" for k in range(1, 49)]
    for parts in _abelian_types(48):
        specs.append("abelian:" + ",".join(map(str, parts)))
    specs += [f"dihedral:{m}" for m in range(2, 25)]
    specs += ["quaternion", "sym:3", "sym:4", "alt:4"]
    return specs


def _abelian_types(limit: int) -> list[tuple[int, ...]]:
    """Non-cyclic invariant-factor lists d_1, d_2, ... with d_{i+1} | d_i."""
    out = []

    def extend(parts: tuple[int, ...], prod: int) -> None:
        if len(parts) >= 2:
            out.append(parts)
        last = parts[-1]
        for d in range(2, last + 1):
            if last % d == 0 and prod * d <= limit:
                extend(parts + (d,), prod * d)

    for d1 in range(2, limit + 1):
        extend((d1,), d1)
    return sorted(out, key=lambda p: (int(np.prod(p)), p))


def _claim_dunwoody(c: _Checks, workers: int, full: bool) -> None:
    skipped = []
    for spec in _solvable_groups():
        g = build_group(spec)
        if not is_solvable(g):
            c(f"{spec} is solvable", False)
            continue
        n = g.mu() + 1
        if g.order**n > CLASSIFY_CAP or n > MAX_LENGTH:
            skipped.append(f"{spec} (n={n})")
            continue
        e = len(classify(g, n, workers))
        c(f"{spec}: {e} class(es) at n = mu + 1 = {n}", e == 1)
    if skipped:
        c.note("beyond the classification cap, not evaluated: " + ", ".join(skipped))


def _claim_stabilization(c: _Checks, workers: int, full: bool) -> None:
    rng = np.random.default_rng(10)
    orbit_cap = 2**24
    limit_checked = []
    for spec in _solvable_groups():
        g = build_group(spec)
        if g.order == 1:
            continue
        mu, ell = g.mu(), g.ell()
        if mu * 2 <= MAX_LENGTH:
            if g.order**mu <= 2**16:
                reps = classify(g, mu, workers).representatives()
            else:
                reps = _random_generating(g, mu, rng, 2)
            v, w = reps[0], reps[-1]
            tr = stabilization_equivalence(v, w)
            ok = tr.is_valid()
            if g.order ** (2 * mu) <= orbit_cap:
                ok &= are_equivalent(tr.start, tr.end, workers=workers)[0]
            c(f"{spec}: stabilization trace between {list(v)} and {list(w)} replays", ok)
        if ell + 1 <= MAX_LENGTH:
            s = GenVector(g, g.minimal_generating_vector())
            good = True
            count = 50 if full else 10
            for v in _random_generating(g, ell + 1, rng, count):
                out, tr = supraminimal_reduce(v, s)
                good &= tr.is_valid() and out == stabilize(s, ell + 1 - mu)
            c(f"{spec}: {count} random ({ell + 1})-vectors reduce to (s,1,...,1)", good)
            if g.order ** (ell + 1) <= (2**24 if full else 2**20):
                e = len(classify(g, ell + 1, workers))
                c(f"{spec}: e(ell + 1 - mu) = {e} at n = {ell + 1}", e == 1)
                limit_checked.append(spec)
    c.note(f"limit stabilization checked for {len(limit_checked)} groups")


def _claim_properties(c: _Checks, workers: int, full: bool) -> None:
    rng = np.random.default_rng(11)
    for spec, n in [("dihedral:5", 2), ("sym:4", 2), ("alt:5", 2), ("abelian:4,2", 3)]:
        g = build_group(spec)
        moves = all_moves(n)
        sym = inv = gen = True
        for _ in range(100):
            v = GenVector(g, rng.integers(0, g.order, size=n))
            for m in moves:
                w = apply_move(v, m)
                inv &= apply_move(w, m.inverse()) == v
                gen &= np.array_equal(g.closure_mask(v.entries), g.closure_mask(w.entries))
            for w in neighbors(v)[:5]:
                sym &= v in neighbors(w)
        c(f"{spec}: neighbor symmetry", sym)
        c(f"{spec}: every move is inverted by its inverse move", inv)
        c(f"{spec}: moves preserve the generated subgroup", gen)
        p1 = classify(g, n, 1)
        direct = int(g.generating_flags(np.array(list(itertools.product(range(g.order), repeat=n)))).sum())
        c(f"{spec}: class sizes sum to {direct} generating vectors", sum(p1.sizes) == direct == p1.total_generating)
        _classify_cache.pop((g.fingerprint, n), None)
        p4 = classify(g, n, 4)
        c(f"{spec}: 1 and 4 workers give identical partitions", p1 == p4)
        with tempfile.TemporaryDirectory() as tmp:
            a, b = Path(tmp) / "a.noc", Path(tmp) / "b.noc"
            save_partition(p1, a)
            save_partition(load_partition(a, g), b)
            c(f"{spec}: cache round trip is byte-identical", a.read_bytes() == b.read_bytes())
        start = p1.representatives()[-1]
        orb = orbit(start, trace=True)
        codes = orb.codes()
        ok = True
        for code in rng.choice(codes, size=min(20, len(codes)), replace=False):
            ok &= orb.trace_to(unpack(int(code), g, n)).is_valid()
        c(f"{spec}: orbit traces replay", ok)


@dataclass(frozen=True)
class Claim:
    number: int
    title: str
    statement: str
    limit: float | None
    run: Callable[[_Checks, int, bool], None]


CLAIMS: tuple[Claim, ...] = (
    Claim(1, "cyclic minimal genus", "C_k has phi(k)/2 classes of generators (1 for k <= 2)", 1.0, _claim_cyclic_minimal),
    Claim(2, "cyclic collapse", "C_k has one class of generating pairs", 5.0, _claim_cyclic_collapse),
    Claim(3, "abelian minimal genus", "(Z/d_i) sums: phi(d_m)/2 classes, one weak class, at n = m", 60.0, _claim_abelian),
    Claim(4, "dihedral minimal genus", "D_2m: Psi = 2m+1, max(1, phi(m)/2) classes, one weak class", 10.0, _claim_dihedral),
    Claim(5, "smallest genus with inequivalent actions", "genus 11 (D10) overall, genus 26 (C5xC5) for abelian groups", 120.0, _claim_smallest_genus),
    Claim(6, "A5", "two weak classes of pairs; all triples equivalent", 120.0, _claim_a5),
    Claim(7, "A6 = PSL(2,9)", "four weak classes of pairs; all triples equivalent", 600.0, _claim_a6),
    Claim(8, "order 4096 nilpotent group", "(x,y,z) and (x,y,z^3) are weakly inequivalent", 10.0, _claim_bgroup),
    Claim(9, "solvable collapse", "one class at n = mu + 1 for solvable groups", 300.0, _claim_dunwoody),
    Claim(10, "stabilization", "mu stabilizations suffice; n > ell gives one class", None, _claim_stabilization),
    Claim(11, "engine properties", "move inverses, generation, partition sums, determinism, caches, traces", None, _claim_properties),
)


def run_claim(claim: Claim, workers: int = 1, full: bool = True) -> ClaimResult:
    c = _Checks()
    t0 = time.perf_counter()
    status = "pass"
    try:
        claim.run(c, workers, full)
    except Exception as exc:  # a claim must never abort the report
        status = "error"
        c.note(f"{type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t0
    if status == "pass":
        if not c.items or not all(ok for _, ok in c.items):
            status = "fail"
        elif claim.limit is not None and dt > claim.limit:
            status = "fail"
            c.note(f"took {dt:.1f} s, limit {claim.limit:.0f} s")
    failed = [text for text, ok in c.items if not ok]
    detail = "; ".join(([f"failed: {', '.join(failed)}"] if failed else []) + c.notes)
    return ClaimResult(claim.number, claim.title, claim.statement, status, dt, claim.limit, c.items, detail)


REPORT_GROUPS = ("cyclic:5", "dihedral:5", "abelian:5,5", "quaternion", "alt:5", "alt:6", "bgroup")


def claims_report(
    selection: Iterable[int] | None = None,
    budget: float | None = None,
    suite: str = "full",
    workers: int = 1,
    groups: Iterable[str] | None = REPORT_GROUPS,
    progress: Callable[[ClaimResult], None] | None = None,
) -> tuple[list[GenusRecord], list[ClaimResult]]:
    """Evaluate the numbered claims and build genus records.

    ``suite="fast"`` skips the 360^3 single-orbit enumeration and uses
    smaller samples.  Claims not started within ``budget`` seconds are
    reported as skipped.
    """
    if suite not in ("fast", "full"):
        raise ArgumentError(f"unknown suite {suite!r}")
    full = suite == "full"
    wanted = set(selection) if selection is not None else None
    start = time.perf_counter()
    results = []
    for claim in CLAIMS:
        if wanted is not None and claim.number not in wanted:
            continue
        if budget is not None and time.perf_counter() - start > budget:
            res = ClaimResult(claim.number, claim.title, claim.statement, "skipped", limit=claim.limit,
                              detail="time budget exhausted")
        else:
            res = run_claim(claim, workers, full)
        results.append(res)
        if progress is not None:
            progress(res)
    records = []
    for spec in groups or ():
        g = build_group(spec)
        ks = None if full else [0]
        records.append(genus_record(g, ks, workers))
    return records, results


def format_results(results: list[ClaimResult]) -> str:
    out = io.StringIO()
    for r in results:
        out.write(f"[{r.status.upper():7}] {r.number:2d}. {r.title} ({r.seconds:.1f} s)")
        if r.detail:
            out.write(f"  -- {r.detail}")
        out.write("\n")
    return out.getvalue()
