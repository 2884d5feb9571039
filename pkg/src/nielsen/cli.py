"""Command-line front end.

Exit codes: 0 success, 1 a verified claim failed (or a trace did not
replay), 2 usage error, 3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import atlas, engine, persistence, solvable
from .catalog import build_group
from .errors import CacheError, CapacityError, NielsenError
from .group import FiniteGroup

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _vector(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"vectors are comma-separated element indices, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive, default=1, help="worker threads for orbit search")
    common.add_argument("--cache-dir", default=os.environ.get("NIELSEN_CACHE_DIR"),
                        help="directory for orbit cache files (default: $NIELSEN_CACHE_DIR)")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--budget-seconds", type=float, default=None)

    p = argparse.ArgumentParser(prog="nielsen", description="Nielsen classes of generating vectors of finite groups.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    d = sub.add_parser("describe", parents=[common], help="order, mu, ell, Psi, center, classes, element legend")
    d.add_argument("--group", required=True)

    c = sub.add_parser("classify", parents=[common], help="Nielsen (or weak) classes of generating vectors")
    c.add_argument("--group", required=True)
    size = c.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=_positive)
    size.add_argument("--genus", type=_positive)
    c.add_argument("--weak", action="store_true")

    e = sub.add_parser("equivalent", parents=[common], help="decide Nielsen equivalence of two vectors")
    e.add_argument("--group", required=True)
    e.add_argument("--v", type=_vector, required=True)
    e.add_argument("--w", type=_vector, required=True)
    e.add_argument("--trace", action="store_true")

    r = sub.add_parser("reduce", parents=[common], help="constructive reduction with a move trace")
    r.add_argument("--group", required=True)
    r.add_argument("--v", type=_vector, required=True)
    how = r.add_mutually_exclusive_group(required=True)
    how.add_argument("--tower", action="store_true")
    how.add_argument("--supraminimal", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="evaluate the numbered claims")
    v.add_argument("--suite", choices=("fast", "full"), default="fast")
    v.add_argument("--claims", type=_vector, default=None, help="comma-separated claim numbers")

    s = sub.add_parser("stabilize-map", parents=[common], help="class map from n to n+1")
    s.add_argument("--group", required=True)
    s.add_argument("--n", type=_positive, required=True)

    rp = sub.add_parser("replay", parents=[common], help=argparse.SUPPRESS)
    rp.add_argument("file", nargs="?", default="-")
    return p


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _names(g: FiniteGroup, entries) -> str:
    return "(" + ", ".join(g.name(e) for e in entries) + ")"


def _describe(args) -> int:
    g = build_group(args.group)
    try:
        ell = g.ell()
    except CapacityError:
        ell = None
    info = {
        "group": g.label,
        "spec": g.spec,
        "fingerprint": f"{g.fingerprint:016x}",
        "order": g.order,
        "mu": g.mu(),
        "ell": ell,
        "psi": atlas.psi(g),
        "center_order": g.center().order,
        "conjugacy_classes": len(g.conjugacy_classes()),
        "generators": list(g.generators or ()),
        "legend": [g.name(i) for i in range(g.order)],
    }
    if args.format == "csv":
        keys = [k for k in info if k not in ("legend", "generators")]
        print(",".join(keys))
        print(",".join("" if info[k] is None else str(info[k]) for k in keys))
        return EXIT_OK
    lines = [f"{k:18} {'not computed' if info[k] is None else info[k]}" for k in info if k != "legend"]
    lines.append("legend:")
    lines += [f"  {i:5d}  {name}" for i, name in enumerate(info["legend"])]
    _emit(args, info, "\n".join(lines))
    return EXIT_OK


def _cached_partition(args, g: FiniteGroup, n: int, weak: bool) -> engine.OrbitPartition:
    mode = "weak" if weak else "nielsen"
    path = None
    if args.cache_dir:
        Path(args.cache_dir).mkdir(parents=True, exist_ok=True)
        path = Path(args.cache_dir) / f"{g.fingerprint:016x}-n{n}-{mode}.noc"
        if path.exists():
            try:
                return persistence.load_partition(path, g, mode)
            except CacheError as exc:
                print(f"warning: ignoring cache file: {exc}", file=sys.stderr)
    fn = engine.weak_classify if weak else engine.classify
    part = fn(g, n, args.threads)
    if path is not None:
        persistence.save_partition(part, path)
    return part


def _classify(args) -> int:
    g = build_group(args.group)
    n = args.n if args.n is not None else atlas.n_for_genus(g, args.genus)
    part = _cached_partition(args, g, n, args.weak)
    payload = part.to_json()
    payload["genus"] = atlas.genus_for_n(g, n)
    if args.format == "csv":
        print("index,code,size,representative")
        for i, c in enumerate(payload["classes"]):
            print(f"{i},{c['code']},{c['size']},\"{' '.join(map(str, c['representative']))}\"")
        return EXIT_OK
    lines = [
        f"group {g.label} ({g.spec}), n = {n}, genus {payload['genus']}, mode {part.mode}",
        f"generating vectors: {part.total_generating}",
        f"classes: {part.class_count}",
    ]
    for i, (rep, size) in enumerate(part.classes):
        lines.append(f"  #{i} size {size}: {list(rep.entries)}  {_names(g, rep.entries)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _trace_text(g: FiniteGroup, tr: engine.MoveTrace) -> list[str]:
    out = [f"trace ({len(tr)} moves) from {list(tr.start.entries)}:"]
    v = tr.start
    for m in tr.moves:
        v = engine.apply_move(v, m)
        out.append(f"  {str(m):22} -> {list(v.entries)}")
    return out


def _equivalent(args) -> int:
    g = build_group(args.group)
    v, w = engine.GenVector(g, args.v), engine.GenVector(g, args.w)
    same, tr = engine.are_equivalent(v, w, trace=args.trace, workers=args.threads)
    payload = {"group": g.spec, "v": args.v, "w": args.w, "equivalent": same}
    lines = [f"{args.v} and {args.w} are {'' if same else 'not '}Nielsen equivalent"]
    if tr is not None:
        payload["trace"] = tr.to_json()
        lines += _trace_text(g, tr)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _reduce(args) -> int:
    g = build_group(args.group)
    v = engine.GenVector(g, args.v)
    if args.tower:
        tower = solvable.cyclic_tower(g)
        out, tr = solvable.tower_reduce(v, tower)
        extra = {"tower_orders": tower.orders(), "tower_generators": list(tower.generators)}
    else:
        s = engine.GenVector(g, g.minimal_generating_vector())
        out, tr = solvable.supraminimal_reduce(v, s)
        extra = {"minimal_vector": list(s.entries)}
    payload = {"group": g.spec, "input": args.v, "reduced": list(out.entries), **extra, "trace": tr.to_json()}
    lines = [f"reduced {args.v} -> {list(out.entries)}  {_names(g, out.entries)}"] + _trace_text(g, tr)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _verify(args) -> int:
    def progress(res):
        if args.format == "text":
            sys.stdout.write(atlas.format_results([res]))
            sys.stdout.flush()

    records, results = atlas.claims_report(
        selection=args.claims,
        budget=args.budget_seconds,
        suite=args.suite,
        workers=args.threads,
        progress=progress,
    )
    ok = all(r.passed for r in results)
    if args.format == "json":
        print(json.dumps({"suite": args.suite, "all_pass": ok, "claims": [r.to_json() for r in results],
                          "records": [r.to_json() for r in records]}, indent=2))
    elif args.format == "csv":
        print("number,title,status,seconds")
        for r in results:
            print(f"{r.number},{r.title},{r.status},{r.seconds:.3f}")
    else:
        print()
        sys.stdout.write(persistence.render_report(records, "text"))
        print(f"\n{sum(r.passed for r in results)}/{len(results)} claims pass")
    return EXIT_OK if ok else EXIT_FAIL


def _stabilize_map(args) -> int:
    g = build_group(args.group)
    low = engine.classify(g, args.n, args.threads)
    high = engine.classify(g, args.n + 1, args.threads)
    mapping = atlas.stabilization_map(g, args.n, args.threads)
    payload = {
        "group": g.spec,
        "n": args.n,
        "map": [
            {"from": i, "from_rep": list(r.entries), "to": t, "to_rep": list(high.representatives()[t].entries)}
            for i, (r, t) in enumerate(zip(low.representatives(), mapping))
        ],
    }
    if args.format == "csv":
        print("from,to")
        for i, t in enumerate(mapping):
            print(f"{i},{t}")
        return EXIT_OK
    lines = [f"{g.label}: {low.class_count} classes at n = {args.n} -> {high.class_count} at n = {args.n + 1}"]
    for m in payload["map"]:
        lines.append(f"  #{m['from']} {m['from_rep']} -> #{m['to']} {m['to_rep']}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _replay(args) -> int:
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    data = json.loads(text)
    if "trace" in data:
        data = data["trace"]
    g = build_group(data["group"])
    if f"{g.fingerprint:016x}" != data.get("fingerprint", f"{g.fingerprint:016x}"):
        print("trace was recorded against a different group table", file=sys.stderr)
        return EXIT_FAIL
    tr = engine.MoveTrace.from_json(data, g)
    ok = tr.is_valid()
    print(f"{len(tr)} moves: {'replays' if ok else 'does NOT replay'} from {list(tr.start.entries)} to {list(tr.end.entries)}")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "describe": _describe,
    "classify": _classify,
    "equivalent": _equivalent,
    "reduce": _reduce,
    "verify": _verify,
    "stabilize-map": _stabilize_map,
    "replay": _replay,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except CapacityError as exc:
        msg = str(exc)
        if "invariant_lower_bound" not in msg:
            msg += "; invariant_lower_bound gives a lower bound on the class count"
        print(f"capacity exceeded: {msg}", file=sys.stderr)
        return EXIT_CAPACITY
    except (NielsenError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
