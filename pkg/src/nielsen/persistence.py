"""Orbit cache files and report serialization.

Cache layout (all integers little-endian)::

    b"NOC1"  u8 version=1  u64 fingerprint  u16 len + utf-8 group spec
    u8 n  u8 bits-per-entry  u8 mode  u64 class count
    count * (u64 representative code, u64 class size)
    [mode 2 only: size * u64 sorted member codes]
    u32 crc32 of everything above
"""
from __future__ import annotations

import csv
import io
import json
import struct
import sys
import zlib
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .engine import Orbit, OrbitPartition, bits_per_entry
from .errors import (
    ArgumentError,
    BadMagicError,
    BadVersionError,
    CacheError,
    CrcMismatchError,
    FingerprintMismatchError,
    ModeMismatchError,
)
from .group import FiniteGroup

MAGIC = b"NOC1"
VERSION = 1
MODES = {"nielsen": 0, "weak": 1, "orbit": 2}
MODE_NAMES = {v: k for k, v in MODES.items()}


def _header(group_fp: int, spec: str, n: int, bits: int, mode: str, count: int) -> bytes:
    raw = spec.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ArgumentError("group spec too long for the cache header")
    return (
        MAGIC
        + struct.pack("<BQH", VERSION, group_fp, len(raw))
        + raw
        + struct.pack("<BBBQ", n, bits, MODES[mode], count)
    )


def _classes(codes: Iterable[int], sizes: Iterable[int]) -> bytes:
    arr = np.array([list(codes), list(sizes)], dtype="<u8").T
    return np.ascontiguousarray(arr).tobytes()


def _write(path: str | Path, body: bytes) -> None:
    data = body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)
    Path(path).write_bytes(data)


def encode_partition(p: OrbitPartition) -> bytes:
    spec = p.group.spec if p.group is not None else ""
    bits = bits_per_entry(p.group.order) if p.group is not None else 0
    body = _header(p.fingerprint, spec, p.n, bits, p.mode, len(p.codes)) + _classes(p.codes, p.sizes)
    return body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)


def save_partition(p: OrbitPartition, path: str | Path) -> None:
    """Write ``p``; identical partitions give identical bytes."""
    Path(path).write_bytes(encode_partition(p))


def save_orbit(o: Orbit, path: str | Path) -> None:
    """Write a single orbit: one class plus its sorted member codes."""
    g = o.start.group
    codes = np.sort(o.codes()).astype("<u8")
    rep = int(codes[0])
    body = _header(g.fingerprint, g.spec, o.start.n, bits_per_entry(g.order), "orbit", 1)
    body += _classes([rep], [len(codes)]) + codes.tobytes()
    _write(path, body)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise CrcMismatchError("file is truncated")
        out = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return out

    def raw(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise CrcMismatchError("file is truncated")
        out = self.data[self.pos : self.pos + size]
        self.pos += size
        return out


def _parse(data: bytes, group: FiniteGroup, path: str | Path):
    if data[:4] != MAGIC:
        raise BadMagicError(f"{path}: not an orbit cache file")
    if len(data) < 5 or data[4] != VERSION:
        raise BadVersionError(f"{path}: unsupported version {data[4] if len(data) > 4 else None}")
    if len(data) < 9:
        raise CrcMismatchError(f"{path}: file is truncated")
    body, crc = data[:-4], struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(body) & 0xFFFFFFFF != crc:
        raise CrcMismatchError(f"{path}: checksum mismatch")
    r = _Reader(body)
    r.pos = 5
    (fp,) = r.take("<Q")
    if fp != group.fingerprint:
        raise FingerprintMismatchError(
            f"{path}: file is for group fingerprint {fp:016x}, not {group.fingerprint:016x}"
        )
    (slen,) = r.take("<H")
    spec = r.raw(slen).decode("utf-8")
    n, bits, mode, count = r.take("<BBBQ")
    if mode not in MODE_NAMES:
        raise CacheError(f"{path}: unknown mode byte {mode}")
    if bits != bits_per_entry(group.order):
        raise CacheError(f"{path}: bits per entry {bits} does not match the group")
    pairs = np.frombuffer(r.raw(16 * count), dtype="<u8").reshape(count, 2)
    codes = [int(x) for x in pairs[:, 0]]
    sizes = [int(x) for x in pairs[:, 1]]
    if any(a >= b for a, b in zip(codes, codes[1:])):
        raise CacheError(f"{path}: representatives are not strictly increasing")
    members = None
    if MODE_NAMES[mode] == "orbit":
        members = np.frombuffer(r.raw(8 * sizes[0]), dtype="<u8").astype(np.uint64)
    if r.pos != len(body):
        raise CacheError(f"{path}: trailing bytes after the class table")
    return spec, n, MODE_NAMES[mode], codes, sizes, members


def load_partition(path: str | Path, group: FiniteGroup, mode: str | None = None) -> OrbitPartition:
    """Read and validate a cache written by :func:`save_partition`.

    ``mode`` (``"nielsen"`` or ``"weak"``) is enforced when given.
    """
    data = Path(path).read_bytes()
    spec, n, file_mode, codes, sizes, _ = _parse(data, group, path)
    if file_mode == "orbit":
        raise ModeMismatchError(f"{path}: holds a single orbit, not a partition")
    if mode is not None and mode != file_mode:
        raise ModeMismatchError(f"{path}: holds a {file_mode} partition, {mode} was requested")
    return OrbitPartition(group.fingerprint, n, file_mode, tuple(codes), tuple(sizes), sum(sizes), group)


def load_orbit(path: str | Path, group: FiniteGroup) -> tuple[int, int, np.ndarray]:
    """``(n, representative code, sorted member codes)`` of a single-orbit file."""
    data = Path(path).read_bytes()
    _, n, file_mode, codes, _, members = _parse(data, group, path)
    if file_mode != "orbit":
        raise ModeMismatchError(f"{path}: holds a {file_mode} partition, not a single orbit")
    return n, codes[0], members


# ------------------------------------------------------------------ reports

CSV_HEADER = ["group", "mu", "ell", "psi", "k", "genus", "e", "w", "e_exact", "w_exact"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def report_rows(records) -> list[list[str]]:
    rows = []
    for rec in records:
        d = rec.to_json()
        for r in d["rows"]:
            rows.append(
                [_fmt(v) for v in (d["group"], d["mu"], d["ell"], d["psi"], r["k"], r["genus"],
                                   r["e"], r["w"], r["e_exact"], r["w_exact"])]
            )
    return rows


def render_report(records, fmt: str) -> str:
    records = list(records)
    if fmt == "json":
        return json.dumps([r.to_json() for r in records], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(report_rows(records))
        return buf.getvalue()
    if fmt == "text":
        return _table(CSV_HEADER, report_rows(records))
    raise ArgumentError(f"unknown report format {fmt!r}")


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def write_report(records, fmt: str = "json", path: str | Path | IO[str] | None = None) -> None:
    """Write genus records as JSON, CSV or an aligned text table."""
    text = render_report(records, fmt)
    if path is None:
        sys.stdout.write(text)
    elif hasattr(path, "write"):
        path.write(text)
    else:
        Path(path).write_text(text)
