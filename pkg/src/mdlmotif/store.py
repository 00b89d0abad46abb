"""Seekable binary adjacency store and bounded-memory edge-list conversion.

File layout, all little-endian::

    magic      8 bytes   b"MDLGRAPH"
    version    u32       1
    flags      u32       bit 0 = directed
    n          u64
    m          u64
    forward offsets    (n + 1) x u64
    forward targets    F x u64        F = 2m undirected, m directed
    backward offsets   (n + 1) x u64  directed only
    backward targets   m x u64        directed only
    checksum   u64       CRC-32 of every preceding byte

Opening maps the arrays with ``np.memmap`` so neighbour lookups only touch
the offset entry and the neighbour range they need.
"""

from __future__ import annotations

import os
import struct
import tempfile
import time
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import EdgeListError, Graph, parse_pair

MAGIC = b"MDLGRAPH"
VERSION = 1
_HEADER = struct.Struct("<8sIIQQ")
_U64 = np.dtype("<u8")
_I64 = np.dtype("<i8")


class StoreError(IOError):
    """Bad magic, unsupported version, truncation or checksum mismatch."""


def _sections(g: Graph):
    yield g.fwd_offsets
    yield g.fwd_targets
    if g.directed:
        yield g.bwd_offsets
        yield g.bwd_targets


def _write_array(fh, arr: np.ndarray, crc: int, chunk: int = 1 << 22) -> int:
    for s in range(0, len(arr), chunk):
        buf = np.ascontiguousarray(arr[s:s + chunk], dtype=_U64).tobytes()
        fh.write(buf)
        crc = zlib.crc32(buf, crc)
    return crc


def write_binary_store(g: Graph, path: str | os.PathLike) -> None:
    header = _HEADER.pack(MAGIC, VERSION, int(g.directed), g.n, g.m)
    with open(path, "wb") as fh:
        fh.write(header)
        crc = zlib.crc32(header)
        for arr in _sections(g):
            crc = _write_array(fh, arr, crc)
        fh.write(struct.pack("<Q", crc))


def _expected_size(directed: bool, n: int, m: int) -> int:
    words = (n + 1) + (m if directed else 2 * m)
    if directed:
        words += (n + 1) + m
    return _HEADER.size + 8 * words + 8


def open_binary_store(path: str | os.PathLike, verify: bool = True) -> Graph:
    """Open a store as a read-only, memory-mapped :class:`Graph`."""
    path = Path(path)
    size = path.stat().st_size
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise StoreError(f"{path}: truncated header")
        magic, version, flags, n, m = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise StoreError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise StoreError(f"{path}: unsupported store version {version}")
        directed = bool(flags & 1)
        if size != _expected_size(directed, n, m):
            raise StoreError(f"{path}: size {size} does not match header (truncated or corrupt)")
        if verify:
            fh.seek(0)
            crc, left = 0, size - 8
            while left:
                buf = fh.read(min(left, 1 << 24))
                crc = zlib.crc32(buf, crc)
                left -= len(buf)
            (stored,) = struct.unpack("<Q", fh.read(8))
            if stored != crc:
                raise StoreError(f"{path}: checksum mismatch")

    pos = _HEADER.size
    arrays = []
    lengths = [n + 1, m if directed else 2 * m] + ([n + 1, m] if directed else [])
    for length in lengths:
        # ids are < 2**63, so the signed view is bit-identical to the u64 layout
        arrays.append(np.memmap(path, dtype=_I64, mode="r", offset=pos, shape=(length,))
                      if length else np.zeros(0, dtype=np.int64))
        pos += 8 * length
    if directed:
        return Graph(True, n, m, arrays[0], arrays[1], arrays[2], arrays[3])
    return Graph(False, n, m, arrays[0], arrays[1])


@dataclass
class ConvertStats:
    n: int
    m: int
    lines: int
    self_loops: int
    duplicates: int
    seconds: float


def bulk_convert(edgelist: str | os.PathLike, out: str | os.PathLike, directed: bool = False,
                 chunk: int = 1_000_000, tmpdir: str | None = None) -> ConvertStats:
    """Convert an edge list to a binary store without holding all links in memory.

    Pass 1 streams the text, compacts node ids and counts degrees. Pass 2
    scatters link ends into disk-backed adjacency arrays; pass 3 sorts and
    de-duplicates each node block and writes the store. Resident memory is
    O(n + chunk).
    """
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory(dir=tmpdir) as tmp:
        tmp = Path(tmp)
        pairs_path = tmp / "pairs.bin"
        ids: dict[int, int] = {}
        out_deg = np.zeros(0, np.int64)
        in_deg = np.zeros(0, np.int64)
        lines = loops = kept = 0
        buf: list[int] = []

        def flush(fh):
            nonlocal out_deg, in_deg
            if not buf:
                return
            arr = np.asarray(buf, dtype=np.int64).reshape(-1, 2)
            buf.clear()
            if len(ids) > len(out_deg):
                grow = max(len(ids), 2 * len(out_deg)) - len(out_deg)
                out_deg = np.concatenate([out_deg, np.zeros(grow, np.int64)])
                in_deg = np.concatenate([in_deg, np.zeros(grow, np.int64)])
            out_deg[:] += np.bincount(arr[:, 0], minlength=len(out_deg))
            in_deg[:] += np.bincount(arr[:, 1], minlength=len(in_deg))
            arr.astype(_I64).tofile(fh)

        with open(edgelist) as src, open(pairs_path, "wb") as pf:
            for lineno, line in enumerate(src, 1):
                pair = parse_pair(line, lineno)
                if pair is None:
                    continue
                lines += 1
                ia = ids.setdefault(pair[0], len(ids))
                ib = ids.setdefault(pair[1], len(ids))
                if ia == ib:
                    loops += 1
                    continue
                kept += 1
                buf.append(ia)
                buf.append(ib)
                if len(buf) >= 2 * chunk:
                    flush(pf)
            flush(pf)
        if not lines:
            raise EdgeListError("empty edge list")
        n = len(ids)
        ids.clear()
        out_deg, in_deg = out_deg[:n], in_deg[:n]

        if directed:
            fwd = _build_side(pairs_path, n, kept, out_deg, tmp / "fwd", chunk, flip=False, both=False)
            bwd = _build_side(pairs_path, n, kept, in_deg, tmp / "bwd", chunk, flip=True, both=False)
            m = fwd[2]
        else:
            fwd = _build_side(pairs_path, n, kept, out_deg + in_deg, tmp / "fwd", chunk, flip=False, both=True)
            bwd = None
            m = fwd[2] // 2

        header = _HEADER.pack(MAGIC, VERSION, int(directed), n, m)
        with open(out, "wb") as fh:
            fh.write(header)
            crc = zlib.crc32(header)
            for side in (fwd, bwd) if directed else (fwd,):
                crc = _write_array(fh, np.memmap(side[0], dtype=_I64, mode="r"), crc)
                if side[2]:
                    crc = _write_array(fh, np.memmap(side[1], dtype=_I64, mode="r"), crc)
            fh.write(struct.pack("<Q", crc))
    return ConvertStats(n, m, lines, loops, kept - m, time.perf_counter() - t0)


def _build_side(pairs_path: Path, n: int, count: int, raw_deg: np.ndarray, stem: Path,
                chunk: int, flip: bool, both: bool) -> tuple[Path, Path, int]:
    """Scatter link ends into a per-node array, then sort/dedupe block-wise."""
    total = int(raw_deg.sum())
    raw_off = np.zeros(n + 1, np.int64)
    np.cumsum(raw_deg, out=raw_off[1:])
    scatter_path = stem.with_suffix(".raw")
    raw = np.memmap(scatter_path, dtype=_I64, mode="w+", shape=(max(total, 1),))
    cursor = raw_off[:-1].copy()
    pairs = np.memmap(pairs_path, dtype=_I64, mode="r", shape=(count, 2)) if count else np.zeros((0, 2), np.int64)
    for s in range(0, count, chunk):
        blk = np.asarray(pairs[s:s + chunk])
        a, b = (blk[:, 1], blk[:, 0]) if flip else (blk[:, 0], blk[:, 1])
        if both:
            a, b = np.concatenate([a, b]), np.concatenate([b, a])
        order = np.argsort(a, kind="stable")
        a, b = a[order], b[order]
        first = np.searchsorted(a, a, side="left")
        pos = cursor[a] + (np.arange(len(a)) - first)
        raw[pos] = b
        cursor += np.bincount(a, minlength=n)
    raw.flush()

    off_path, tgt_path = stem.with_suffix(".off"), stem.with_suffix(".tgt")
    new_off = np.zeros(n + 1, np.int64)
    written = 0
    with open(tgt_path, "wb") as tf:
        node = 0
        while node < n:
            # grow the block until it holds about `chunk` entries
            end = int(np.searchsorted(raw_off, raw_off[node] + chunk, side="right")) - 1
            end = min(max(end, node + 1), n)
            lo, hi = raw_off[node], raw_off[end]
            seg = np.asarray(raw[lo:hi])
            rows = np.repeat(np.arange(node, end, dtype=np.int64), raw_deg[node:end])
            keys = np.unique(rows * np.int64(n) + seg)
            urow = keys // n
            new_off[node + 1:end + 1] = written + np.cumsum(np.bincount(urow - node, minlength=end - node))
            (keys % n).astype(_I64).tofile(tf)
            written += len(keys)
            node = end
    new_off.astype(_I64).tofile(off_path)
    del raw
    scatter_path.unlink()
    return off_path, tgt_path, written
