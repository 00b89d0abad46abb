"""Immutable simple graphs in compressed sparse row form.

A :class:`Graph` keeps a forward list (outgoing neighbours, or all
neighbours for undirected graphs) and, for directed graphs, a backward list
of incoming neighbours. Both are stored as an offset array of length n + 1
and a flat array of sorted neighbour ids, which is also the layout of the
on-disk binary store (see :mod:`mdlmotif.store`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)


class EdgeListError(ValueError):
    """Raised for malformed or empty edge-list input."""


@dataclass(frozen=True, eq=False)
class Graph:
    directed: bool
    n: int
    m: int
    fwd_offsets: np.ndarray
    fwd_targets: np.ndarray
    bwd_offsets: np.ndarray | None = None
    bwd_targets: np.ndarray | None = None

    @classmethod
    def from_links(cls, n: int, links: Iterable[Sequence[int]] | np.ndarray, directed: bool = False) -> Graph:
        """Build a graph on nodes 0..n-1, dropping self-loops and duplicates."""
        arr = np.asarray(links if isinstance(links, np.ndarray) else list(links), dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        src, dst = arr[:, 0], arr[:, 1]
        if arr.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise ValueError("link endpoint out of range")
        keep = src != dst
        src, dst = src[keep], dst[keep]
        if not directed:
            src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        fo, ft = _csr(n, src, dst)
        if directed:
            bo, bt = _csr(n, dst, src)
            return cls(True, n, len(ft), fo, ft, bo, bt)
        return cls(False, n, len(ft) // 2, fo, ft)

    # -- queries ---------------------------------------------------------

    def out_neighbors(self, i: int) -> np.ndarray:
        return self.fwd_targets[self.fwd_offsets[i]:self.fwd_offsets[i + 1]]

    def in_neighbors(self, i: int) -> np.ndarray:
        if not self.directed:
            return self.out_neighbors(i)
        return self.bwd_targets[self.bwd_offsets[i]:self.bwd_offsets[i + 1]]

    neighbors = out_neighbors

    def out_degrees(self) -> np.ndarray:
        return np.diff(np.asarray(self.fwd_offsets)).astype(np.int64)

    def in_degrees(self) -> np.ndarray:
        if not self.directed:
            return self.out_degrees()
        return np.diff(np.asarray(self.bwd_offsets)).astype(np.int64)

    def total_degrees(self) -> np.ndarray:
        """Out + in degree for directed graphs; plain degree otherwise."""
        if not self.directed:
            return self.out_degrees()
        return self.out_degrees() + self.in_degrees()

    def has_link(self, i: int, j: int) -> bool:
        nb = self.out_neighbors(i)
        p = int(np.searchsorted(nb, j))
        return p < len(nb) and int(nb[p]) == j

    def links(self) -> list[tuple[int, int]]:
        """Every link once: (from, to) if directed, (low, high) otherwise."""
        deg = self.out_degrees()
        src = np.repeat(np.arange(self.n, dtype=np.int64), deg)
        dst = np.asarray(self.fwd_targets, dtype=np.int64)
        if not self.directed:
            keep = src < dst
            src, dst = src[keep], dst[keep]
        return list(zip(src.tolist(), dst.tolist()))

    def adjacency_sets(self) -> list[set[int]]:
        return [set(self.out_neighbors(i).tolist()) for i in range(self.n)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if (self.directed, self.n, self.m) != (other.directed, other.n, other.m):
            return False
        same = np.array_equal(self.fwd_offsets, other.fwd_offsets) and np.array_equal(
            self.fwd_targets, other.fwd_targets)
        if same and self.directed:
            same = np.array_equal(self.bwd_offsets, other.bwd_offsets) and np.array_equal(
                self.bwd_targets, other.bwd_targets)
        return bool(same)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, n={self.n}, m={self.m})"


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = np.unique(src * np.int64(n) + dst) if len(src) else np.zeros(0, np.int64)
    rows = keys // n if n else keys
    offsets = np.zeros(n + 1, dtype=np.int64)
    if n:
        np.cumsum(np.bincount(rows, minlength=n), out=offsets[1:])
    return offsets, (keys % n if n else keys).astype(np.int64)


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    """Undirected: ``degrees``. Directed: ``in_degrees`` and ``out_degrees``."""

    directed: bool
    degrees: np.ndarray | None = None
    in_degrees: np.ndarray | None = None
    out_degrees: np.ndarray | None = None

    @classmethod
    def undirected(cls, degrees: Sequence[int]) -> DegreeSequence:
        return cls(False, degrees=np.asarray(degrees, dtype=np.int64))

    @classmethod
    def pair(cls, in_degrees: Sequence[int], out_degrees: Sequence[int]) -> DegreeSequence:
        d_in = np.asarray(in_degrees, dtype=np.int64)
        d_out = np.asarray(out_degrees, dtype=np.int64)
        if d_in.shape != d_out.shape:
            raise ValueError("in- and out-degree sequences differ in length")
        return cls(True, in_degrees=d_in, out_degrees=d_out)

    @property
    def n(self) -> int:
        return len(self.in_degrees if self.directed else self.degrees)

    @property
    def m(self) -> int:
        if self.directed:
            return int(self.out_degrees.sum())
        return int(self.degrees.sum()) // 2

    def sequences(self) -> tuple[np.ndarray, ...]:
        return (self.in_degrees, self.out_degrees) if self.directed else (self.degrees,)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return self.directed == other.directed and all(
            np.array_equal(a, b) for a, b in zip(self.sequences(), other.sequences()))

    __hash__ = None  # type: ignore[assignment]


def degree_sequence(g: Graph) -> DegreeSequence:
    if g.directed:
        return DegreeSequence.pair(g.in_degrees(), g.out_degrees())
    return DegreeSequence.undirected(g.out_degrees())


def induced_subgraph(g: Graph, nodes: Sequence[int]) -> Graph:
    """G[S]: link (i, j) iff (S_i, S_j) is a link of g."""
    nodes = [int(v) for v in nodes]
    if len(set(nodes)) != len(nodes):
        raise ValueError("duplicate node in induced_subgraph")
    if any(v < 0 or v >= g.n for v in nodes):
        raise ValueError("node id out of range")
    pos = {v: i for i, v in enumerate(nodes)}
    links = []
    for i, v in enumerate(nodes):
        for u in g.out_neighbors(v).tolist():
            j = pos.get(u)
            if j is not None:
                links.append((i, j))
    return Graph.from_links(len(nodes), links, g.directed)


@dataclass
class LoadStats:
    lines: int = 0
    self_loops: int = 0
    duplicates: int = 0


def parse_pair(line: str, lineno: int) -> tuple[int, int] | None:
    """Parse one edge-list line; None for blank and comment lines."""
    s = line.strip()
    if not s or s[0] in "#%":
        return None
    tok = s.split()
    if len(tok) < 2:
        raise EdgeListError(f"line {lineno}: expected two node ids, got {s!r}")
    try:
        return int(tok[0]), int(tok[1])
    except ValueError:
        raise EdgeListError(f"line {lineno}: non-integer node id in {s!r}") from None


def read_edgelist(source: Iterable[str], directed: bool = False) -> tuple[Graph, LoadStats]:
    """Read whitespace-separated integer pairs. Extra columns are ignored.

    Node ids are compacted to 0..n-1 in order of first appearance.
    """
    ids: dict[int, int] = {}
    src: list[int] = []
    dst: list[int] = []
    stats = LoadStats()
    for lineno, line in enumerate(source, 1):
        pair = parse_pair(line, lineno)
        if pair is None:
            continue
        a, b = pair
        ia = ids.setdefault(a, len(ids))
        ib = ids.setdefault(b, len(ids))
        stats.lines += 1
        if ia == ib:
            stats.self_loops += 1
            continue
        src.append(ia)
        dst.append(ib)
    if not stats.lines:
        raise EdgeListError("empty edge list")
    links = np.column_stack([np.asarray(src, np.int64), np.asarray(dst, np.int64)])
    g = Graph.from_links(len(ids), links, directed)
    stats.duplicates = stats.lines - stats.self_loops - g.m
    if stats.self_loops or stats.duplicates:
        log.warning("dropped %d self-loops and %d duplicate links", stats.self_loops, stats.duplicates)
    return g, stats


def load_edgelist(source: Iterable[str], directed: bool = False) -> Graph:
    return read_edgelist(source, directed)[0]


def write_edgelist(g: Graph, fh) -> None:
    for a, b in g.links():
        fh.write(f"{a} {b}\n")
