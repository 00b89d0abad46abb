"""Canonical forms for small graphs.

Colour refinement followed by individualisation/refinement search. Among all
leaves of the search tree the smallest adjacency bit string wins; subtrees
that are images of already explored ones under an automorphism (detected as
two leaves with identical bit strings) are skipped. The search is exact, so
isomorphic inputs always get identical keys.

Bit order: undirected graphs use pairs (i, j), i < j, row-major; directed
graphs use all ordered pairs i != j, row-major. The first pair is the most
significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .graph import Graph

K_MAX = 12


@dataclass(frozen=True, order=True)
class CanonicalGraph:
    """A small graph in canonical node order; usable as a dict key."""

    directed: bool
    k: int
    bits: int

    @property
    def key(self) -> bytes:
        return bytes([int(self.directed), self.k]) + self.bits.to_bytes(_nbytes(self.k, self.directed), "big")

    def links(self) -> list[tuple[int, int]]:
        pairs = _pairs(self.k, self.directed)
        top = len(pairs) - 1
        return [p for t, p in enumerate(pairs) if (self.bits >> (top - t)) & 1]

    @property
    def m(self) -> int:
        return bin(self.bits).count("1")

    def to_graph(self) -> Graph:
        return Graph.from_links(self.k, self.links(), self.directed)

    def text(self) -> str:
        """graph6 for undirected graphs, digraph6 for directed ones."""
        k = self.k
        if self.directed:
            adj = set(self.links())
            bits = [int((i, j) in adj) for i in range(k) for j in range(k)]
            return "&" + _six(k, bits)
        adj = set(self.links())
        bits = [int((i, j) in adj) for j in range(1, k) for i in range(j)]
        return _six(k, bits)

    def __str__(self) -> str:
        return self.text()


def _six(n: int, bits: list[int]) -> str:
    bits = bits + [0] * (-len(bits) % 6)
    body = "".join(chr(63 + int("".join(map(str, bits[i:i + 6])), 2)) for i in range(0, len(bits), 6))
    return chr(63 + n) + body


def from_text(text: str) -> CanonicalGraph:
    """Inverse of :meth:`CanonicalGraph.text` (keys are canonicalised again)."""
    directed = text.startswith("&")
    s = text[1:] if directed else text
    k = ord(s[0]) - 63
    bits = "".join(format(ord(c) - 63, "06b") for c in s[1:])
    if directed:
        links = [(i, j) for i in range(k) for j in range(k) if bits[i * k + j] == "1"]
    else:
        pairs = [(i, j) for j in range(1, k) for i in range(j)]
        links = [p for t, p in enumerate(pairs) if bits[t] == "1"]
    return canonicalize(Graph.from_links(k, links, directed))[0]


@lru_cache(maxsize=None)
def _pairs(k: int, directed: bool) -> tuple[tuple[int, int], ...]:
    if directed:
        return tuple((i, j) for i in range(k) for j in range(k) if i != j)
    return tuple((i, j) for i in range(k) for j in range(i + 1, k))


def _nbytes(k: int, directed: bool) -> int:
    return max(1, (len(_pairs(k, directed)) + 7) // 8)


def is_connected(g: Graph) -> bool:
    """True iff g has exactly one (weakly) connected component."""
    if g.n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        nbrs = g.out_neighbors(v).tolist()
        if g.directed:
            nbrs += g.in_neighbors(v).tolist()
        for u in nbrs:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def adjacency_masks(g: Graph, nodes: Sequence[int] | None = None) -> tuple[int, ...]:
    """Out-neighbour bitmasks of g (or of g[nodes]) in the given node order."""
    if nodes is None:
        return tuple(sum(1 << int(u) for u in g.out_neighbors(v)) for v in range(g.n))
    pos = {v: i for i, v in enumerate(nodes)}
    masks = []
    for v in nodes:
        mask = 0
        for u in g.out_neighbors(v).tolist():
            i = pos.get(u)
            if i is not None:
                mask |= 1 << i
        masks.append(mask)
    return tuple(masks)


def canonicalize(g: Graph) -> tuple[CanonicalGraph, tuple[int, ...]]:
    """Return the canonical form and perm with perm[i] = input node at canonical slot i."""
    if g.n > K_MAX:
        raise ValueError(f"canonicalize supports at most {K_MAX} nodes, got {g.n}")
    return canonical_from_masks(g.directed, adjacency_masks(g))


@lru_cache(maxsize=1 << 18)
def canonical_from_masks(directed: bool, out_masks: tuple[int, ...]) -> tuple[CanonicalGraph, tuple[int, ...]]:
    k = len(out_masks)
    if k > K_MAX:
        raise ValueError(f"canonicalize supports at most {K_MAX} nodes, got {k}")
    out_n = [[u for u in range(k) if (out_masks[v] >> u) & 1] for v in range(k)]
    if directed:
        in_n = [[u for u in range(k) if (out_masks[u] >> v) & 1] for v in range(k)]
    else:
        in_n = out_n
    bits, order = _Search(k, directed, out_masks, out_n, in_n).run()
    return CanonicalGraph(directed, k, bits), tuple(order)


class _Search:
    def __init__(self, k, directed, masks, out_n, in_n):
        self.k = k
        self.directed = directed
        self.masks = masks
        self.out_n = out_n
        self.in_n = in_n
        self.pairs = _pairs(k, directed)
        self.best_bits: int | None = None
        self.best_order: list[int] | None = None
        self.seen: dict[int, tuple[int, ...]] = {}

    def run(self) -> tuple[int, list[int]]:
        if self.k == 0:
            return 0, []
        if self.directed:
            init = [(len(self.out_n[v]), len(self.in_n[v])) for v in range(self.k)]
        else:
            init = [len(self.out_n[v]) for v in range(self.k)]
        self._dfs(self._refine(_relabel(init)), ())
        return self.best_bits, self.best_order

    def _refine(self, colors: list[int]) -> list[int]:
        ncol = len(set(colors))
        while True:
            if self.directed:
                sig = [(colors[v],
                        tuple(sorted(colors[u] for u in self.out_n[v])),
                        tuple(sorted(colors[u] for u in self.in_n[v]))) for v in range(self.k)]
            else:
                sig = [(colors[v], tuple(sorted(colors[u] for u in self.out_n[v]))) for v in range(self.k)]
            new = _relabel(sig)
            nnew = len(set(new))
            if nnew == ncol:
                return new
            colors, ncol = new, nnew

    def _leaf(self, colors: list[int]) -> tuple[int, list[int]]:
        order = [0] * self.k
        for v, c in enumerate(colors):
            order[c] = v
        bits = 0
        masks = self.masks
        for i, j in self.pairs:
            bits = (bits << 1) | ((masks[order[i]] >> order[j]) & 1)
        return bits, order

    def _dfs(self, colors: list[int], path: tuple[int, ...]) -> int | None:
        """Explore below ``path``; a returned depth means abort up to that depth."""
        k = self.k
        counts = [0] * k
        for c in colors:
            counts[c] += 1
        target = next((c for c in range(k) if counts[c] > 1), None)
        if target is None:
            bits, order = self._leaf(colors)
            if self.best_bits is None or bits < self.best_bits:
                self.best_bits, self.best_order = bits, order
            prev = self.seen.get(bits)
            if prev is None:
                self.seen[bits] = path
                return None
            # automorphism: the subtree below the divergence point repeats an explored one
            d = 0
            while prev[d] == path[d]:
                d += 1
            return d
        depth = len(path)
        for idx, v in enumerate(v for v in range(k) if colors[v] == target):
            child = [2 * c + 1 if c == target and u != v else 2 * c for u, c in enumerate(colors)]
            res = self._dfs(self._refine(_relabel(child)), path + (idx,))
            if res is not None and res < depth:
                return res
        return None


def _relabel(values: list) -> list[int]:
    rank = {s: i for i, s in enumerate(sorted(set(values)))}
    return [rank[s] for s in values]


def enumerate_connected(k: int, directed: bool = False) -> list[CanonicalGraph]:
    """All connected graphs on k nodes up to isomorphism (brute force, small k)."""
    pairs = _pairs(k, directed)
    found = set()
    for code in range(1 << len(pairs)):
        links = [p for t, p in enumerate(pairs) if (code >> t) & 1]
        g = Graph.from_links(k, links, directed)
        if is_connected(g):
            found.add(canonicalize(g)[0])
    return sorted(found, key=lambda c: c.key)
