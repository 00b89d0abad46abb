"""Random-growth subgraph sampling.

A sample starts at a uniformly random node and repeatedly adds a random
neighbour of a random member until it has k nodes. Each sample is then
canonicalised and filed under its isomorphism class.

Samples are drawn in fixed-size chunks, each with its own seed derived from
the run seed and the chunk index, so the result does not depend on how many
worker processes share the chunks.
"""

from __future__ import annotations

import logging
import multiprocessing as mp
import random
from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .canon import K_MAX, CanonicalGraph, canonical_from_masks
from .config import SamplingConfig
from .graph import Graph
from .motifcode import InstanceList, exdegrees_fast, remove_overlaps

log = logging.getLogger(__name__)


class _Adjacency:
    """Neighbour access tuned for scalar lookups on either in-memory or mapped arrays."""

    def __init__(self, g: Graph, materialize: bool = True):
        conv = (lambda a: np.asarray(a).tolist()) if materialize else (lambda a: a)
        self.directed = g.directed
        self.n = g.n
        self.fo, self.ft = conv(g.fwd_offsets), conv(g.fwd_targets)
        if g.directed:
            self.bo, self.bt = conv(g.bwd_offsets), conv(g.bwd_targets)
        self.materialized = materialize

    def degree(self, v: int) -> tuple[int, int]:
        out = int(self.fo[v + 1]) - int(self.fo[v])
        if not self.directed:
            return out, 0
        return out, int(self.bo[v + 1]) - int(self.bo[v])

    def neighbor(self, v: int, r: int, out_deg: int) -> int:
        if r < out_deg:
            return int(self.ft[int(self.fo[v]) + r])
        return int(self.bt[int(self.bo[v]) + r - out_deg])

    def has_link(self, v: int, u: int) -> bool:
        lo, hi = int(self.fo[v]), int(self.fo[v + 1])
        if self.materialized:
            p = bisect_left(self.ft, u, lo, hi)
        else:
            p = lo + int(np.searchsorted(self.ft[lo:hi], u))
        return p < hi and int(self.ft[p]) == u


def _grow(adj: _Adjacency, k: int, rnd: random.Random, max_restarts: int) -> list[int] | None:
    for _ in range(max_restarts):
        start = rnd.randrange(adj.n)
        if sum(adj.degree(start)) == 0:
            continue
        nodes = [start]
        inside = {start}
        steps = 0
        while len(nodes) < k and steps < 50 * k:
            steps += 1
            v = nodes[rnd.randrange(len(nodes))]
            out_d, in_d = adj.degree(v)
            if out_d + in_d == 0:
                continue
            u = adj.neighbor(v, rnd.randrange(out_d + in_d), out_d)
            if u not in inside:
                inside.add(u)
                nodes.append(u)
        if len(nodes) == k:
            return nodes
    return None


def _canonical_instance(adj: _Adjacency, nodes: list[int]) -> tuple[CanonicalGraph, tuple[int, ...]]:
    masks = []
    for v in nodes:
        mask = 0
        for j, u in enumerate(nodes):
            if u != v and adj.has_link(v, u):
                mask |= 1 << j
        masks.append(mask)
    cf, perm = canonical_from_masks(adj.directed, tuple(masks))
    return cf, tuple(nodes[i] for i in perm)


def sample_instance(g: Graph, k: int, rng: random.Random, max_restarts: int = 100,
                    _adj: _Adjacency | None = None) -> tuple[CanonicalGraph, tuple[int, ...]] | None:
    """One connected k-node sample in canonical order, or None if growth kept stalling."""
    if k > g.n:
        raise ValueError("k exceeds the number of nodes")
    adj = _Adjacency(g, materialize=False) if _adj is None else _adj
    nodes = _grow(adj, k, rng, max_restarts)
    if nodes is None:
        return None
    return _canonical_instance(adj, nodes)


def _chunk_seed(seed: int, chunk: int) -> int:
    return int(np.random.SeedSequence([seed, chunk]).generate_state(1, np.uint64)[0])


def _run_chunk(adj: _Adjacency, seed: int, chunk: int, count: int, cfg: SamplingConfig):
    rnd = random.Random(_chunk_seed(seed, chunk))
    out, skipped = [], 0
    for _ in range(count):
        k = rnd.randint(cfg.size_min, cfg.size_max)
        res = None
        if k <= adj.n:
            nodes = _grow(adj, k, rnd, cfg.max_restarts)
            if nodes is not None:
                res = _canonical_instance(adj, nodes)
        if res is None:
            skipped += 1
        else:
            out.append(res)
    return out, skipped


_WORKER_ADJ: _Adjacency | None = None


def _worker(args):
    return _run_chunk(_WORKER_ADJ, *args)


@dataclass
class SamplingResult:
    buckets: dict[CanonicalGraph, InstanceList] = field(default_factory=dict)
    drawn: int = 0
    skipped: int = 0


def run_sampling(g: Graph, n_samples: int, size_min: int = 3, size_max: int = 6, seed: int = 0,
                 threads: int = 1, cfg: SamplingConfig | None = None, materialize: bool = True) -> SamplingResult:
    """Draw ``n_samples`` subgraphs and bucket the distinct instances by canonical form."""
    global _WORKER_ADJ
    if not 3 <= size_min <= size_max <= K_MAX:
        raise ValueError(f"need 3 <= size_min <= size_max <= {K_MAX}")
    cfg = SamplingConfig(n_samples, size_min, size_max) if cfg is None else cfg
    result = SamplingResult()
    if n_samples <= 0 or g.m == 0:
        result.skipped = max(n_samples, 0) if g.m == 0 else 0
        return result
    adj = _Adjacency(g, materialize)
    jobs = [(seed, i, min(cfg.chunk, n_samples - s), cfg) for i, s in enumerate(range(0, n_samples, cfg.chunk))]
    if threads > 1 and len(jobs) > 1:
        _WORKER_ADJ = adj
        with ProcessPoolExecutor(threads, mp_context=mp.get_context("fork")) as ex:
            parts = list(ex.map(_worker, jobs))
        _WORKER_ADJ = None
    else:
        parts = [_run_chunk(adj, *job) for job in jobs]
    seen: dict[CanonicalGraph, set[frozenset[int]]] = {}
    lists: dict[CanonicalGraph, list[tuple[int, ...]]] = {}
    for samples, skipped in parts:
        result.skipped += skipped
        for cf, inst in samples:
            bucket = seen.setdefault(cf, set())
            fs = frozenset(inst)
            if fs not in bucket:
                bucket.add(fs)
                lists.setdefault(cf, []).append(inst)
    result.drawn = n_samples - result.skipped
    for cf, inst in lists.items():
        result.buckets[cf] = InstanceList(cf, inst, exdegrees_fast(g, inst, cf.m))
    if result.skipped:
        log.info("%d of %d samples skipped (growth stalled)", result.skipped, n_samples)
    return result


def top_candidates(buckets: dict[CanonicalGraph, InstanceList], count: int = 100
                   ) -> list[tuple[InstanceList, InstanceList]]:
    """Motifs ranked by disjoint-instance count (descending, ties by key); (raw, disjoint) pairs."""
    ranked = []
    for cf, il in buckets.items():
        dis = remove_overlaps(il)
        ranked.append((-len(dis), cf.key, il, dis))
    ranked.sort(key=lambda r: (r[0], r[1]))
    return [(r[2], r[3]) for r in ranked[:count]]
