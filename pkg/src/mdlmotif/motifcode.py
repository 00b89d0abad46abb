"""The motif code: describe a graph as a template plus motif instances.

Each chosen instance is collapsed into its first node (the instance node).
The code then transmits the motif, the template graph H, for every rewired
link-side the motif position it used to attach to (W), the multiplicities
of collapsed parallel links (R), which template nodes are instance nodes,
and where the removed nodes go back in the original node order.

Two routes compute the template's contribution: ``build_template``
materialises H, while :class:`TemplateDelta` derives n(H), m(H) and the
degree statistics of H for every prefix of the instance list from one pass
over the instance neighbourhoods. Tests check that they agree.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .canon import CanonicalGraph, adjacency_masks
from .codes import dm_counts_codelength, log_binomial, log_factorial, nat_codelength, naturals_header
from .config import ScoreConfig
from .graph import DegreeSequence, Graph, degree_sequence
from .nullmodels import (IntervalBits, NullModelKind, combined_ds_motif_estimate, ds_header,
                         el_complete, el_complete_hist, er_complete, er_complete_nm)

Instance = tuple[int, ...]


# -- instances -------------------------------------------------------------

def motif_masks(motif: CanonicalGraph) -> tuple[int, ...]:
    masks = [0] * motif.k
    for i, j in motif.links():
        masks[i] |= 1 << j
        if not motif.directed:
            masks[j] |= 1 << i
    return tuple(masks)


def instance_matches(g: Graph, motif: CanonicalGraph, nodes: Sequence[int]) -> bool:
    return len(nodes) == motif.k and adjacency_masks(g, nodes) == motif_masks(motif)


def exdegree(g: Graph, nodes: Sequence[int]) -> int:
    """Number of links with exactly one endpoint in ``nodes`` (both directions if directed)."""
    inside = set(int(v) for v in nodes)
    if len(inside) != len(nodes) or any(v < 0 or v >= g.n for v in inside):
        raise ValueError("instance nodes must be distinct valid ids")
    count = 0
    for v in inside:
        count += sum(1 for u in g.out_neighbors(v).tolist() if u not in inside)
        if g.directed:
            count += sum(1 for u in g.in_neighbors(v).tolist() if u not in inside)
    return count


def exdegrees_fast(g: Graph, instances: Sequence[Instance], internal_links: int) -> list[int]:
    """Exdegrees of instances all inducing a motif with ``internal_links`` links."""
    if not instances:
        return []
    deg = g.total_degrees()
    arr = np.asarray(instances, dtype=np.int64)
    return (deg[arr].sum(axis=1) - 2 * internal_links).tolist()


@dataclass
class InstanceList:
    motif: CanonicalGraph
    instances: list[Instance]
    exdegrees: list[int]

    @classmethod
    def build(cls, g: Graph, motif: CanonicalGraph, instances: Sequence[Sequence[int]]) -> InstanceList:
        inst = [tuple(int(v) for v in s) for s in instances]
        return cls(motif, inst, exdegrees_fast(g, inst, motif.m))

    def __len__(self) -> int:
        return len(self.instances)


def remove_overlaps(il: InstanceList) -> InstanceList:
    """Greedy: scan by (exdegree, node sequence) and keep instances disjoint from those kept."""
    order = sorted(range(len(il.instances)), key=lambda i: (il.exdegrees[i], il.instances[i]))
    used: set[int] = set()
    kept, kept_ex = [], []
    for i in order:
        s = il.instances[i]
        if used.isdisjoint(s):
            used.update(s)
            kept.append(s)
            kept_ex.append(il.exdegrees[i])
    return InstanceList(il.motif, kept, kept_ex)


def cap_rewired(il: InstanceList, max_rewired: int) -> InstanceList:
    """Longest prefix whose rewired link-sides (sum of exdegrees) stay within the cap."""
    total, end = 0, 0
    for e in il.exdegrees:
        if total + e > max_rewired:
            break
        total += e
        end += 1
    return InstanceList(il.motif, il.instances[:end], il.exdegrees[:end])


# -- materialised template -------------------------------------------------

@dataclass
class TemplateParts:
    H: Graph
    W: list[int]  # motif positions 1..k
    R: list[int]
    instance_nodes: list[int]  # ids in H, one per instance
    n_H: int
    n_G: int

    @property
    def instance_node_count(self) -> int:
        return len(self.instance_nodes)


def _owners(g: Graph, motif: CanonicalGraph, instances: Sequence[Instance]) -> dict[int, tuple[int, int]]:
    owner: dict[int, tuple[int, int]] = {}
    for a, s in enumerate(instances):
        if len(s) != motif.k:
            raise ValueError(f"instance {a} has {len(s)} nodes, motif has {motif.k}")
        for p, v in enumerate(s):
            if v in owner:
                raise ValueError(f"instances overlap at node {v}")
            owner[v] = (a, p)
        if not instance_matches(g, motif, s):
            raise ValueError(f"instance {a} does not induce the motif")
    return owner


def build_template(g: Graph, motif: CanonicalGraph, instances: Sequence[Sequence[int]]) -> TemplateParts:
    instances = [tuple(int(v) for v in s) for s in instances]
    owner = _owners(g, motif, instances)
    keep = np.ones(g.n, dtype=bool)
    for s in instances:
        keep[list(s[1:])] = False
    new_id = np.cumsum(keep) - 1
    groups: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for u, v in g.links():
        ou, ov = owner.get(u), owner.get(v)
        if ou and ov and ou[0] == ov[0]:
            continue
        x, jx = (int(new_id[instances[ou[0]][0]]), ou[1] + 1) if ou else (int(new_id[u]), 0)
        y, jy = (int(new_id[instances[ov[0]][0]]), ov[1] + 1) if ov else (int(new_id[v]), 0)
        if not g.directed and x > y:
            x, jx, y, jy = y, jy, x, jx
        groups[(x, y)].append((jx, jy))
    W: list[int] = []
    R: list[int] = []
    keys = sorted(groups)
    for key in keys:
        sides = sorted(groups[key])
        if sides[0] != (0, 0):
            R.append(len(sides) - 1)
            for jx, jy in sides:
                if jx:
                    W.append(jx)
                if jy:
                    W.append(jy)
    n_H = int(keep.sum())
    H = Graph.from_links(n_H, keys, g.directed)
    inst_nodes = [int(new_id[s[0]]) for s in instances]
    return TemplateParts(H, W, R, inst_nodes, n_H, g.n)


def reconstruct(motif: CanonicalGraph, parts: TemplateParts, instances: Sequence[Sequence[int]]) -> Graph:
    """Decode: rebuild the original graph from the template parts and the instance sequences."""
    instances = [tuple(int(v) for v in s) for s in instances]
    k = motif.k
    removed = {v for s in instances for v in s[1:]}
    kept = [v for v in range(parts.n_G) if v not in removed]
    if len(kept) != parts.H.n:
        raise ValueError("template size does not match the insertion record")
    by_first = {s[0]: s for s in instances}
    links = [(s[i], s[j]) for s in instances for i, j in motif.links()]
    wi = ri = 0
    try:
        for x, y in parts.H.links():
            gx, gy = kept[x], kept[y]
            sx, sy = by_first.get(gx), by_first.get(gy)
            if sx is None and sy is None:
                links.append((gx, gy))
                continue
            copies = parts.R[ri] + 1
            ri += 1
            for _ in range(copies):
                ex, ey = gx, gy
                if sx is not None:
                    ex = sx[parts.W[wi] - 1]
                    wi += 1
                if sy is not None:
                    ey = sy[parts.W[wi] - 1]
                    wi += 1
                links.append((ex, ey))
    except IndexError:
        raise ValueError("side information is too short") from None
    if wi != len(parts.W) or ri != len(parts.R) or any(not 1 <= w <= k for w in parts.W):
        raise ValueError("inconsistent side information")
    return Graph.from_links(parts.n_G, links, parts.H.directed)


# -- template statistics without materialising H ---------------------------

@dataclass
class TemplateStats:
    """What the codelength needs to know about H for one prefix length c."""

    c: int
    n_H: int
    m_H: int
    degrees: list[np.ndarray]  # [deg] undirected, [in, out] directed; H node order
    W_hist: np.ndarray  # counts of positions 0..k-1
    R: np.ndarray

    def hists(self) -> list[np.ndarray]:
        return [np.bincount(d) if len(d) else np.zeros(1, np.int64) for d in self.degrees]


def _gather(offsets: np.ndarray, targets: np.ndarray, nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(index into nodes, neighbour) for every neighbour of every node."""
    offsets = np.asarray(offsets)
    starts = offsets[nodes]
    lens = offsets[nodes + 1] - starts
    total = int(lens.sum())
    owner = np.repeat(np.arange(len(nodes)), lens)
    pos = np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens) + np.repeat(starts, lens)
    return owner, np.asarray(targets)[pos].astype(np.int64)


class TemplateDelta:
    """Prefix-indexed template statistics from one pass over instance neighbourhoods.

    Parallel links created by collapsing are grouped: a "plain" group joins an
    instance a to a node y (directed: per direction) and is live while a is
    collapsed but y's own instance (if any) is not; a "pair" group joins two
    collapsed instances and is live once both are.
    """

    def __init__(self, g: Graph, motif: CanonicalGraph, instances: Sequence[Instance]):
        self.g = g
        self.k = k = motif.k
        self.m_motif = motif.m
        self.directed = g.directed
        M = self.M = len(instances)
        inst = np.asarray(instances, dtype=np.int64).reshape(M, k)
        self.inst = inst
        flat = inst.ravel()
        order = np.argsort(flat, kind="stable")
        sflat, sinst = flat[order], order // k

        def lookup(y: np.ndarray) -> np.ndarray:
            if len(sflat) == 0:
                return np.full(len(y), -1, np.int64)
            p = np.minimum(np.searchsorted(sflat, y), len(sflat) - 1)
            return np.where(sflat[p] == y, sinst[p], -1)

        if self.directed:
            self.base = [g.in_degrees(), g.out_degrees()]
        else:
            self.base = [g.out_degrees()]
        mdeg = np.zeros(k, np.int64)
        for i, j in motif.links():
            mdeg[i] += 1
            mdeg[j] += 1
        ext = g.total_degrees()[inst] - mdeg[None, :] if M else np.zeros((0, k), np.int64)
        self.cum_w = np.vstack([np.zeros((1, k), np.int64), np.cumsum(ext, axis=0)])

        # direction 0: links leaving the instance (or all, undirected); 1: links entering it
        sides = [(g.fwd_offsets, g.fwd_targets)]
        if self.directed:
            sides.append((g.bwd_offsets, g.bwd_targets))
        pa, pd, py, pc, plo, phi = [], [], [], [], [], []
        qa, qb, qc = [], [], []
        for d, (off, tgt) in enumerate(sides):
            idx, y = _gather(off, tgt, flat)
            a = idx // k
            b = lookup(y)
            ext_mask = b != a
            a, y, b = a[ext_mask], y[ext_mask], b[ext_mask]
            keys, cnt = np.unique(np.stack([a, y], axis=1), axis=0, return_counts=True) if len(a) else (
                np.zeros((0, 2), np.int64), np.zeros(0, np.int64))
            ga, gy = keys[:, 0], keys[:, 1]
            gb = lookup(gy)
            hi = np.where(gb >= 0, gb, M)
            live = hi >= ga + 1
            pa.append(ga[live]); pd.append(np.full(int(live.sum()), d)); py.append(gy[live])
            pc.append(cnt[live]); plo.append(ga[live] + 1); phi.append(hi[live])
            if d == 0:
                sel = (b >= 0) & ((b > a) if not self.directed else True)
                if sel.any():
                    pk, pcnt = np.unique(np.stack([a[sel], b[sel]], axis=1), axis=0, return_counts=True)
                    qa.append(pk[:, 0]); qb.append(pk[:, 1]); qc.append(pcnt)
        cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64)
        self.p_a, self.p_dir, self.p_y, self.p_cnt = cat(pa), cat(pd), cat(py), cat(pc)
        self.p_lo, self.p_hi = cat(plo), cat(phi)
        self.q_a, self.q_b, self.q_cnt = cat(qa), cat(qb), cat(qc)
        self.q_start = np.maximum(self.q_a, self.q_b) + 1 if len(self.q_a) else np.zeros(0, np.int64)

    def stats(self, c: int) -> TemplateStats:
        c = min(max(int(c), 0), self.M)
        g, k = self.g, self.k
        act = (self.p_lo <= c) & (c <= self.p_hi)
        qact = self.q_start <= c
        p_cnt = self.p_cnt[act]
        R = np.concatenate([p_cnt - 1, self.q_cnt[qact] - 1]).astype(np.int64)
        n_H = g.n - c * (k - 1)
        m_H = g.m - c * self.m_motif - int(R.sum())
        p_a, p_dir, p_y = self.p_a[act], self.p_dir[act], self.p_y[act]
        q_a, q_b = self.q_a[qact], self.q_b[qact]
        degs = [d.copy() for d in self.base]
        heads = self.inst[:c, 0]
        extra = p_cnt - 1
        if self.directed:
            # d=0: a -> y, so y loses in-degree; d=1: y -> a, y loses out-degree
            np.subtract.at(degs[0], p_y[p_dir == 0], extra[p_dir == 0])
            np.subtract.at(degs[1], p_y[p_dir == 1], extra[p_dir == 1])
            out_a = np.bincount(p_a[p_dir == 0], minlength=c)[:c] + np.bincount(q_a, minlength=c)[:c]
            in_a = np.bincount(p_a[p_dir == 1], minlength=c)[:c] + np.bincount(q_b, minlength=c)[:c]
            degs[0][heads] = in_a
            degs[1][heads] = out_a
        else:
            np.subtract.at(degs[0], p_y, extra)
            degs[0][heads] = (np.bincount(p_a, minlength=c)[:c] + np.bincount(q_a, minlength=c)[:c]
                              + np.bincount(q_b, minlength=c)[:c])
        if c:
            drop = np.zeros(g.n, dtype=bool)
            drop[self.inst[:c, 1:].ravel()] = True
            degs = [d[~drop] for d in degs]
        return TemplateStats(c, n_H, m_H, degs, self.cum_w[c].copy(), R)


def stats_from_parts(parts: TemplateParts, k: int) -> TemplateStats:
    d = degree_sequence(parts.H)
    w = np.bincount(np.asarray(parts.W, np.int64) - 1, minlength=k) if parts.W else np.zeros(k, np.int64)
    return TemplateStats(len(parts.instance_nodes), parts.n_H, parts.H.m, list(d.sequences()), w,
                         np.asarray(parts.R, np.int64))


# -- codelength ------------------------------------------------------------

@dataclass
class MotifCode:
    c: int
    subgraph: float
    template: float
    rewiring: float
    multi_edges: float
    instances: float
    insertions: float
    total: IntervalBits
    base: NullModelKind

    def components(self) -> dict[str, float]:
        return {"subgraph": self.subgraph, "template": self.template, "rewiring": self.rewiring,
                "multi_edges": self.multi_edges, "instances": self.instances, "insertions": self.insertions}


def _stats_degree_sequence(st: TemplateStats, directed: bool) -> DegreeSequence:
    if directed:
        return DegreeSequence.pair(st.degrees[0], st.degrees[1])
    return DegreeSequence.undirected(st.degrees[0])


def code_from_stats(g: Graph, motif: CanonicalGraph, st: TemplateStats, base: NullModelKind,
                    rng: np.random.Generator | None = None, cfg: ScoreConfig = ScoreConfig()) -> MotifCode:
    base = NullModelKind(base)
    k, c, directed = motif.k, st.c, g.directed
    mg = motif.to_graph()
    rewiring = dm_counts_codelength(st.W_hist, k)
    multi = naturals_header(np.bincount(st.R)) if len(st.R) else 0.0
    instances = nat_codelength(c) + log_binomial(st.n_H, c)
    insertions = log_factorial(g.n) - log_factorial(st.n_H)
    if base is NullModelKind.ER:
        sub = er_complete(mg)
        tmpl = er_complete_nm(st.n_H, st.m_H, directed)
        joint = IntervalBits.exact_value(sub + tmpl)
    elif base is NullModelKind.EL:
        sub = el_complete(mg)
        tmpl = el_complete_hist(st.n_H, st.m_H, directed, st.hists())
        joint = IntervalBits.exact_value(sub + tmpl)
    else:
        d_m = degree_sequence(mg)
        d_h = _stats_degree_sequence(st, directed)
        est = combined_ds_motif_estimate(d_m, d_h, cfg.ds_samples, cfg.ds_confidence, rng, cfg.n_boot)
        sub = ds_header(d_m)
        tmpl = ds_header(d_h)
        # the sampled part is shared by motif and template; book it under the template
        tmpl += est.point
        joint = est + (sub + ds_header(d_h))
    total = joint + (rewiring + multi + instances + insertions)
    return MotifCode(c, sub, tmpl, rewiring, multi, instances, insertions, total, base)


def motif_codelength(g: Graph, motif: CanonicalGraph, instances: Sequence[Sequence[int]],
                     base: NullModelKind = NullModelKind.ER, rng: np.random.Generator | None = None,
                     cfg: ScoreConfig = ScoreConfig(), method: str = "delta") -> MotifCode:
    """Codelength of g under the motif code with the given disjoint instances."""
    inst = [tuple(int(v) for v in s) for s in instances]
    if method == "materialized":
        st = stats_from_parts(build_template(g, motif, inst), motif.k)
    elif method == "delta":
        _owners(g, motif, inst)
        st = TemplateDelta(g, motif, inst).stats(len(inst))
    else:
        raise ValueError(f"unknown method {method!r}")
    return code_from_stats(g, motif, st, base, rng, cfg)


# -- prefix search ---------------------------------------------------------

def fibs_upto(n: int) -> list[int]:
    f = [1, 2]
    while f[-1] < n:
        f.append(f[-1] + f[-2])
    return f


def next_fib(n: int) -> int:
    """First Fibonacci number >= n (sequence 1, 2, 3, 5, ...)."""
    f = fibs_upto(n)
    return f[bisect.bisect_left(f, n)]


def prev_fib(n: int) -> int:
    """Last Fibonacci number < n; requires n >= 2."""
    if n < 2:
        raise ValueError("prev_fib needs n >= 2")
    f = fibs_upto(n)
    return f[bisect.bisect_left(f, n) - 1]


@dataclass
class SearchResult:
    c: int
    value: float
    evaluated: dict[int, float] = field(default_factory=dict)
    order: list[int] = field(default_factory=list)


def fibonacci_search(evaluate: Callable[[int], float], size: int, depth_limit: int = 0) -> SearchResult:
    """Minimise ``evaluate`` over prefix lengths 0..size by Fibonacci search.

    Evaluations are memoised and lengths above ``size`` are clamped to
    ``size``. The initial bracket has Fibonacci length, so every recursion
    after the first evaluates exactly one new length. A positive
    ``depth_limit`` stops after that many recursions; the best length seen
    so far is returned either way.
    """
    memo: dict[int, float] = {}
    order: list[int] = []

    def L(c: int) -> float:
        c = min(c, size)
        if c not in memo:
            memo[c] = evaluate(c)
            order.append(c)
        return memo[c]

    f, t, depth = 0, next_fib(size), 0
    while True:
        L(f)
        L(t)
        if t - f <= 1:
            break
        m = prev_fib(t - f)
        mid1, mid2 = L(t - m), L(f + m)
        depth += 1
        if mid1 > mid2:
            f = t - m
        else:
            t = f + m
        if depth_limit and depth >= depth_limit:
            break
    best = min(memo, key=lambda c: (memo[c], c))
    return SearchResult(best, memo[best], memo, order)


@dataclass
class PruneResult:
    c: int
    code: MotifCode
    search: SearchResult


def prune_search(g: Graph, motif: CanonicalGraph, instances: Sequence[Instance], base: NullModelKind,
                 depth_limit: int = 0, rng: np.random.Generator | None = None,
                 cfg: ScoreConfig = ScoreConfig(), delta: TemplateDelta | None = None) -> PruneResult:
    """Best prefix of an exdegree-sorted, disjoint instance list (compared on upper bits)."""
    delta = TemplateDelta(g, motif, instances) if delta is None else delta
    codes: dict[int, MotifCode] = {}

    def evaluate(c: int) -> float:
        codes[c] = code_from_stats(g, motif, delta.stats(c), base, rng, cfg)
        return codes[c].total.upper

    res = fibonacci_search(evaluate, len(instances), depth_limit)
    return PruneResult(res.c, codes[res.c], res)


# -- test statistic --------------------------------------------------------

@dataclass
class MotifScore:
    motif: CanonicalGraph
    null: NullModelKind
    found: int
    disjoint: int
    searched: int
    kept: int
    codelength: IntervalBits
    null_bound: IntervalBits
    log_factor: float
    significant: bool
    evaluations: int


def log_factor(g: Graph, il: InstanceList, null: NullModelKind, null_bound: IntervalBits,
               cfg: ScoreConfig = ScoreConfig(), rng: np.random.Generator | None = None,
               disjoint: InstanceList | None = None, delta: TemplateDelta | None = None) -> MotifScore:
    """Score one motif: null bound (lower end) minus motif code (upper end), in bits.

    ``disjoint`` and ``delta`` may be passed in to share work between null models.
    """
    null = NullModelKind(null)
    disjoint = remove_overlaps(il) if disjoint is None else disjoint
    capped = cap_rewired(disjoint, cfg.max_rewired)
    pr = prune_search(g, il.motif, capped.instances, null, cfg.search_depth, rng, cfg, delta)
    score = null_bound.lower - pr.code.total.upper
    return MotifScore(il.motif, null, len(il), len(disjoint), len(capped), pr.c, pr.code.total, null_bound,
                      score, score >= cfg.threshold_bits, len(pr.search.evaluated))
