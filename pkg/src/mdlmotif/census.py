"""Exhaustive oracles for tiny inputs: subgraph census and |G_D| counting."""

from __future__ import annotations

from .canon import CanonicalGraph, canonicalize
from .graph import DegreeSequence, Graph, induced_subgraph

CENSUS_MAX_N = 300
CENSUS_MAX_K = 6
COUNT_MAX_N = 8


def _undirected_neighbors(g: Graph) -> list[set[int]]:
    nb = [set(g.out_neighbors(v).tolist()) for v in range(g.n)]
    if g.directed:
        for v in range(g.n):
            nb[v] |= set(g.in_neighbors(v).tolist())
    return nb


def exact_census(g: Graph, k: int) -> dict[CanonicalGraph, list[tuple[int, ...]]]:
    """Every connected induced k-node subgraph exactly once (ESU enumeration).

    Instances are returned in the canonical node order of their class.
    """
    if g.n > CENSUS_MAX_N or k > CENSUS_MAX_K or k < 1:
        raise ValueError(f"census limited to n <= {CENSUS_MAX_N}, 1 <= k <= {CENSUS_MAX_K}")
    nb = _undirected_neighbors(g)
    out: dict[CanonicalGraph, list[tuple[int, ...]]] = {}

    def emit(sub: list[int]) -> None:
        cf, perm = canonicalize(induced_subgraph(g, sub))
        out.setdefault(cf, []).append(tuple(sub[i] for i in perm))

    def extend(sub: list[int], ext: set[int], v: int, closed: set[int]) -> None:
        if len(sub) == k:
            emit(sub)
            return
        ext = set(ext)
        while ext:
            w = ext.pop()
            # exclusive neighbours of w: larger than v and not adjacent to the current subgraph
            new = {u for u in nb[w] if u > v and u not in closed}
            extend(sub + [w], ext | new, v, closed | nb[w] | {w})

    for v in range(g.n):
        extend([v], {u for u in nb[v] if u > v}, v, nb[v] | {v})
    return out


def exact_graph_count(d: DegreeSequence) -> int:
    """|G_D| by backtracking over node pairs with degree pruning (n <= 8)."""
    n = d.n
    if n > COUNT_MAX_N:
        raise ValueError(f"exact count limited to n <= {COUNT_MAX_N}")
    if d.directed:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        need_a = [int(x) for x in d.out_degrees]
        need_b = [int(x) for x in d.in_degrees]
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        need_a = need_b = [int(x) for x in d.degrees]
    if min(need_a + need_b, default=0) < 0:
        return 0
    # remaining pairs in which each node can still appear (as source / target)
    left_a = [0] * n
    left_b = [0] * n
    for i, j in pairs:
        left_a[i] += 1
        if d.directed:
            left_b[j] += 1
        else:
            left_a[j] += 1
    ra, rb = list(need_a), (list(need_b) if d.directed else None)
    rb_ = rb if d.directed else ra
    lb = left_b if d.directed else left_a

    def rec(t: int) -> int:
        if t == len(pairs):
            return int(all(x == 0 for x in ra) and all(x == 0 for x in rb_))
        i, j = pairs[t]
        total = 0
        left_a[i] -= 1
        lb[j] -= 1
        # skip the pair
        if ra[i] <= left_a[i] and rb_[j] <= lb[j]:
            total += rec(t + 1)
        # take the pair
        if ra[i] > 0 and rb_[j] > 0:
            ra[i] -= 1
            rb_[j] -= 1
            total += rec(t + 1)
            ra[i] += 1
            rb_[j] += 1
        left_a[i] += 1
        lb[j] += 1
        return total

    return rec(0)
