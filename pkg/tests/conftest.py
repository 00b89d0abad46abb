from __future__ import annotations

import itertools

import numpy as np
import pytest

from mdlmotif.canon import canonicalize
from mdlmotif.census import exact_census
from mdlmotif.graph import Graph, induced_subgraph


def random_graph(rng: np.random.Generator, n: int, p: float, directed: bool = False) -> Graph:
    if directed:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return Graph.from_links(n, [pr for pr, k in zip(pairs, keep) if k], directed)


def all_graphs(n: int, directed: bool = False):
    """Every labeled simple graph on n nodes."""
    if directed:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_links(n, [pr for t, pr in enumerate(pairs) if mask >> t & 1], directed)


def relabel(g: Graph, perm) -> Graph:
    return Graph.from_links(g.n, [(perm[a], perm[b]) for a, b in g.links()], g.directed)


def ordered(g: Graph, motif, nodes):
    """Reorder a node set into the motif's canonical order."""
    cf, perm = canonicalize(induced_subgraph(g, nodes))
    assert cf == motif
    return tuple(nodes[i] for i in perm)


def random_case(rng, directed):
    """Random graph, a motif found in it and a random disjoint instance set."""
    while True:
        g = random_graph(rng, int(rng.integers(6, 16)), float(rng.uniform(0.15, 0.5)), directed)
        k = int(rng.integers(3, 5))
        cen = exact_census(g, k)
        if cen:
            break
    motifs = sorted(cen, key=lambda c: c.key)
    motif = motifs[int(rng.integers(len(motifs)))]
    insts = list(cen[motif])
    rng.shuffle(insts)
    used, chosen = set(), []
    for s in insts:
        if used.isdisjoint(s) and rng.random() < 0.8:
            used.update(s)
            chosen.append(s)
    return g, motif, chosen


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_links(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def two_triangles() -> Graph:
    return Graph.from_links(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


#: one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
