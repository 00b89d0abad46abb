import itertools
from collections import Counter

import numpy as np
import pytest

from mdlmotif.canon import canonicalize, is_connected
from mdlmotif.census import exact_census, exact_graph_count
from mdlmotif.graph import DegreeSequence, Graph, degree_sequence, induced_subgraph

from conftest import all_graphs, random_graph, relabel


def brute_census(g: Graph, k: int) -> Counter:
    out = Counter()
    for sub in itertools.combinations(range(g.n), k):
        h = induced_subgraph(g, sub)
        if is_connected(h):
            out[canonicalize(h)[0]] += 1
    return out


def test_triangle(triangle):
    cen = exact_census(triangle, 3)
    assert len(cen) == 1 and len(next(iter(cen.values()))) == 1


def test_k4_and_p4():
    k4 = Graph.from_links(4, list(itertools.combinations(range(4), 2)))
    cen = exact_census(k4, 3)
    assert [len(v) for v in cen.values()] == [4]
    assert canonicalize(Graph.from_links(3, [(0, 1), (1, 2), (0, 2)]))[0] in cen
    p4 = Graph.from_links(4, [(0, 1), (1, 2), (2, 3)])
    cen = exact_census(p4, 3)
    assert list(cen) == [canonicalize(Graph.from_links(3, [(0, 1), (1, 2)]))[0]]
    assert sorted(sorted(s) for s in cen[list(cen)[0]]) == [[0, 1, 2], [1, 2, 3]]


@pytest.mark.parametrize("directed", [False, True])
@pytest.mark.parametrize("k", [3, 4])
def test_census_vs_brute_force(k, directed):
    rng = np.random.default_rng(k)
    for _ in range(5):
        g = random_graph(rng, 9, 0.35, directed)
        cen = exact_census(g, k)
        assert Counter({c: len(v) for c, v in cen.items()}) == brute_census(g, k)
        for cf, insts in cen.items():
            assert len({frozenset(s) for s in insts}) == len(insts)
            for s in insts:
                assert induced_subgraph(g, s) == cf.to_graph()


def test_census_permutation_invariant():
    rng = np.random.default_rng(0)
    g = random_graph(rng, 12, 0.3)
    a = {c: len(v) for c, v in exact_census(g, 4).items()}
    b = {c: len(v) for c, v in exact_census(relabel(g, rng.permutation(12)), 4).items()}
    assert a == b


def test_census_limits(triangle):
    with pytest.raises(ValueError):
        exact_census(triangle, 7)


def test_graph_count_examples():
    assert exact_graph_count(DegreeSequence.undirected([2, 2, 2])) == 1
    assert exact_graph_count(DegreeSequence.undirected([1, 1, 1, 1])) == 3
    # the two degree-2 nodes must be adjacent and split the two leaves: 2 graphs
    assert exact_graph_count(DegreeSequence.undirected([2, 2, 1, 1])) == 2
    with pytest.raises(ValueError):
        exact_graph_count(DegreeSequence.undirected([1] * 10))


@pytest.mark.parametrize("n,directed", [(4, False), (5, False), (3, True)])
def test_graph_count_vs_enumeration(n, directed):
    counts = Counter()
    for g in all_graphs(n, directed):
        counts[tuple(tuple(s.tolist()) for s in degree_sequence(g).sequences())] += 1
    for key, c in counts.items():
        d = DegreeSequence.pair(*key) if directed else DegreeSequence.undirected(key[0])
        assert exact_graph_count(d) == c
