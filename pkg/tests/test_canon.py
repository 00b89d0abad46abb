import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdlmotif.canon import K_MAX, canonicalize, enumerate_connected, from_text, is_connected
from mdlmotif.graph import Graph, induced_subgraph

from conftest import all_graphs, random_graph, relabel


def to_nx(g: Graph):
    h = nx.DiGraph() if g.directed else nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.links())
    return h


def test_isomorphic_paths_agree():
    a = Graph.from_links(3, [(0, 1), (1, 2)])
    b = Graph.from_links(3, [(2, 0), (0, 1)])
    assert canonicalize(a)[0] == canonicalize(b)[0]
    assert canonicalize(a)[0].key == canonicalize(b)[0].key


def test_triangle_vs_path(triangle):
    path = Graph.from_links(3, [(0, 1), (1, 2)])
    assert canonicalize(triangle)[0].key != canonicalize(path)[0].key


def test_size_limit():
    with pytest.raises(ValueError):
        canonicalize(Graph.from_links(K_MAX + 1, [(0, 1)]))


def test_is_connected(triangle):
    assert is_connected(triangle)
    assert not is_connected(Graph.from_links(2, []))
    assert is_connected(Graph.from_links(3, [(0, 1), (2, 1)], directed=True))


def test_connected_four_node_classes_bruteforce():
    keys = {canonicalize(g)[0].key for g in all_graphs(4) if is_connected(g)}
    assert len(keys) == 6


def test_enumerated_class_counts():
    # connected graphs on 3, 4, 5 nodes; weakly connected digraphs on 3 nodes
    assert [len(enumerate_connected(k)) for k in (3, 4, 5)] == [2, 6, 21]
    assert len(enumerate_connected(3, directed=True)) == 13


def test_21_keys_under_permutation():
    rng = np.random.default_rng(0)
    keys = set()
    for cf in enumerate_connected(5):
        g = cf.to_graph()
        for _ in range(100):
            keys.add(canonicalize(relabel(g, rng.permutation(5)))[0].key)
    assert len(keys) == 21


@pytest.mark.parametrize("directed", [False, True])
def test_keys_agree_with_isomorphism(directed):
    graphs = [g for g in all_graphs(4 if not directed else 3, directed) if g.m]
    rng = np.random.default_rng(1)
    idx = rng.choice(len(graphs), size=min(len(graphs), 40), replace=False)
    sample = [graphs[i] for i in idx]
    for a, b in itertools.combinations(sample, 2):
        same = canonicalize(a)[0] == canonicalize(b)[0]
        assert same == nx.is_isomorphic(to_nx(a), to_nx(b))


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 8), st.booleans(), st.floats(0.1, 0.9), st.integers(0, 2**32 - 1))
def test_invariance_and_permutation(n, directed, p, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p, directed)
    cf, perm = canonicalize(g)
    # the returned order reproduces the stored links
    assert induced_subgraph(g, perm) == cf.to_graph()
    h = relabel(g, rng.permutation(n))
    assert canonicalize(h)[0].key == cf.key


@pytest.mark.parametrize("k", [3, 4, 5])
def test_text_is_graph6(k):
    for cf in enumerate_connected(k):
        h = nx.from_graph6_bytes(cf.text().encode())
        assert nx.is_isomorphic(h, to_nx(cf.to_graph()))
        assert from_text(cf.text()) == cf


def test_digraph_text_roundtrip():
    for cf in enumerate_connected(3, directed=True):
        assert cf.text().startswith("&")
        assert from_text(cf.text()) == cf
