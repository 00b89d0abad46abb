import json

import numpy as np
import pytest

from mdlmotif.canon import canonicalize, from_text
from mdlmotif.config import SynthConfig
from mdlmotif.graph import Graph, induced_subgraph, load_edgelist
from mdlmotif.synth import generate_injected, uniform_graph

MOTIF = from_text("D`{").to_graph()  # 5 nodes, 6 links


def test_uniform_graph_simple():
    links = uniform_graph(50, 300, np.random.default_rng(0))
    assert len(links) == len(set(links)) == 300
    assert all(a < b for a, b in links)
    with pytest.raises(ValueError):
        uniform_graph(4, 7, np.random.default_rng(0))


def test_no_instances_is_plain_graph():
    res = generate_injected(MOTIF, 0, np.random.default_rng(1))
    assert (res.graph.n, res.graph.m) == (5000, 10000)
    assert res.instances == []


@pytest.mark.parametrize("n_i", [10, 100])
def test_injected_sizes_and_instances(n_i):
    res = generate_injected(MOTIF, n_i, np.random.default_rng(n_i))
    g = res.graph
    assert (g.n, g.m, g.directed) == (5000, 10000, False)
    assert len(res.instances) == n_i
    seen = set()
    for s in res.instances:
        assert seen.isdisjoint(s)
        seen.update(s)
        assert induced_subgraph(g, s) == MOTIF
    assert res.label_probs.sum() == pytest.approx(1.0) and len(res.label_probs) == 5


def test_small_config_and_errors():
    tri = Graph.from_links(3, [(0, 1), (1, 2), (0, 2)])
    cfg = SynthConfig(n_total=60, m_total=80, degree_cap=3, n_labels=2)
    res = generate_injected(tri, 5, np.random.default_rng(2), cfg)
    assert (res.graph.n, res.graph.m) == (60, 80)
    with pytest.raises(ValueError):
        generate_injected(tri, 5, np.random.default_rng(2), SynthConfig(n_total=60, m_total=80, n_labels=4))
    with pytest.raises(ValueError):
        generate_injected(Graph.from_links(3, [(0, 1)]), 1, np.random.default_rng(2), cfg)
    with pytest.raises(RuntimeError):
        generate_injected(tri, 12, np.random.default_rng(2),
                          SynthConfig(n_total=60, m_total=80, degree_cap=0, max_retries=3))


def test_write_files(tmp_path):
    res = generate_injected(MOTIF, 20, np.random.default_rng(3))
    res.write(tmp_path / "g.txt", tmp_path / "g.truth.json")
    truth = json.loads((tmp_path / "g.truth.json").read_text())
    cf = canonicalize(MOTIF)[0]
    assert truth["motif"] == cf.text()
    assert len(truth["instances"]) == 20
    g = load_edgelist((tmp_path / "g.txt").read_text().splitlines())
    # the text file drops isolated nodes and compacts ids, so compare link counts only
    assert g.m == res.graph.m
    for s in truth["instances"]:
        assert induced_subgraph(res.graph, s) == cf.to_graph()
