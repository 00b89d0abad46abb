"""Synthetic graphs with injected motif instances.

A uniform random graph H is drawn with the node and link budget left after
the instances; some low-degree nodes of H are then expanded into copies of
the motif, each of their link-sides reattached to a motif position drawn
from a random categorical distribution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .canon import canonicalize, is_connected
from .config import SynthConfig
from .graph import Graph


@dataclass
class InjectedGraph:
    graph: Graph
    motif: Graph
    instances: list[tuple[int, ...]]  # in the motif's own node order
    label_probs: np.ndarray

    def write(self, edges_path, truth_path) -> None:
        with open(edges_path, "w") as fh:
            for a, b in self.graph.links():
                fh.write(f"{a} {b}\n")
        cf, perm = canonicalize(self.motif)
        truth = {
            "motif": cf.text(),
            "motif_links": self.motif.links(),
            # reorder each instance into canonical motif order
            "instances": [[s[perm[i]] for i in range(len(s))] for s in self.instances],
            "label_probs": self.label_probs.tolist(),
        }
        with open(truth_path, "w") as fh:
            json.dump(truth, fh, indent=1)


def uniform_graph(n: int, m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """m distinct undirected pairs drawn uniformly: a uniform graph with n nodes and m links."""
    if m > n * (n - 1) // 2:
        raise ValueError("too many links for n nodes")
    chosen: set[tuple[int, int]] = set()
    links: list[tuple[int, int]] = []
    while len(links) < m:
        need = m - len(links)
        a = rng.integers(0, n, size=2 * need + 16)
        b = rng.integers(0, n, size=2 * need + 16)
        for x, y in zip(a.tolist(), b.tolist()):
            if x == y:
                continue
            key = (x, y) if x < y else (y, x)
            if key in chosen:
                continue
            chosen.add(key)
            links.append(key)
            if len(links) == m:
                break
    return links


def generate_injected(motif: Graph, n_instances: int, rng: np.random.Generator,
                      cfg: SynthConfig = SynthConfig()) -> InjectedGraph:
    if motif.directed or not is_connected(motif):
        raise ValueError("motif must be connected and undirected")
    k, mk = motif.n, motif.m
    n = cfg.n_total - (k - 1) * n_instances
    m = cfg.m_total - mk * n_instances
    if n < n_instances or m < 0:
        raise ValueError("instance budget exceeds the graph size")
    n_labels = k if cfg.n_labels is None else cfg.n_labels
    if not 1 <= n_labels <= k:
        raise ValueError("labels must index motif positions")

    for _ in range(cfg.max_retries):
        links = uniform_graph(n, m, rng)
        deg = np.zeros(n, np.int64)
        for a, b in links:
            deg[a] += 1
            deg[b] += 1
        eligible = np.flatnonzero(deg <= cfg.degree_cap)
        if len(eligible) >= n_instances:
            break
    else:
        raise RuntimeError(f"no graph with {n_instances} nodes of degree <= {cfg.degree_cap}")

    hubs = rng.choice(eligible, size=n_instances, replace=False) if n_instances else np.zeros(0, np.int64)
    probs = rng.exponential(size=n_labels)
    probs /= probs.sum()

    # node v of H keeps its id as position 0; positions 1..k-1 of instance i get fresh ids
    slot = {int(v): i for i, v in enumerate(hubs.tolist())}
    copies = [[int(v)] + [n + i * (k - 1) + p for p in range(k - 1)] for i, v in enumerate(hubs.tolist())]
    out_links = []
    for a, b in links:
        if a in slot:
            a = copies[slot[a]][int(rng.choice(n_labels, p=probs))]
        if b in slot:
            b = copies[slot[b]][int(rng.choice(n_labels, p=probs))]
        out_links.append((a, b))
    for nodes in copies:
        out_links.extend((nodes[i], nodes[j]) for i, j in motif.links())

    total = n + (k - 1) * n_instances
    relabel = rng.permutation(total)
    arr = relabel[np.asarray(out_links, np.int64).reshape(-1, 2)]
    g = Graph.from_links(total, arr, False)
    instances = [tuple(int(relabel[v]) for v in nodes) for nodes in copies]
    return InjectedGraph(g, motif, instances, probs)
