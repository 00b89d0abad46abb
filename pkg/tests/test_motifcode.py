import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdlmotif.canon import canonicalize
from mdlmotif.codes import nat_codelength
from mdlmotif.config import ScoreConfig
from mdlmotif.graph import Graph
from mdlmotif.motifcode import (InstanceList, TemplateDelta, build_template, cap_rewired, exdegree,
                                fibonacci_search, log_factor, motif_codelength, next_fib, prev_fib, prune_search,
                                reconstruct, remove_overlaps, stats_from_parts)
from mdlmotif.nullmodels import IntervalBits, NullModelKind, el_complete, er_complete, null_bound

from conftest import ordered, random_case

TRI = canonicalize(Graph.from_links(3, [(0, 1), (1, 2), (0, 2)]))[0]


def test_exdegree_examples(two_triangles):
    g = Graph.from_links(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert exdegree(g, [0, 1, 2]) == 1
    assert exdegree(Graph.from_links(3, [(0, 1), (1, 2), (0, 2)]), [0, 1, 2]) == 0
    assert exdegree(two_triangles, [0, 1, 2]) == 1
    with pytest.raises(ValueError):
        exdegree(g, [0, 0, 1])


def test_remove_overlaps_examples():
    il = InstanceList(TRI, [(0, 1, 2), (0, 1, 2)], [1, 1])
    assert remove_overlaps(il).instances == [(0, 1, 2)]
    il = InstanceList(TRI, [(3, 4, 5), (0, 1, 2)], [2, 1])
    assert remove_overlaps(il).instances == [(0, 1, 2), (3, 4, 5)]
    # chain with exdegrees 1, 2, 3: first overlaps second, second overlaps third
    chain = InstanceList(TRI, [(0, 1, 2), (2, 3, 4), (4, 5, 6)], [1, 2, 3])
    assert remove_overlaps(chain).instances == [(0, 1, 2), (4, 5, 6)]
    chain = InstanceList(TRI, [(0, 1, 2), (2, 3, 4), (4, 5, 0)], [1, 2, 3])
    assert remove_overlaps(chain).instances == [(0, 1, 2)]


def test_remove_overlaps_tiebreak():
    il = InstanceList(TRI, [(5, 6, 7), (1, 2, 3)], [4, 4])
    assert remove_overlaps(il).instances == [(1, 2, 3), (5, 6, 7)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 20), min_size=3, max_size=3, unique=True), max_size=20),
       st.data())
def test_remove_overlaps_disjoint_sorted(insts, data):
    ex = data.draw(st.lists(st.integers(0, 9), min_size=len(insts), max_size=len(insts)))
    out = remove_overlaps(InstanceList(TRI, [tuple(s) for s in insts], ex))
    seen = set()
    for s in out.instances:
        assert seen.isdisjoint(s)
        seen.update(s)
    assert out.exdegrees == sorted(out.exdegrees)


def test_cap_rewired():
    il = InstanceList(TRI, [(0,), (1,), (2,), (3,)], [2, 3, 4, 1])
    assert cap_rewired(il, 5).instances == [(0,), (1,)]
    assert cap_rewired(il, 1).instances == []
    assert len(cap_rewired(il, 100)) == 4


def test_two_triangle_template(two_triangles):
    g = two_triangles
    m = [ordered(g, TRI, [0, 1, 2]), ordered(g, TRI, [3, 4, 5])]
    parts = build_template(g, TRI, m)
    assert (parts.H.n, parts.H.m) == (2, 1)
    assert sorted(parts.W) == [1, 3] and sorted(parts.W) == sorted([m[0].index(2) + 1, m[1].index(3) + 1])
    assert parts.R == [0]
    assert reconstruct(TRI, parts, m) == g


def test_single_isolated_instance():
    g = Graph.from_links(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])
    parts = build_template(g, TRI, [(0, 1, 2)])
    assert parts.W == [] and parts.R == []
    assert parts.H == Graph.from_links(4, [(1, 2), (2, 3)])
    assert parts.instance_nodes == [0]


def test_star_into_triangle():
    g = Graph.from_links(4, [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2)])
    parts = build_template(g, TRI, [(0, 1, 2)])
    assert parts.H.m == 1 and parts.R == [2]
    assert sorted(parts.W) == [1, 2, 3]
    assert reconstruct(TRI, parts, [(0, 1, 2)]) == g


def test_template_errors(two_triangles):
    with pytest.raises(ValueError, match="overlap"):
        build_template(two_triangles, TRI, [(0, 1, 2), (2, 3, 4)])
    path = canonicalize(Graph.from_links(3, [(0, 1), (1, 2)]))[0]
    with pytest.raises(ValueError, match="induce"):
        build_template(two_triangles, path, [(0, 1, 2)])


def test_empty_instance_roundtrip(two_triangles):
    parts = build_template(two_triangles, TRI, [])
    assert parts.H == two_triangles
    assert reconstruct(TRI, parts, []) == two_triangles


def test_reconstruct_rejects_bad_side_info(two_triangles):
    m = [ordered(two_triangles, TRI, [0, 1, 2]), ordered(two_triangles, TRI, [3, 4, 5])]
    parts = build_template(two_triangles, TRI, m)
    parts.W = parts.W[:-1]
    with pytest.raises(ValueError):
        reconstruct(TRI, parts, m)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_lossless_and_bookkeeping(seed, directed):
    g, motif, m = random_case(np.random.default_rng(seed), directed)
    parts = build_template(g, motif, m)
    assert reconstruct(motif, parts, m) == g
    assert parts.n_H == g.n - len(m) * (motif.k - 1)
    assert parts.H.m <= g.m
    assert len(parts.W) == sum(exdegree(g, s) for s in m)
    assert all(r >= 0 for r in parts.R)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_delta_equals_materialized(seed, directed):
    g, motif, m = random_case(np.random.default_rng(seed), directed)
    delta = TemplateDelta(g, motif, m)
    for c in range(len(m) + 1):
        a = delta.stats(c)
        b = stats_from_parts(build_template(g, motif, m[:c]), motif.k)
        assert (a.n_H, a.m_H) == (b.n_H, b.m_H)
        assert all(np.array_equal(x, y) for x, y in zip(a.degrees, b.degrees))
        assert np.array_equal(a.W_hist, b.W_hist)
        assert sorted(a.R.tolist()) == sorted(b.R.tolist())
        for base in (NullModelKind.ER, NullModelKind.EL):
            x = motif_codelength(g, motif, m[:c], base, method="delta").total.point
            y = motif_codelength(g, motif, m[:c], base, method="materialized").total.point
            assert x == pytest.approx(y, abs=1e-6)


def test_two_triangle_components(two_triangles):
    g = two_triangles
    m = [ordered(g, TRI, [0, 1, 2]), ordered(g, TRI, [3, 4, 5])]
    code = motif_codelength(g, TRI, m, NullModelKind.ER)
    expect = {
        "subgraph": math.log2(20) + math.log2(4),
        "template": math.log2(12) + math.log2(2),
        "rewiring": math.log2(15),  # (1/2)/(3/2) * (1/2)/(5/2)
        "multi_edges": 1.0,
        "instances": math.log2(12),
        "insertions": math.log2(720) - math.log2(2),
    }
    for key, val in expect.items():
        assert code.components()[key] == pytest.approx(val, abs=1e-9), key
    assert code.insertions == pytest.approx(8.4919, abs=1e-4)
    assert code.total.exact
    assert code.total.point == pytest.approx(sum(expect.values()))


@pytest.mark.parametrize("base", [NullModelKind.ER, NullModelKind.EL])
def test_no_free_lunch(base, two_triangles):
    g = two_triangles
    code = motif_codelength(g, TRI, [], base)
    complete = er_complete if base is NullModelKind.ER else el_complete
    sub = complete(TRI.to_graph())
    assert code.total.point - complete(g) == pytest.approx(sub + nat_codelength(0), abs=1e-9)
    assert code.total.point > complete(g)


def test_ds_code_is_an_interval():
    rng = np.random.default_rng(1)
    g, motif, m = random_case(rng, False)
    code = motif_codelength(g, motif, m, NullModelKind.DS, rng=rng, cfg=ScoreConfig(ds_samples=10, n_boot=200))
    assert code.total.lower <= code.total.point <= code.total.upper


# -- Fibonacci search --------------------------------------------------------

def test_fib_helpers():
    assert (next_fib(5), prev_fib(5)) == (5, 3)
    assert [next_fib(n) for n in (0, 1, 4, 6, 13, 14)] == [1, 1, 5, 8, 13, 21]
    assert [prev_fib(n) for n in (2, 3, 4, 9)] == [1, 2, 3, 8]


@settings(max_examples=300)
@given(st.integers(0, 30), st.data())
def test_search_finds_unimodal_minimum(size, data):
    opt = data.draw(st.integers(0, size))
    slopes = data.draw(st.lists(st.floats(0.01, 10), min_size=size + 1, max_size=size + 1))
    vals = [0.0] * (size + 1)
    for c in range(opt - 1, -1, -1):
        vals[c] = vals[c + 1] + slopes[c]
    for c in range(opt + 1, size + 1):
        vals[c] = vals[c - 1] + slopes[c]
    res = fibonacci_search(lambda c: vals[c], size)
    assert res.value == min(vals) and res.c == opt


@settings(max_examples=200)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=31))
def test_search_never_worse_than_endpoints(vals):
    res = fibonacci_search(lambda c: vals[c], len(vals) - 1)
    assert res.value <= min(vals[0], vals[-1])
    assert res.value == vals[res.c]


@pytest.mark.parametrize("size", [1, 2, 3, 5, 8, 13, 21, 34, 7, 20, 30])
def test_search_one_new_value_per_recursion(size):
    vals = [(c - size / 3) ** 2 for c in range(size + 1)]
    counts = [len(fibonacci_search(lambda c: vals[c], size, depth_limit=d).evaluated) for d in range(1, 12)]
    steps = np.diff(counts).tolist()
    assert set(steps) <= {0, 1}
    if size == next_fib(size):
        # without clamping, each recursion adds exactly one value until the bracket closes
        done = steps.index(0) if 0 in steps else len(steps)
        assert steps == [1] * done + [0] * (len(steps) - done)


def test_prune_search_and_log_factor(two_triangles):
    g = two_triangles
    m = [ordered(g, TRI, [0, 1, 2]), ordered(g, TRI, [3, 4, 5])]
    pr = prune_search(g, TRI, m, NullModelKind.ER)
    best = min(range(3), key=lambda c: motif_codelength(g, TRI, m[:c]).total.upper)
    assert pr.c == best
    il = InstanceList.build(g, TRI, m)
    nb = null_bound(g, NullModelKind.ER)
    sc = log_factor(g, il, NullModelKind.ER, nb)
    assert sc.log_factor == pytest.approx(nb.lower - sc.codelength.upper)
    assert sc.significant == (sc.log_factor >= 10)


def test_log_factor_uses_lower_and_upper(two_triangles):
    g = two_triangles
    il = InstanceList.build(g, TRI, [ordered(g, TRI, [0, 1, 2])])
    fake = IntervalBits(30.0, 25.0, 35.0, 0.95, False)
    sc = log_factor(g, il, NullModelKind.DS, fake, ScoreConfig(ds_samples=10, n_boot=200),
                    np.random.default_rng(0))
    assert sc.log_factor == pytest.approx(25.0 - sc.codelength.upper)
    sc = log_factor(g, il, NullModelKind.ER, fake, ScoreConfig(min_gain=-1e9))
    assert sc.significant


def test_instance_list_build(two_triangles):
    il = InstanceList.build(two_triangles, TRI, [(0, 1, 2), (3, 4, 5)])
    assert il.exdegrees == [exdegree(two_triangles, s) for s in il.instances] == [1, 1]
