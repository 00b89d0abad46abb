"""Null models: Erdos-Renyi (ER), edge list (EL) and degree sequence (DS).

Each model provides a parametrized codelength (parameters known), a bound
(the maximum-likelihood parametrized codelength, which lower-bounds every
two-part code built on the model) and a complete two-part codelength.

The DS model needs log |G_D|, the number of simple graphs with degree
sequence D. It is estimated by sequential importance sampling: each draw
returns a graph together with its probability q, and E[1/q] = |G_D|. With
Y = ln(1/q) treated as normal, exp(mean(Y) + var(Y)/2) is the ML estimate of
E[1/q]; its uncertainty comes from a parametric bootstrap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow
from scipy.special import gammaln

from . import _kernels
from .codes import (LOG2E, empirical_entropy_bits, log_binomial, log_factorial, nat_codelength,
                    naturals_header)
from .graph import DegreeSequence, Graph, degree_sequence


class NullModelKind(str, enum.Enum):
    ER = "er"
    EL = "el"
    DS = "ds"


@dataclass(frozen=True)
class IntervalBits:
    """A codelength with a two-sided confidence interval (degenerate when exact)."""

    point: float
    lower: float
    upper: float
    confidence: float = 1.0
    exact: bool = True

    @classmethod
    def exact_value(cls, bits: float) -> IntervalBits:
        return cls(bits, bits, bits, 1.0, True)

    def __add__(self, other: IntervalBits | float) -> IntervalBits:
        if not isinstance(other, IntervalBits):
            other = IntervalBits.exact_value(float(other))
        if self.exact:
            conf = other.confidence
        elif other.exact:
            conf = self.confidence
        else:
            conf = min(self.confidence, other.confidence)
        return IntervalBits(self.point + other.point, self.lower + other.lower, self.upper + other.upper,
                            conf, self.exact and other.exact)

    __radd__ = __add__


class NotGraphicalError(ValueError):
    pass


# -- Erdos-Renyi -----------------------------------------------------------

def max_links(n: int, directed: bool) -> int:
    return n * (n - 1) if directed else n * (n - 1) // 2


def er_parametrized(n: int, m: int, directed: bool = False) -> float:
    mm = max_links(n, directed)
    if m < 0 or m > mm:
        raise ValueError(f"m={m} outside [0, {mm}] for n={n}")
    return log_binomial(mm, m)


def er_bound(g: Graph) -> float:
    return er_parametrized(g.n, g.m, g.directed)


def er_complete_nm(n: int, m: int, directed: bool = False) -> float:
    return nat_codelength(n) + math.log2(max_links(n, directed) + 1) + er_parametrized(n, m, directed)


def er_complete(g: Graph) -> float:
    return er_complete_nm(g.n, g.m, g.directed)


# -- edge list -------------------------------------------------------------

def _hist(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    return np.bincount(values) if len(values) else np.zeros(1, np.int64)


def _sum_logfact_hist(hist: np.ndarray) -> float:
    v = np.arange(len(hist), dtype=np.float64)
    return float((np.asarray(hist, np.float64) * gammaln(v + 1.0)).sum()) * LOG2E


def el_parametrized_hist(m: int, directed: bool, hists: list[np.ndarray]) -> float:
    """EL codelength from degree histograms (one per direction)."""
    if directed:
        return log_factorial(m) - sum(_sum_logfact_hist(h) for h in hists)
    return log_factorial(2 * m) - log_factorial(m) - m - _sum_logfact_hist(hists[0])


def _check_consistent(d: DegreeSequence, m: int) -> None:
    for seq in d.sequences():
        if len(seq) and seq.min() < 0:
            raise ValueError("negative degree")
    if d.directed:
        if int(d.in_degrees.sum()) != m or int(d.out_degrees.sum()) != m:
            raise ValueError("degree sums do not match m")
    elif int(d.degrees.sum()) != 2 * m:
        raise ValueError("degree sum does not equal 2m")


def el_parametrized(d: DegreeSequence, m: int | None = None) -> float:
    m = d.m if m is None else m
    _check_consistent(d, m)
    return el_parametrized_hist(m, d.directed, [_hist(s) for s in d.sequences()])


def deg_bound(degrees: np.ndarray) -> float:
    """Empirical-entropy codelength of a degree list: sum_i -log2(f(D_i)/|D|)."""
    degrees = np.asarray(degrees, dtype=np.int64)
    if len(degrees) == 0:
        raise ValueError("empty degree list")
    return empirical_entropy_bits(_hist(degrees))


def _deg_bound_all(d: DegreeSequence) -> float:
    return sum(deg_bound(s) for s in d.sequences())


def degree_header_hist(n: int, hists: list[np.ndarray]) -> float:
    """Complete-code parameter cost: L_N(n) + per direction [L_N(max) + DM(D, max + 1)]."""
    return nat_codelength(n) + sum(naturals_header(h) for h in hists)


def el_bound(g: Graph) -> float:
    d = degree_sequence(g)
    return _deg_bound_all(d) + el_parametrized(d, g.m)


def el_complete_hist(n: int, m: int, directed: bool, hists: list[np.ndarray]) -> float:
    return degree_header_hist(n, hists) + el_parametrized_hist(m, directed, hists)


def el_complete(g: Graph) -> float:
    d = degree_sequence(g)
    return el_complete_hist(g.n, g.m, g.directed, [_hist(s) for s in d.sequences()])


# -- degree sequence: graphicality ----------------------------------------

def is_graphical(d: DegreeSequence) -> bool:
    """Erdos-Gallai (undirected) or Fulkerson-Chen-Anstee (directed)."""
    if d.directed:
        return fca_graphical(d.in_degrees, d.out_degrees)
    return bool(_kernels.graphical(np.ascontiguousarray(d.degrees, dtype=np.int64)))


def fca_graphical(in_deg: np.ndarray, out_deg: np.ndarray) -> bool:
    a = np.asarray(out_deg, np.int64)
    b = np.asarray(in_deg, np.int64)
    if len(a) != len(b) or (len(a) and (a.min() < 0 or b.min() < 0)) or a.sum() != b.sum():
        return False
    n = len(a)
    # sort pairs by out-degree descending, in-degree descending as tie-break
    order = np.lexsort((-b, -a))
    a, b = a[order], b[order]
    for k in range(1, n + 1):
        lhs = int(a[:k].sum())
        rhs = int(np.minimum(b[:k], k - 1).sum() + np.minimum(b[k:], k).sum())
        if lhs > rhs:
            return False
    return True


# -- degree sequence: sampling --------------------------------------------

@dataclass
class DsSample:
    graph: Graph
    log_q: float


def _require_graphical(d: DegreeSequence) -> None:
    if not is_graphical(d):
        raise NotGraphicalError("degree sequence is not graphical")


def ds_sample(d: DegreeSequence, rng: np.random.Generator) -> DsSample:
    """One draw of the sequential sampler, with the graph it built."""
    _require_graphical(d)
    if d.directed:
        links, lq = _sample_directed(d.in_degrees, d.out_degrees, rng)
        return DsSample(Graph.from_links(d.n, links, True), lq)
    deg = np.ascontiguousarray(d.degrees, dtype=np.int64)
    edges = np.empty((max(d.m, 1), 2), dtype=np.int64)
    lq, e = _kernels.sample_undirected(deg, rng.random(d.m), edges)
    if e != d.m:
        raise RuntimeError("sampler got stuck on a graphical sequence")
    return DsSample(Graph.from_links(d.n, edges[:e], False), float(lq))


def ds_log_inverse_q(d: DegreeSequence, n_samples: int, rng: np.random.Generator) -> np.ndarray:
    """Y_i = ln(1 / q_i) for ``n_samples`` independent draws (graphs discarded)."""
    _require_graphical(d)
    out = np.empty(n_samples)
    if d.directed:
        for s in range(n_samples):
            out[s] = -_sample_directed(d.in_degrees, d.out_degrees, rng)[1]
        return out
    deg = np.ascontiguousarray(d.degrees, dtype=np.int64)
    if d.m == 0:
        return np.zeros(n_samples)
    # keep only nodes that carry links; isolated ones never take part
    deg = deg[deg > 0]
    edges = np.empty((d.m, 2), dtype=np.int64)
    for s in range(n_samples):
        lq, e = _kernels.sample_undirected(deg, rng.random(d.m), edges)
        if e != d.m:
            raise RuntimeError("sampler got stuck on a graphical sequence")
        out[s] = -lq
    return out


def _flow_feasible(out_res: np.ndarray, in_res: np.ndarray, hub: int, hub_forbidden: set[int]) -> bool:
    """Can the residual degrees be realised, given the hub may not use ``hub_forbidden``?"""
    need = int(out_res.sum())
    if need != int(in_res.sum()):
        return False
    if need == 0:
        return True
    src = np.flatnonzero(out_res)
    dst = np.flatnonzero(in_res)
    n_s, n_d = len(src), len(dst)
    s, t = 0, 1 + n_s + n_d
    rows, cols, caps = [], [], []
    for a, u in enumerate(src):
        rows.append(s); cols.append(1 + a); caps.append(int(out_res[u]))
        for b, v in enumerate(dst):
            if v == u or (u == hub and v in hub_forbidden):
                continue
            rows.append(1 + a); cols.append(1 + n_s + b); caps.append(1)
    for b, v in enumerate(dst):
        rows.append(1 + n_s + b); cols.append(t); caps.append(int(in_res[v]))
    size = t + 1
    cap = csr_matrix((np.asarray(caps, np.int32), (rows, cols)), shape=(size, size))
    return maximum_flow(cap, s, t).flow_value == need


def _sample_directed(in_deg: np.ndarray, out_deg: np.ndarray, rng: np.random.Generator):
    """Directed analogue: hubs by minimal residual out-degree, targets weighted by residual in-degree.

    Feasibility of each candidate is decided exactly by a max-flow on the
    residual bipartite realisation problem, so the sampler never gets stuck.
    Candidates with equal (residual in, residual out) are interchangeable, so
    one check per such class suffices.
    """
    out_r = np.asarray(out_deg, np.int64).copy()
    in_r = np.asarray(in_deg, np.int64).copy()
    n = len(out_r)
    links: list[tuple[int, int]] = []
    log_q = 0.0
    while True:
        pos = np.flatnonzero(out_r > 0)
        if len(pos) == 0:
            break
        hub = int(pos[np.argmin(out_r[pos])])
        log_q += math.lgamma(out_r[hub] + 1)
        chosen: set[int] = set()
        while out_r[hub] > 0:
            cands = [v for v in range(n) if v != hub and v not in chosen and in_r[v] > 0]
            verdict: dict[tuple[int, int], bool] = {}
            valid = []
            for v in cands:
                cls = (int(in_r[v]), int(out_r[v]))
                if cls not in verdict:
                    out_r[hub] -= 1
                    in_r[v] -= 1
                    verdict[cls] = _flow_feasible(out_r, in_r, hub, chosen | {v})
                    out_r[hub] += 1
                    in_r[v] += 1
                if verdict[cls]:
                    valid.append(v)
            if not valid:
                raise RuntimeError("directed sampler got stuck on a graphical sequence")
            w = in_r[valid].astype(np.float64)
            total = w.sum()
            j = valid[int(np.searchsorted(np.cumsum(w), rng.random() * total, side="right"))]
            log_q += math.log(in_r[j] / total)
            links.append((hub, j))
            chosen.add(j)
            out_r[hub] -= 1
            in_r[j] -= 1
    return links, log_q


# -- estimation ------------------------------------------------------------

def _theta(y: np.ndarray, axis: int = -1) -> tuple[np.ndarray, np.ndarray]:
    mean = y.mean(axis=axis)
    var = y.var(axis=axis)
    return mean + 0.5 * var, var


def _se(var: np.ndarray, n: int) -> np.ndarray:
    # delta-method standard error of mean + var/2 under normality
    return np.sqrt(var / n + var * var / (2.0 * (n - 1)))


def bootstrap_ci(y, confidence: float = 0.95, n_boot: int = 2000,
                 rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Parametric bootstrap interval for theta = mean(Y) + var(Y)/2 (ML variance).

    Replicates are drawn from Normal(mean, sd). The interval is symmetric
    around theta; its half-width is the ``confidence`` quantile of the
    studentised replicate deviations |theta* - theta| / se*, rescaled by se.
    """
    y = np.asarray(y, dtype=np.float64)
    n = len(y)
    if n < 2:
        raise ValueError("bootstrap needs at least two values")
    rng = np.random.default_rng() if rng is None else rng
    theta, var = _theta(y)
    theta, var = float(theta), float(var)
    if var == 0.0:
        return theta, theta
    sims = y.mean() + math.sqrt(var) * rng.standard_normal((n_boot, n))
    t_star, v_star = _theta(sims, axis=1)
    se_star = _se(v_star, n)
    dev = np.abs(t_star - theta) / np.where(se_star > 0, se_star, np.inf)
    half = float(np.quantile(dev, confidence)) * float(_se(np.float64(var), n))
    return theta - half, theta + half


def estimate_from_log_inverse(y: np.ndarray, confidence: float, n_boot: int,
                              rng: np.random.Generator) -> IntervalBits:
    y = np.asarray(y, dtype=np.float64)
    if np.all(y == y[0]):
        bits = max(float(y[0]) * LOG2E, 0.0) + 0.0  # no negative zero
        return IntervalBits(bits, bits, bits, confidence, True)
    theta, _ = _theta(y)
    lo, hi = bootstrap_ci(y, confidence, n_boot, rng)
    # log |G_D| >= 0 for any graphical D
    point = max(float(theta) * LOG2E, 0.0) + 0.0
    lower = min(max(lo, 0.0) * LOG2E, point)
    upper = max(hi * LOG2E, point)
    return IntervalBits(point, lower, upper, confidence, False)


def ds_estimate(d: DegreeSequence, n_samples: int = 40, confidence: float = 0.95,
                rng: np.random.Generator | None = None, n_boot: int = 2000) -> IntervalBits:
    """Estimate of log2 |G_D| with a bootstrap interval."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    rng = np.random.default_rng() if rng is None else rng
    return estimate_from_log_inverse(ds_log_inverse_q(d, n_samples, rng), confidence, n_boot, rng)


def combined_ds_motif_estimate(d_motif: DegreeSequence, d_template: DegreeSequence, n_samples: int = 40,
                               confidence: float = 0.95, rng: np.random.Generator | None = None,
                               n_boot: int = 2000) -> IntervalBits:
    """One interval for log2 |G_{D'}| + log2 |G_D| from paired draws of both samplers."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    rng = np.random.default_rng() if rng is None else rng
    y = ds_log_inverse_q(d_motif, n_samples, rng) + ds_log_inverse_q(d_template, n_samples, rng)
    return estimate_from_log_inverse(y, confidence, n_boot, rng)


def ds_bound(g: Graph, n_samples: int = 40, confidence: float = 0.95,
             rng: np.random.Generator | None = None, n_boot: int = 2000) -> IntervalBits:
    """B^deg + estimated log |G_D|; callers testing a motif use ``.lower``."""
    d = degree_sequence(g)
    return _deg_bound_all(d) + ds_estimate(d, n_samples, confidence, rng, n_boot)


def ds_header(d: DegreeSequence) -> float:
    return degree_header_hist(d.n, [_hist(s) for s in d.sequences()])


def ds_complete(g: Graph, n_samples: int = 40, confidence: float = 0.95,
                rng: np.random.Generator | None = None, n_boot: int = 2000) -> IntervalBits:
    """Degree-sequence header + estimated log |G_D|; inside a motif code use ``.upper``."""
    d = degree_sequence(g)
    return ds_header(d) + ds_estimate(d, n_samples, confidence, rng, n_boot)


def null_bound(g: Graph, kind: NullModelKind, rng: np.random.Generator | None = None,
               n_samples: int = 40, confidence: float = 0.95, n_boot: int = 2000) -> IntervalBits:
    kind = NullModelKind(kind)
    if kind is NullModelKind.ER:
        return IntervalBits.exact_value(er_bound(g))
    if kind is NullModelKind.EL:
        return IntervalBits.exact_value(el_bound(g))
    return ds_bound(g, n_samples, confidence, rng, n_boot)


def null_complete(g: Graph, kind: NullModelKind, rng: np.random.Generator | None = None,
                  n_samples: int = 40, confidence: float = 0.95, n_boot: int = 2000) -> IntervalBits:
    kind = NullModelKind(kind)
    if kind is NullModelKind.ER:
        return IntervalBits.exact_value(er_complete(g))
    if kind is NullModelKind.EL:
        return IntervalBits.exact_value(el_complete(g))
    return ds_complete(g, n_samples, confidence, rng, n_boot)
