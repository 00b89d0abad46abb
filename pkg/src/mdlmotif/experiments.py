"""Experiment runners shared by ``scripts/`` and the acceptance tests."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .canon import CanonicalGraph, canonicalize, enumerate_connected, from_text
from .config import AnalyzeConfig, SamplingConfig, ScoreConfig
from .graph import DegreeSequence, Graph
from .motifcode import InstanceList, TemplateDelta, cap_rewired, log_factor, remove_overlaps
from .nullmodels import NullModelKind, ds_log_inverse_q, estimate_from_log_inverse, null_bound, _theta
from .codes import LOG2E
from .pipeline import analyze, motif_rng
from .sampler import run_sampling
from .synth import generate_injected, uniform_graph

#: motif used for the injection experiment (5 nodes, 6 links)
RECOVERY_MOTIF = "D`{"


def score_classes(g: Graph, buckets: dict[CanonicalGraph, InstanceList], classes: list[CanonicalGraph],
                  null: NullModelKind, seed: int, cfg: ScoreConfig = ScoreConfig()) -> dict[str, float]:
    """Log-factor of every class in ``classes``; classes never sampled get an empty instance list."""
    bound = null_bound(g, null, motif_rng(seed, b"null-bound"), cfg.ds_samples, cfg.ds_confidence, cfg.n_boot)
    out = {}
    for cf in classes:
        il = buckets.get(cf) or InstanceList(cf, [], [])
        dis = remove_overlaps(il)
        delta = TemplateDelta(g, cf, cap_rewired(dis, cfg.max_rewired).instances)
        sc = log_factor(g, il, null, bound, cfg, motif_rng(seed, cf.key, 1), disjoint=dis, delta=delta)
        out[cf.text()] = sc.log_factor
    return out


@dataclass
class RecoveryRun:
    n_instances: int
    seed: int
    scores: dict[str, float]
    injected: str
    seconds: float

    @property
    def injected_score(self) -> float:
        return self.scores[self.injected]


def recovery_run(n_instances: int, seed: int, motif: str = RECOVERY_MOTIF, n_samples: int = 5000,
                 null: NullModelKind = NullModelKind.ER) -> RecoveryRun:
    """One run of the injection experiment: generate, sample size-5 subgraphs, score all 21 classes."""
    t0 = time.perf_counter()
    mg = from_text(motif).to_graph()
    rng = np.random.default_rng(np.random.SeedSequence([seed, n_instances]))
    g = generate_injected(mg, n_instances, rng).graph
    k = mg.n
    sampled = run_sampling(g, n_samples, k, k, seed=seed)
    classes = enumerate_connected(k)
    scores = score_classes(g, sampled.buckets, classes, null, seed)
    return RecoveryRun(n_instances, seed, scores, canonicalize(mg)[0].text(), time.perf_counter() - t0)


def hypercompression_scores(n_graphs: int = 2000, n: int = 50, m: int = 100, motif: str = "Bw",
                            n_samples: int = 2000, seed: int = 0) -> np.ndarray:
    """Log-factors (ER null) of one fixed motif on graphs drawn from the ER null itself."""
    cf = from_text(motif)
    out = np.empty(n_graphs)
    for i in range(n_graphs):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        g = Graph.from_links(n, uniform_graph(n, m, rng), False)
        sampled = run_sampling(g, n_samples, cf.k, cf.k, seed=seed * 1_000_003 + i)
        out[i] = score_classes(g, sampled.buckets, [cf], NullModelKind.ER, seed + i)[cf.text()]
    return out


def ds_exactness(sequences, n_samples: int = 10_000, seed: int = 0) -> list[tuple[tuple[int, ...], float]]:
    """(D, point estimate in bits) for each sequence."""
    rng = np.random.default_rng(seed)
    res = []
    for d in sequences:
        y = ds_log_inverse_q(DegreeSequence.undirected(d), n_samples, rng)
        res.append((tuple(d), estimate_from_log_inverse(y, 0.95, 200, rng).point))
    return res


@dataclass
class CoverageResult:
    gold_bits: float
    trials: int
    covered: int
    widths: list[float] = field(default_factory=list)

    @property
    def coverage(self) -> float:
        return self.covered / self.trials


def bootstrap_coverage(n: int = 20, p: float = 0.3, gold_samples: int = 100_000, trials: int = 300,
                       n_samples: int = 10, confidence: float = 0.95, n_boot: int = 2000,
                       seed: int = 0) -> CoverageResult:
    """How often a small-sample interval covers a large-sample estimate of log2 |G_D|."""
    rng = np.random.default_rng(seed)
    pairs = np.array([(i, j) for i in range(n) for j in range(i + 1, n)])
    g = Graph.from_links(n, pairs[rng.random(len(pairs)) < p], False)
    d = DegreeSequence.undirected(g.out_degrees())
    gold = float(_theta(ds_log_inverse_q(d, gold_samples, rng))[0]) * LOG2E
    covered, widths = 0, []
    for _ in range(trials):
        est = estimate_from_log_inverse(ds_log_inverse_q(d, n_samples, rng), confidence, n_boot, rng)
        covered += est.lower <= gold <= est.upper
        widths.append(est.upper - est.lower)
    return CoverageResult(gold, trials, covered, widths)


def er_links(n: int, m: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.asarray(uniform_graph(n, m, rng), dtype=np.int64)


def scalability_config(n_samples: int = 100_000, threads: int = 1, seed: int = 0) -> AnalyzeConfig:
    return AnalyzeConfig(sampling=SamplingConfig(n_samples, 3, 6), score=ScoreConfig(),
                         nulls=(NullModelKind.EL, NullModelKind.ER), top=100, seed=seed, threads=threads)


def timed_analyze(g: Graph, cfg: AnalyzeConfig) -> tuple[dict, float]:
    t0 = time.perf_counter()
    rep = analyze(g, cfg, timings=False)
    return rep, time.perf_counter() - t0
