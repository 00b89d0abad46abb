"""Run configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .nullmodels import NullModelKind


@dataclass(frozen=True)
class ScoreConfig:
    """Knobs for scoring one motif against one null model."""

    alpha: float = 0.001
    min_gain: float | None = None  # bits; overrides alpha when set
    search_depth: int = 0  # 0 = full Fibonacci search
    max_rewired: int = 500_000
    ds_samples: int = 40
    ds_confidence: float = 0.95
    n_boot: int = 2000

    @property
    def threshold_bits(self) -> float:
        if self.min_gain is not None:
            return float(self.min_gain)
        return -math.log2(self.alpha)


@dataclass(frozen=True)
class SamplingConfig:
    n_samples: int = 1_000_000
    size_min: int = 3
    size_max: int = 6
    max_restarts: int = 100
    chunk: int = 10_000


@dataclass(frozen=True)
class AnalyzeConfig:
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    score: ScoreConfig = field(default_factory=ScoreConfig)
    nulls: tuple[NullModelKind, ...] = (NullModelKind.ER, NullModelKind.EL, NullModelKind.DS)
    top: int = 100
    seed: int = 0
    threads: int = 1


@dataclass(frozen=True)
class SynthConfig:
    n_total: int = 5000
    m_total: int = 10000
    n_instances: int = 0
    degree_cap: int = 5
    n_labels: int | None = None  # defaults to the motif size
    max_retries: int = 50
