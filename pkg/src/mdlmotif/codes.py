"""Elementary codelengths, in bits.

Codes are identified with probability distributions, so every function here
returns -log2 of a probability (or log2 of a count) as a float; no bitstream
is ever produced.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2

#: Dirichlet concentration used for every DM code.
ALPHA = 0.5

#: Tolerance when comparing codelengths produced by different models.
EPS_BITS = 1e-3


def log_factorial(n: int) -> float:
    if n < 0:
        raise ValueError(f"log_factorial of negative {n}")
    return math.lgamma(n + 1) / LN2


def log_binomial(n: int, k: int) -> float:
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"invalid binomial ({n} choose {k})")
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / LN2


def log_multinomial(n: int, parts: Sequence[int]) -> float:
    parts = list(parts)
    if any(p < 0 for p in parts) or sum(parts) != n:
        raise ValueError("multinomial parts must be non-negative and sum to n")
    return (math.lgamma(n + 1) - sum(math.lgamma(p + 1) for p in parts)) / LN2


def sum_log_factorials(counts: np.ndarray) -> float:
    """sum_i log2(counts_i!) for an integer array."""
    counts = np.asarray(counts, dtype=np.float64)
    return float(gammaln(counts + 1.0).sum()) * LOG2E


def nat_codelength(k: int) -> float:
    """Universal code for k >= 0: p(k) = 1 / ((k + 1)(k + 2)).

    The underlying distribution 1/(n(n+1)) lives on n >= 1; the shift by one
    makes 0 encodable.
    """
    if k < 0:
        raise ValueError("nat_codelength needs k >= 0")
    return math.log2((k + 1) * (k + 2))


def dm_counts_codelength(counts: np.ndarray | Sequence[int], alphabet_size: int, alpha: float = ALPHA) -> float:
    """DM codelength of any sequence with the given symbol histogram.

    Exchangeability means only the histogram matters:
    log Gamma(N + K a) - log Gamma(K a) - sum_s [log Gamma(f_s + a) - log Gamma(a)].
    """
    counts = np.asarray(counts, dtype=np.float64)
    if len(counts) > alphabet_size:
        if np.any(counts[alphabet_size:]):
            raise ValueError("symbol outside alphabet")
        counts = counts[:alphabet_size]
    total = counts.sum()
    if total == 0:
        return 0.0
    nz = counts[counts > 0]
    ka = alphabet_size * alpha
    nats = (math.lgamma(total + ka) - math.lgamma(ka)
            - float((gammaln(nz + alpha) - math.lgamma(alpha)).sum()))
    return max(nats, 0.0) * LOG2E


def dm_codelength(symbols: Iterable[int], alphabet_size: int, alpha: float = ALPHA) -> float:
    """Dirichlet-multinomial code for a sequence over [0, alphabet_size)."""
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be >= 1")
    s = np.asarray(list(symbols) if not isinstance(symbols, np.ndarray) else symbols, dtype=np.int64)
    if s.size == 0:
        return 0.0
    if s.min() < 0 or s.max() >= alphabet_size:
        raise ValueError("symbol outside alphabet")
    return dm_counts_codelength(np.bincount(s, minlength=alphabet_size), alphabet_size, alpha)


def naturals_header(values_hist: np.ndarray) -> float:
    """Code a sequence of naturals from its histogram: L_N(max) + DM over [0, max]."""
    nz = np.flatnonzero(values_hist)
    if len(nz) == 0:
        return nat_codelength(0)
    top = int(nz[-1])
    return nat_codelength(top) + dm_counts_codelength(values_hist[:top + 1], top + 1)


def empirical_entropy_bits(values_hist: np.ndarray) -> float:
    """sum_i -log2(f(x_i)/N): the best any i.i.d. code on the values can do."""
    h = np.asarray(values_hist, dtype=np.float64)
    h = h[h > 0]
    total = h.sum()
    if total == 0:
        return 0.0
    return float(-(h * np.log2(h / total)).sum())
