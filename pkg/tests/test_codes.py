import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdlmotif.codes import dm_codelength, log_binomial, log_factorial, log_multinomial, nat_codelength


def dm_sequential(seq, k, alpha=Fraction(1, 2)):
    """Exact DM probability as a running product."""
    p = Fraction(1)
    counts = [0] * k
    for i, s in enumerate(seq):
        p *= (counts[s] + alpha) / (i + alpha * k)
        counts[s] += 1
    return p


def test_binomial_examples():
    assert log_binomial(3, 3) == 0.0
    assert log_binomial(3, 2) == pytest.approx(math.log2(3), abs=1e-12)


def test_factorial_difference_against_integers():
    exact = math.log2(math.factorial(10) // math.factorial(6))
    assert log_factorial(10) - log_factorial(6) == pytest.approx(exact, abs=1e-9)
    assert exact == pytest.approx(12.29920, abs=1e-5)


@pytest.mark.parametrize("n", [0, 1, 2, 17, 1000, 10**6])
def test_log_factorial_precision(n):
    ref = float(mpmath.loggamma(mpmath.mpf(n) + 1) / mpmath.log(2))
    assert abs(log_factorial(n) - ref) < 1e-6


@pytest.mark.parametrize("n", [10**7, 10**8, 10**9])
def test_log_factorial_precision_large(n):
    # a double carries ~16 significant digits, so the absolute error at
    # ~3e10 bits is bounded by a few ulp rather than by 1e-6
    ref = mpmath.loggamma(mpmath.mpf(n) + 1) / mpmath.log(2)
    tol = max(1e-6, 4 * math.ulp(float(ref)))
    assert abs(log_factorial(n) - float(ref)) <= tol


@pytest.mark.parametrize("bad", [(-1, 0), (3, 4), (3, -1)])
def test_binomial_errors(bad):
    with pytest.raises(ValueError):
        log_binomial(*bad)


def test_factorial_and_multinomial_errors():
    with pytest.raises(ValueError):
        log_factorial(-1)
    with pytest.raises(ValueError):
        log_multinomial(5, [2, 2])


@given(st.integers(0, 10_000), st.data())
def test_binomial_symmetry_and_multinomial(n, data):
    k = data.draw(st.integers(0, n))
    assert log_binomial(n, k) == pytest.approx(log_binomial(n, n - k), abs=1e-6)
    assert log_multinomial(n, [k, n - k]) == pytest.approx(log_binomial(n, k), abs=1e-6)


def test_nat_examples():
    assert nat_codelength(0) == 1.0
    assert nat_codelength(1) == pytest.approx(math.log2(6))
    with pytest.raises(ValueError):
        nat_codelength(-1)


def test_nat_kraft():
    ks = np.arange(0, 10**6 + 1, dtype=np.float64)
    total = float(np.sum(1.0 / ((ks + 1) * (ks + 2))))
    assert total <= 1.0
    # telescoping sum: 1 - 1/(N+2)
    assert total == pytest.approx(1 - 1 / (10**6 + 2), abs=1e-12)
    assert sum(2 ** -nat_codelength(k) for k in range(100)) < sum(2 ** -nat_codelength(k) for k in range(1000)) < 1


def test_dm_examples():
    assert dm_codelength([0], 2) == pytest.approx(1.0)
    assert dm_codelength([0, 0], 2) == pytest.approx(-math.log2(0.5 * 0.75))
    assert dm_codelength([0, 0], 2) == pytest.approx(1.41504, abs=1e-5)
    assert dm_codelength([0, 1, 0], 3) == pytest.approx(dm_codelength([0, 0, 1], 3))
    assert dm_codelength([], 4) == 0.0
    with pytest.raises(ValueError):
        dm_codelength([3], 3)
    with pytest.raises(ValueError):
        dm_codelength([0], 0)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_dm_kraft_exact(k, length):
    total = Fraction(0)
    approx = 0.0
    for seq in itertools.product(range(k), repeat=length):
        total += dm_sequential(seq, k)
        approx += 2 ** -dm_codelength(seq, k)
    assert total == 1
    assert approx == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=100)
@given(st.integers(1, 6), st.data())
def test_dm_matches_sequential_and_is_exchangeable(k, data):
    seq = data.draw(st.lists(st.integers(0, k - 1), max_size=12))
    ref = -math.log2(dm_sequential(seq, k)) if seq else 0.0
    assert dm_codelength(seq, k) == pytest.approx(ref, abs=1e-9)
    perm = data.draw(st.permutations(seq))
    assert dm_codelength(perm, k) == pytest.approx(dm_codelength(seq, k), abs=1e-9)
