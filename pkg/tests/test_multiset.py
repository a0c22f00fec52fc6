from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from orbitcount import multiset
from orbitcount.rngstream import stream_for


def test_make_state_validation():
    x = multiset.make_state([1, 2, 2], 3)
    assert x.dtype == np.int32
    with pytest.raises(ValueError):
        multiset.make_state([0, 1], 2)
    with pytest.raises(ValueError):
        multiset.make_state([1, 3], 2)
    with pytest.raises(ValueError):
        multiset.make_state([], 2)


def test_exact_counts():
    assert multiset.exact_multiset_count(1, 5) == 5
    assert multiset.exact_multiset_count(20, 2) == 21
    assert multiset.exact_multiset_count(20, 10) == 10015005
    assert multiset.exact_multiset_count(3, 1) == 1
    with pytest.raises(ValueError):
        multiset.exact_multiset_count(0, 2)


def test_statistic_values():
    assert multiset.multiset_statistic(np.array([1, 1]), 2) == Fraction(1, 2)
    assert multiset.multiset_statistic(np.array([1, 2]), 2) == 1
    assert multiset.multiset_statistic(np.array([2, 2, 2]), 3) == Fraction(1, 3)


def test_statistic_bounds():
    # n / (k * count) with 1 <= count <= n
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 5))
        x = rng.integers(1, k + 1, size=n)
        s = multiset.multiset_statistic(x, k)
        assert Fraction(1, k) <= s <= Fraction(n, k)


def test_step_preserves_shape_and_range():
    stream = stream_for(4)
    x = multiset.make_state([1, 1, 2, 3], 3)
    for _ in range(100):
        x = multiset.multiset_burnside_step(x, 3, stream)
        assert x.shape == (4,)
        assert x.min() >= 1 and x.max() <= 3


def test_step_n1_uniform_colors():
    # a single coordinate resamples its color uniformly each step
    stream = stream_for(11)
    x = multiset.make_state([1], 4)
    counts = Counter()
    for _ in range(8000):
        x = multiset.multiset_burnside_step(x, 4, stream)
        counts[int(x[0])] += 1
    assert set(counts) == {1, 2, 3, 4}
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_step_deterministic():
    xs = []
    for _ in range(2):
        stream = stream_for(99)
        x = multiset.make_state([1, 2, 1, 2, 3], 3)
        traj = []
        for _ in range(50):
            x = multiset.multiset_burnside_step(x, 3, stream)
            traj.append(tuple(int(v) for v in x))
        xs.append(traj)
    assert xs[0] == xs[1]


def test_run_level_counts_match_step_by_step():
    """run_level must reproduce the same chain as repeated single steps."""
    length, k, burn, samples = 5, 3, 7, 40
    counts = multiset.run_level(length, k, burn, samples, stream_for(2, 1))
    stream = stream_for(2, 1)
    x = np.ones(length, dtype=np.int32)
    manual = []
    for j in range(burn + samples):
        x = multiset.multiset_burnside_step(x, k, stream)
        if j >= burn:
            manual.append(int(np.count_nonzero(x == x[length - 1])))
    assert list(counts) == manual


def test_run_level_visits_stationary_distribution():
    # n=2, k=2: orbits {11}, {22}, {12, 21}; pi = (1/3, 1/3, 1/6, 1/6)
    counts = Counter()
    stream = stream_for(6)
    x = np.ones(2, dtype=np.int32)
    for _ in range(30_000):
        x = multiset.multiset_burnside_step(x, 2, stream)
        counts[tuple(int(v) for v in x)] += 1
    total = sum(counts.values())
    expect = {(1, 1): 1 / 3, (2, 2): 1 / 3, (1, 2): 1 / 6, (2, 1): 1 / 6}
    for state, want in expect.items():
        assert abs(counts[state] / total - want) < 0.02
