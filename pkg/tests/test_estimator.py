import math
from fractions import Fraction

import numpy as np
import pytest

from orbitcount import estimator, multiset, oracle, pattern
from orbitcount.estimator import (ChainConfig, FailedLevelError,
                                  MultisetProblem, UnitriangularProblem,
                                  estimate_count, estimate_ratio_generic,
                                  estimate_ratio_unitriangular,
                                  ratio_fraction_from_exponents,
                                  unitriangular_values)
from orbitcount.rngstream import stream_for


def test_config_validation():
    ChainConfig()
    with pytest.raises(ValueError):
        ChainConfig(samples=0)
    with pytest.raises(ValueError):
        ChainConfig(burn_in=-1)
    with pytest.raises(ValueError):
        ChainConfig(worker_count=0)


def test_schedules():
    assert UnitriangularProblem(4, 2).schedule() == (1, 2, 3, 4, 5, 6)
    assert MultisetProblem(5, 3).schedule() == (1, 2, 3, 4)
    assert MultisetProblem(1, 3).schedule() == ()


def test_batch_std_error():
    vals = np.ones(40)
    assert estimator._batch_std_error(vals) == 0.0
    assert math.isnan(estimator._batch_std_error(np.ones(19)))
    # alternating 0/1 in 40 samples: every batch mean is 0.5
    alt = np.tile([0.0, 1.0], 20)
    assert estimator._batch_std_error(alt) == 0.0


def test_unitriangular_values():
    exps = np.array([-1, 0, 1, 2], dtype=np.int32)
    vals = unitriangular_values(exps, 2)
    assert list(vals) == [0.0, 2.0, 1.0, 0.5]


def test_ratio_fraction_matches_float_mean():
    exps = np.array([0, 1, -1, 2], dtype=np.int32)
    frac = ratio_fraction_from_exponents(exps, 2)
    assert frac == Fraction(7, 8)
    assert float(frac) == unitriangular_values(exps, 2).mean()


def test_ratio_fraction_matches_float_mean_random():
    rng = np.random.default_rng(0)
    for q in (2, 3):
        exps = rng.integers(-1, 4, size=500).astype(np.int32)
        frac = ratio_fraction_from_exponents(exps, q)
        mean = unitriangular_values(exps, q).mean()
        assert abs(float(frac) - mean) < 1e-12


def test_generic_estimator_constant_statistic():
    est = estimate_ratio_generic(
        initial_state=0,
        step=lambda x, stream: x,
        stabilizer_ratio=lambda x: 2.0,
        fiber_size=4.0,
        group_index_ratio=0.5,
        burn_in=5,
        samples=40,
        stream=stream_for(0),
        level=3,
    )
    assert est.value == 0.25
    assert est.std_error == 0.0
    assert est.level == 3
    assert est.samples_used == 40
    assert not est.failed


def test_generic_estimator_callable_fiber():
    stream = stream_for(1)
    est = estimate_ratio_generic(
        initial_state=1,
        step=lambda x, s: 1 + s.rand_below(2),
        stabilizer_ratio=lambda x: float(x),
        fiber_size=lambda x: float(x),
        group_index_ratio=3.0,
        burn_in=0,
        samples=100,
        stream=stream,
    )
    assert est.value == 3.0


def test_unitriangular_levels_match_oracle_n3():
    q = 2
    seq = pattern.nested_sequence(3)
    counts = oracle.nested_exact_counts(3, q)
    for m in (1, 2, 3):
        est = estimate_ratio_unitriangular(seq, m, q, 2000, 20000,
                                           stream_for(0, m))
        target = counts[m - 1] / counts[m]
        assert est.std_error > 0
        assert abs(est.value - target) < 4 * est.std_error + 1e-9


def test_estimate_count_u4_f2():
    est = estimate_count(UnitriangularProblem(4, 2),
                         ChainConfig(burn_in=20000, samples=20000))
    est.raise_if_failed()
    assert est.log_base == 2.0
    assert len(est.per_level) == 6
    assert abs(est.log_count - 4.0) < max(4 * est.std_error, 0.1)


def test_estimate_count_u3_f3():
    est = estimate_count(UnitriangularProblem(3, 3),
                         ChainConfig(burn_in=20000, samples=20000))
    target = math.log(11, 3)
    assert abs(est.log_count - target) < max(4 * est.std_error, 0.1)


def test_estimate_count_multiset():
    est = estimate_count(MultisetProblem(6, 3),
                         ChainConfig(burn_in=20, samples=20000))
    truth = math.log(multiset.exact_multiset_count(6, 3))
    assert est.valid
    assert abs(est.log_count - truth) < 0.15


def test_estimate_count_multiset_trivial_length():
    est = estimate_count(MultisetProblem(1, 5), ChainConfig(samples=1))
    assert est.valid
    assert est.per_level == ()
    assert est.log_count == pytest.approx(math.log(5))


def test_worker_count_bit_identical():
    config1 = ChainConfig(burn_in=200, samples=400, master_seed=17,
                          worker_count=1)
    config4 = ChainConfig(burn_in=200, samples=400, master_seed=17,
                          worker_count=4)
    a = estimate_count(UnitriangularProblem(4, 2), config1)
    b = estimate_count(UnitriangularProblem(4, 2), config4)
    assert a.per_level == b.per_level
    assert a.log_count == b.log_count
    assert a.std_error == b.std_error


def test_level_schedule_subset():
    config = ChainConfig(burn_in=100, samples=100, master_seed=3,
                         level_schedule=(2, 5))
    est = estimate_count(UnitriangularProblem(4, 2), config)
    assert tuple(r.level for r in est.per_level) == (2, 5)
    full = estimate_count(UnitriangularProblem(4, 2),
                          ChainConfig(burn_in=100, samples=100, master_seed=3))
    by_level = {r.level: r for r in full.per_level}
    # per-level streams depend only on (seed, level), not on the schedule
    assert est.per_level == (by_level[2], by_level[5])


def _find_failing_seed():
    # one sample at n=2, q=3: the statistic is zero whenever the sampled
    # element has a nonzero corner entry, which happens for most seeds
    for seed in range(64):
        config = ChainConfig(burn_in=0, samples=1, master_seed=seed)
        est = estimate_count(UnitriangularProblem(2, 3), config)
        if not est.valid:
            return seed, est
    raise AssertionError("no failing seed found in range")


def test_failed_level_reporting():
    seed, est = _find_failing_seed()
    assert math.isnan(est.log_count)
    assert math.isnan(est.std_error)
    failed = est.failed_levels
    assert failed and failed[0].value == 0.0
    assert failed[0].zero_fraction == 1.0
    with pytest.raises(FailedLevelError, match="all statistics zero"):
        est.raise_if_failed()


def test_single_sample_std_error_is_nan():
    for seed in range(64):
        config = ChainConfig(burn_in=0, samples=1, master_seed=seed)
        est = estimate_count(UnitriangularProblem(2, 3), config)
        if est.valid:
            assert math.isnan(est.per_level[0].std_error)
            assert math.isfinite(est.log_count)
            assert math.isnan(est.std_error) or est.std_error == 0.0
            return
    raise AssertionError("no valid single-sample seed found")


def test_unknown_problem_type():
    with pytest.raises(TypeError):
        estimate_count(object(), ChainConfig())


# ---------------------------------------------------------------------------
# exact kernels on enumerable actions
# ---------------------------------------------------------------------------

def _kernel_checks(action):
    K = estimator.exact_kernel(action)
    pi = estimator.stationary_distribution(action)
    assert np.allclose(K.sum(axis=1), 1.0, atol=1e-12)
    assert pi.sum() == pytest.approx(1.0, abs=1e-12)
    # stationarity and detailed balance
    assert np.allclose(pi @ K, pi, atol=1e-12)
    assert np.allclose(pi[:, None] * K, (pi[:, None] * K).T, atol=1e-12)
    orbits = estimator.orbit_partition(action)
    L = estimator.lumped_kernel(K, orbits)
    u = np.full(len(orbits), 1.0 / len(orbits))
    assert np.allclose(u @ L, u, atol=1e-12)
    return K, orbits


def test_exact_kernel_conjugation_u3_f2():
    action = oracle.conjugation_action(pattern.ClosedPositionSet.full(3), 2)
    _, orbits = _kernel_checks(action)
    assert len(orbits) == 5


def test_exact_kernel_multiset():
    action = oracle.multiset_action(3, 2)
    _, orbits = _kernel_checks(action)
    assert len(orbits) == multiset.exact_multiset_count(3, 2)


def test_exact_kernel_guard():
    action = oracle.multiset_action(3, 2)
    with pytest.raises(estimator.GuardExceededError):
        estimator.exact_kernel(action, guard=3)


def test_stationary_matches_orbit_sizes():
    action = oracle.multiset_action(2, 2)
    pi = estimator.stationary_distribution(action)
    idx = action.index()
    assert pi[idx[(1, 1)]] == pytest.approx(1 / 3)
    assert pi[idx[(1, 2)]] == pytest.approx(1 / 6)
