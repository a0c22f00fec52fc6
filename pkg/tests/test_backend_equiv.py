"""Compiled and pure-Python kernels must be bit-identical: same outputs
and the same random-word consumption for every chain runner."""

import numpy as np
import pytest

from orbitcount import _purekernels
from orbitcount.pattern import level_pair
from orbitcount.rngstream import stream_for

_kernels = pytest.importorskip("orbitcount._kernels")


def _random_matrix(rng, rows, cols, p):
    return rng.integers(0, p, size=(rows, cols), dtype=np.int64).astype(np.uint8)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rref_and_nullspace_identical(p):
    rng = np.random.default_rng(p * 100)
    for _ in range(200):
        rows = int(rng.integers(1, 20))
        cols = int(rng.integers(1, 20))
        M = _random_matrix(rng, rows, cols, p)
        Rc, rc, pc = _kernels.rref(M, p)
        Rp, rp, pp = _purekernels.rref(M, p)
        assert rc == rp
        assert list(pc) == list(pp)
        assert np.array_equal(Rc, Rp)
        assert np.array_equal(_kernels.nullspace(M, p),
                              _purekernels.nullspace(M, p))


@pytest.mark.parametrize("n,p", [(4, 2), (4, 3), (5, 2)])
def test_pattern_nullspace_identical(n, p):
    from orbitcount.pattern import ClosedPositionSet

    rng = np.random.default_rng(n + p)
    J = ClosedPositionSet.full(n)
    jr, jc = J.rows_cols
    for _ in range(100):
        x = np.eye(n, dtype=np.uint8)
        x[jr, jc] = rng.integers(0, p, size=len(J))
        a = _kernels.pattern_nullspace(x, J.var_index, len(J), p)
        b = _purekernels.pattern_nullspace(x, J.var_index, len(J), p)
        assert np.array_equal(a, b)


@pytest.mark.parametrize("n,p,m", [(4, 2, 4), (4, 3, 5), (5, 2, 7), (3, 2, 1)])
def test_run_pattern_level_identical(n, p, m):
    Jm, Jprev, (ar, ac) = level_pair(n, m)
    jr, jc = Jm.rows_cols
    args = (n, p, Jm.var_index, jr, jc, Jprev.var_index, len(Jprev),
            ar - 1, ac - 1, 50, 300)
    a = _kernels.run_pattern_level(*args, stream_for(42, m))
    b = _purekernels.run_pattern_level(*args, stream_for(42, m))
    assert a.dtype == b.dtype
    assert np.array_equal(a, b)


def test_run_histogram_chain_identical():
    from orbitcount.pattern import ClosedPositionSet

    J = ClosedPositionSet.full(4)
    jr, jc = J.rows_cols
    a = _kernels.run_histogram_chain(4, 2, J.var_index, jr, jc, 500,
                                     stream_for(7))
    b = _purekernels.run_histogram_chain(4, 2, J.var_index, jr, jc, 500,
                                         stream_for(7))
    assert np.array_equal(a, b)


@pytest.mark.parametrize("length,k", [(1, 2), (5, 3), (8, 2), (6, 6)])
def test_run_multiset_level_identical(length, k):
    a = _kernels.run_multiset_level(length, k, 30, 400, stream_for(9, length))
    b = _purekernels.run_multiset_level(length, k, 30, 400, stream_for(9, length))
    assert np.array_equal(a, b)


def test_word_consumption_synchronized():
    """After identical runs, both streams are at the same position: the
    next raw word agrees."""
    sa, sb = stream_for(13), stream_for(13)
    _kernels.run_multiset_level(5, 3, 10, 50, sa)
    _purekernels.run_multiset_level(5, 3, 10, 50, sb)
    assert sa.next_word() == sb.next_word()

    sa, sb = stream_for(14), stream_for(14)
    Jm, Jprev, (ar, ac) = level_pair(4, 5)
    jr, jc = Jm.rows_cols
    args = (4, 3, Jm.var_index, jr, jc, Jprev.var_index, len(Jprev),
            ar - 1, ac - 1, 10, 50)
    _kernels.run_pattern_level(*args, sa)
    _purekernels.run_pattern_level(*args, sb)
    assert sa.next_word() == sb.next_word()


def test_backend_env_override():
    import os
    import subprocess
    import sys

    code = "import orbitcount; print(orbitcount.backend_name())"
    for forced in ("python", "compiled"):
        env = dict(os.environ, ORBITCOUNT_BACKEND=forced)
        out = subprocess.run(
            [sys.executable, "-c", code],
            env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == forced
