"""The symmetric group acting on k-colorings by permuting coordinates:
Burnside chain, level statistic, and the exact orbit count used for
validation.  States are length-n integer arrays with entries in 1..k
(colors are 1-based)."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import _purekernels
from ._backend import kernels
from .rngstream import RawStream


def make_state(entries, k: int) -> np.ndarray:
    x = np.asarray(entries, dtype=np.int32)
    if x.ndim != 1 or x.shape[0] < 1:
        raise ValueError("state must be a nonempty 1-d sequence")
    if np.any(x < 1) or np.any(x > k):
        raise ValueError(f"entries must lie in 1..{k}")
    return x


def multiset_burnside_step(x: np.ndarray, k: int, stream: RawStream) -> np.ndarray:
    """One two-phase Burnside step: a uniform stabilizer permutation
    (independent shuffle of each level set), then a fresh uniform color per
    cycle.  Always the pure-Python step; the compiled backend replays the
    identical draw sequence in its level runner."""
    return _purekernels.multiset_step(make_state(x, k), k, stream)


def multiset_statistic(x: np.ndarray, k: int) -> Fraction:
    """n / (k * #{j <= n : x_j = x_n}), the importance-sampling weight for
    the level whose tuples have length n."""
    x = np.asarray(x)
    n = x.shape[0]
    count = int(np.count_nonzero(x == x[n - 1]))
    return Fraction(n, k * count)


def run_level(length: int, k: int, burn_in: int, samples: int,
              stream: RawStream) -> np.ndarray:
    """Level chain from the all-ones state; returns the per-sample counts
    #{j : x_j = x_length} (the statistic is length / (k * count))."""
    return kernels.run_multiset_level(length, k, burn_in, samples, stream)


def exact_multiset_count(n: int, k: int) -> int:
    """Exact orbit count C(n+k-1, k-1), integer arithmetic throughout."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    return math.comb(n + k - 1, k - 1)
