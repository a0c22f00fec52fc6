"""The counting engine.

Per-level importance-sampling ratio estimates from Burnside-chain samples,
combined into a log-domain product estimate of the orbit count.  Levels
are independent tasks with deterministically derived seeds, so results are
bit-identical for any worker count.  Standard errors use batch means
(20 equal batches) because chain samples are autocorrelated; the aggregate
error assumes independent levels and is labeled approximate.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import multiset, pattern
from ._backend import kernels
from .rngstream import RawStream, stream_for

_NUM_BATCHES = 20


class FailedLevelError(RuntimeError):
    """A level estimate came out exactly zero; the product is undefined."""

    def __init__(self, estimate: "RatioEstimate"):
        self.estimate = estimate
        super().__init__(
            f"level {estimate.level} failed: all statistics zero "
            f"(zero_fraction={estimate.zero_fraction:.3f}, "
            f"samples={estimate.samples_used})"
        )


class GuardExceededError(RuntimeError):
    """An enumeration would exceed the configured size guard."""


@dataclass(frozen=True)
class ChainConfig:
    burn_in: int = 100_000
    samples: int = 100_000
    master_seed: int = 0
    level_schedule: tuple[int, ...] | None = None
    worker_count: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


@dataclass(frozen=True)
class RatioEstimate:
    level: int
    value: float
    std_error: float  # nan when fewer samples than batches
    zero_fraction: float
    samples_used: int

    @property
    def failed(self) -> bool:
        return self.value == 0.0


@dataclass(frozen=True)
class LogCountEstimate:
    log_count: float  # in base log_base; nan when invalid
    log_base: float
    std_error: float  # first-order propagation, independence assumed
    per_level: tuple[RatioEstimate, ...]
    valid: bool
    elapsed: float

    @property
    def failed_levels(self) -> tuple[RatioEstimate, ...]:
        return tuple(r for r in self.per_level if r.failed)

    def raise_if_failed(self) -> None:
        if not self.valid:
            raise FailedLevelError(self.failed_levels[0])


@dataclass(frozen=True)
class UnitriangularProblem:
    n: int
    q: int

    def schedule(self) -> tuple[int, ...]:
        return tuple(range(1, self.n * (self.n - 1) // 2 + 1))


@dataclass(frozen=True)
class MultisetProblem:
    n: int
    k: int

    def schedule(self) -> tuple[int, ...]:
        return tuple(range(1, self.n))


# ---------------------------------------------------------------------------
# per-level reduction
# ---------------------------------------------------------------------------

def _batch_std_error(values: np.ndarray) -> float:
    n = values.shape[0]
    if n < _NUM_BATCHES:
        return math.nan
    size = n // _NUM_BATCHES
    batches = values[: size * _NUM_BATCHES].reshape(_NUM_BATCHES, size)
    means = batches.mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(_NUM_BATCHES))


def _finish(values: np.ndarray, level: int) -> RatioEstimate:
    return RatioEstimate(
        level=level,
        value=float(values.mean()),
        std_error=_batch_std_error(values),
        zero_fraction=float(np.count_nonzero(values == 0.0) / values.shape[0]),
        samples_used=int(values.shape[0]),
    )


def unitriangular_values(exponents: np.ndarray, q: int) -> np.ndarray:
    """Per-sample statistic q * K: q^(1-t) for exponent t >= 0, 0 for -1."""
    vals = np.zeros(exponents.shape[0], dtype=np.float64)
    mask = exponents >= 0
    vals[mask] = float(q) ** (1.0 - exponents[mask])
    return vals


def ratio_fraction_from_exponents(exponents, q: int) -> Fraction:
    """Exact rational value of Eq-hat: (q/N) * sum q^-t over the samples."""
    N = len(exponents)
    total = sum((Fraction(1, q ** int(t)) for t in exponents if t >= 0), Fraction(0))
    return Fraction(q, N) * total


def estimate_ratio_unitriangular(seq: pattern.NestedSequence, m: int, q: int,
                                 burn_in: int, samples: int,
                                 stream: RawStream) -> RatioEstimate:
    """Ratio estimate k(H_{m-1})/k(H_m): run the H_m chain from the
    identity for burn_in+samples steps, average q*K_m over the tail."""
    Jm = seq.level(m)
    Jprev = seq.level(m - 1)
    ar, ac = seq.added[m - 1]
    jr, jc = Jm.rows_cols
    exps = kernels.run_pattern_level(
        seq.n, q, Jm.var_index, jr, jc, Jprev.var_index, len(Jprev),
        ar - 1, ac - 1, burn_in, samples, stream)
    return _finish(unitriangular_values(exps, q), m)


def estimate_ratio_generic(initial_state, step: Callable, stabilizer_ratio: Callable,
                           fiber_size, group_index_ratio: float,
                           burn_in: int, samples: int, stream: RawStream,
                           level: int = 0) -> RatioEstimate:
    """Generic per-level estimator from caller-supplied callbacks.

    E-hat = group_index_ratio * mean over post-burn-in states of
    stabilizer_ratio(x) / fiber_size(x).  `fiber_size` may be a number or
    a callable of the state.
    """
    fib = fiber_size if callable(fiber_size) else (lambda _x: fiber_size)
    x = initial_state
    vals = np.empty(samples, dtype=np.float64)
    for j in range(burn_in + samples):
        x = step(x, stream)
        if j >= burn_in:
            vals[j - burn_in] = (
                group_index_ratio * float(stabilizer_ratio(x)) / float(fib(x))
            )
    return _finish(vals, level)


def _run_unitriangular_level(n: int, q: int, m: int, burn_in: int,
                             samples: int, master_seed: int) -> RatioEstimate:
    Jm, Jprev, (ar, ac) = pattern.level_pair(n, m)
    jr, jc = Jm.rows_cols
    stream = stream_for(master_seed, m)
    exps = kernels.run_pattern_level(
        n, q, Jm.var_index, jr, jc, Jprev.var_index, len(Jprev),
        ar - 1, ac - 1, burn_in, samples, stream)
    return _finish(unitriangular_values(exps, q), m)


def _run_multiset_level(n_level: int, k: int, burn_in: int, samples: int,
                        master_seed: int, level: int) -> RatioEstimate:
    stream = stream_for(master_seed, level)
    counts = multiset.run_level(n_level, k, burn_in, samples, stream)
    vals = float(n_level) / (k * counts.astype(np.float64))
    return _finish(vals, level)


def _level_task(payload) -> RatioEstimate:
    kind, args = payload
    if kind == "unitriangular":
        return _run_unitriangular_level(*args)
    return _run_multiset_level(*args)


# ---------------------------------------------------------------------------
# product estimate
# ---------------------------------------------------------------------------

def estimate_count(problem, config: ChainConfig) -> LogCountEstimate:
    """Log-domain orbit-count estimate; levels run independently and are
    combined in fixed level order regardless of worker scheduling."""
    t0 = time.perf_counter()
    if not isinstance(problem, (UnitriangularProblem, MultisetProblem)):
        raise TypeError(f"unknown problem type: {type(problem).__name__}")
    schedule = config.level_schedule or problem.schedule()
    if isinstance(problem, UnitriangularProblem):
        payloads = [("unitriangular",
                     (problem.n, problem.q, m, config.burn_in, config.samples,
                      config.master_seed))
                    for m in schedule]
        log_base = float(problem.q)
    elif isinstance(problem, MultisetProblem):
        payloads = [("multiset",
                     (i + 1, problem.k, config.burn_in, config.samples,
                      config.master_seed, i))
                    for i in schedule]
        log_base = math.e

    if config.worker_count > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=config.worker_count) as ex:
            per_level = tuple(ex.map(_level_task, payloads))
    else:
        per_level = tuple(_level_task(p) for p in payloads)

    valid = all(not r.failed for r in per_level)
    lb = math.log(log_base)
    if valid:
        log_count = -sum(math.log(r.value) for r in per_level) / lb
        if isinstance(problem, MultisetProblem):
            log_count += math.log(problem.k)
        var = sum((r.std_error / r.value) ** 2 for r in per_level
                  if not math.isnan(r.std_error))
        std_error = math.sqrt(var) / lb
    else:
        log_count = math.nan
        std_error = math.nan
    return LogCountEstimate(
        log_count=log_count,
        log_base=log_base,
        std_error=std_error,
        per_level=per_level,
        valid=valid,
        elapsed=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# exact kernels on small enumerable actions
# ---------------------------------------------------------------------------

@dataclass
class EnumeratedAction:
    """A finite action given extensionally: hashable states, a group
    element list, and act(g, x) -> state."""

    states: list
    group: list
    act: Callable

    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.states)}


def exact_kernel(action: EnumeratedAction, guard: int = 5000) -> np.ndarray:
    """Exact Burnside transition matrix K(x, y) = sum over g fixing both
    of 1 / (|fixed(g)| |stab(x)|)."""
    S = len(action.states)
    if S > guard:
        raise GuardExceededError(f"{S} states exceeds the kernel guard {guard}")
    idx = action.index()
    fixed: list[list[int]] = []
    for g in action.group:
        fixed.append([i for i, x in enumerate(action.states)
                      if idx[action.act(g, x)] == i])
    stab: list[list[int]] = [[] for _ in range(S)]
    for gi, fx in enumerate(fixed):
        for i in fx:
            stab[i].append(gi)
    K = np.zeros((S, S))
    for i in range(S):
        w = 1.0 / len(stab[i])
        for gi in stab[i]:
            share = w / len(fixed[gi])
            for jdx in fixed[gi]:
                K[i, jdx] += share
    return K


def orbit_partition(action: EnumeratedAction) -> list[list[int]]:
    idx = action.index()
    seen = [False] * len(action.states)
    orbits = []
    for i, x in enumerate(action.states):
        if seen[i]:
            continue
        orb = sorted({idx[action.act(g, x)] for g in action.group})
        for j in orb:
            seen[j] = True
        orbits.append(orb)
    return orbits


def stationary_distribution(action: EnumeratedAction) -> np.ndarray:
    """pi(x) proportional to 1 / |orbit(x)|; uniform over orbits after
    lumping."""
    orbits = orbit_partition(action)
    pi = np.zeros(len(action.states))
    for orb in orbits:
        for i in orb:
            pi[i] = 1.0 / (len(orbits) * len(orb))
    return pi


def lumped_kernel(K: np.ndarray, orbits: list[list[int]]) -> np.ndarray:
    """Project the chain onto orbit labels (valid by Dynkin's criterion:
    rows within an orbit aggregate identically, which we assert)."""
    L = np.zeros((len(orbits), len(orbits)))
    for a, orb_a in enumerate(orbits):
        rows = np.stack([
            [K[i, orb_b].sum() for orb_b in orbits] for i in orb_a
        ])
        if not np.allclose(rows, rows[0], atol=1e-12):
            raise ValueError("kernel is not lumpable over the given orbits")
        L[a] = rows[0]
    return L
