"""Brute-force ground truth at desk scale.

Exhaustive enumeration of pattern groups: exact conjugacy-class counts via
Burnside's lemma cross-checked against a union-find partition, exact
verification of the per-level ratio bounds and of the variance bound for
the level statistic, and exact stationary expectations used by the
unbiasedness tests.  Everything here is deliberately independent of the
sampling code paths it validates, except that centralizer dimensions come
from the same deterministic nullspace routine (and are cross-checked by
direct commutation counting in the tests).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import multiset, pattern
from ._backend import kernels
from .estimator import EnumeratedAction, GuardExceededError

DEFAULT_GUARD = 10**6


def _check_guard(J: pattern.ClosedPositionSet, q: int, guard: int) -> None:
    if q ** len(J) > guard:
        raise GuardExceededError(
            f"|U_J| = {q}^{len(J)} exceeds the enumeration guard {guard}"
        )


def enumerate_group(J: pattern.ClosedPositionSet, q: int,
                    guard: int = DEFAULT_GUARD) -> list[np.ndarray]:
    """All q^|J| elements of U_J, in lexicographic entry order."""
    _check_guard(J, q, guard)
    jr, jc = J.rows_cols
    out = []
    for assignment in itertools.product(range(q), repeat=len(J)):
        x = np.eye(J.n, dtype=np.uint8)
        x[jr, jc] = assignment
        out.append(x)
    return out


def unipotent_inverse(g: np.ndarray, q: int) -> np.ndarray:
    """Inverse via the nilpotent series: (I+A)^-1 = I - A + A^2 - ..."""
    n = g.shape[0]
    A = (g.astype(np.int64) - np.eye(n, dtype=np.int64)) % q
    inv = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for _ in range(1, n):
        term = (-term @ A) % q
        inv = (inv + term) % q
    return (inv % q).astype(np.uint8)


def centralizer_dimension(x: np.ndarray, J: pattern.ClosedPositionSet,
                          q: int) -> int:
    return kernels.pattern_nullspace(x, J.var_index, len(J), q).shape[0]


def centralizer_order_bruteforce(x: np.ndarray, J: pattern.ClosedPositionSet,
                                 q: int, guard: int = DEFAULT_GUARD) -> int:
    """|{y in U_J : xy = yx}| by direct commutation count."""
    xi = x.astype(np.int64)
    count = 0
    for y in enumerate_group(J, q, guard):
        yi = y.astype(np.int64)
        if np.array_equal((xi @ yi) % q, (yi @ xi) % q):
            count += 1
    return count


@dataclass(frozen=True)
class ExactCount:
    n: int
    q: int
    num_positions: int
    k: int
    class_size_profile: dict[int, int]  # orbit-size exponent -> #classes


def _conjugacy_partition(elements: list[np.ndarray],
                         J: pattern.ClosedPositionSet, q: int) -> list[int]:
    """Class sizes via union-find, conjugating by the elementary
    generators I + c*E_pos only (they generate U_J for prime q)."""
    keys = {el.tobytes(): i for i, el in enumerate(elements)}
    parent = list(range(len(elements)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    gens = []
    for (i, j) in J.positions:
        for c in range(1, q):
            s = np.eye(J.n, dtype=np.uint8)
            s[i - 1, j - 1] = c
            gens.append((s.astype(np.int64), unipotent_inverse(s, q).astype(np.int64)))
    for gi, g in enumerate(elements):
        gl = g.astype(np.int64)
        for s, si in gens:
            h = ((si @ gl) @ s) % q
            union(gi, keys[h.astype(np.uint8).tobytes()])
    sizes: dict[int, int] = {}
    for a in range(len(elements)):
        r = find(a)
        sizes[r] = sizes.get(r, 0) + 1
    return sorted(sizes.values())


def exact_count_conjugacy(J: pattern.ClosedPositionSet, q: int,
                          guard: int = DEFAULT_GUARD) -> ExactCount:
    """Exact class count: Burnside's lemma k = (1/|G|) sum |C(g)|,
    cross-checked against a conjugation-closure partition."""
    elements = enumerate_group(J, q, guard)
    order = q ** len(J)
    total = sum(q ** centralizer_dimension(g, J, q) for g in elements)
    k, rem = divmod(total, order)
    if rem:
        raise AssertionError("Burnside sum not divisible by the group order")
    sizes = _conjugacy_partition(elements, J, q)
    if len(sizes) != k:
        raise AssertionError(
            f"partition count {len(sizes)} != Burnside count {k}"
        )
    if sum(sizes) != order:
        raise AssertionError("class sizes do not sum to the group order")
    profile: dict[int, int] = {}
    for s in sizes:
        e = round(math.log(s, q))
        if q**e != s:
            raise AssertionError(f"class size {s} is not a power of {q}")
        profile[e] = profile.get(e, 0) + 1
    return ExactCount(J.n, q, len(J), k, dict(sorted(profile.items())))


def nested_exact_counts(n: int, q: int,
                        guard: int = DEFAULT_GUARD) -> list[int]:
    """[k(H_0), k(H_1), ..., k(H_N)] by exhaustive enumeration."""
    seq = pattern.nested_sequence(n)
    counts = [1]
    for m in range(1, seq.num_levels + 1):
        counts.append(exact_count_conjugacy(seq.level(m), q, guard).k)
    return counts


@dataclass(frozen=True)
class RatioBoundReport:
    n: int
    q: int
    ratios: tuple[Fraction, ...]  # k(H_m)/k(H_{m-1}) for m = 1..N
    all_within_bounds: bool


def verify_theorem2(n: int, q: int, guard: int = DEFAULT_GUARD) -> RatioBoundReport:
    """Check q^-1 <= k(H_m)/k(H_{m-1}) <= q^3 for every level."""
    counts = nested_exact_counts(n, q, guard)
    ratios = tuple(Fraction(counts[m], counts[m - 1])
                   for m in range(1, len(counts)))
    ok = all(Fraction(1, q) <= r <= q**3 for r in ratios)
    return RatioBoundReport(n, q, ratios, ok)


@dataclass(frozen=True)
class VarianceReport:
    n: int
    q: int
    level: int
    mean: Fraction          # exact E[q K_m(T_m)]
    second_moment: Fraction
    target_ratio: Fraction  # k(H_{m-1})/k(H_m)
    mean_matches_ratio: bool
    std_within_bound: bool  # Var <= q^4 * mean^2, i.e. std <= q^2 * mean


def verify_corollary41(n: int, q: int, m: int,
                       guard: int = DEFAULT_GUARD) -> VarianceReport:
    """Exact stationary mean and variance of q*K_m; checks both the
    unbiasedness identity and the standard-deviation bound."""
    seq = pattern.nested_sequence(n)
    Jm = seq.level(m)
    Jprev = seq.level(m - 1)
    ar, ac = seq.added[m - 1]
    elements = enumerate_group(Jm, q, guard)
    k_m = exact_count_conjugacy(Jm, q, guard).k
    k_prev = (exact_count_conjugacy(Jprev, q, guard).k if m > 1 else 1)
    mean = Fraction(0)
    second = Fraction(0)
    for g in elements:
        d = centralizer_dimension(g, Jm, q)
        weight = Fraction(1, k_m * q ** (m - d))  # pi(g)
        if g[ar - 1, ac - 1] != 0:
            continue
        dprev = kernels.pattern_nullspace(
            g, Jprev.var_index, len(Jprev), q).shape[0]
        qk = Fraction(q, q ** (d - dprev))
        mean += weight * qk
        second += weight * qk * qk
    target = Fraction(k_prev, k_m)
    var = second - mean * mean
    return VarianceReport(
        n=n, q=q, level=m, mean=mean, second_moment=second,
        target_ratio=target,
        mean_matches_ratio=(mean == target),
        std_within_bound=(var <= q**4 * mean * mean),
    )


@dataclass(frozen=True)
class HigmanBandReport:
    n: int
    q: int
    ratio: float | None  # log_q k / n^2, None when not applicable
    lower_reference: float  # 1/12
    upper_reference: float  # 1/4
    refined_reference: float | None  # (n+6)/(12n)
    applicable: bool


def verify_higman_band(n: int, q: int, logq_count: float,
                       min_n: int = 8) -> HigmanBandReport:
    """Advisory-only comparison against the asymptotic reference curves;
    never a hard assertion (the o(1) terms are unspecified)."""
    applicable = n >= min_n
    return HigmanBandReport(
        n=n, q=q,
        ratio=(logq_count / n**2) if applicable else None,
        lower_reference=1.0 / 12.0,
        upper_reference=1.0 / 4.0,
        refined_reference=((n + 6) / (12.0 * n)) if applicable else None,
        applicable=applicable,
    )


# ---------------------------------------------------------------------------
# small enumerable actions (exact-kernel inputs)
# ---------------------------------------------------------------------------

def conjugation_action(J: pattern.ClosedPositionSet, q: int,
                       guard: int = 5000) -> EnumeratedAction:
    """U_J acting on itself by conjugation; states keyed by matrix bytes."""
    if q ** len(J) > guard:
        raise GuardExceededError(
            f"|U_J| = {q}^{len(J)} exceeds the action guard {guard}"
        )
    elements = enumerate_group(J, q, guard)
    by_key = {el.tobytes(): el for el in elements}
    invs = {el.tobytes(): unipotent_inverse(el, q) for el in elements}

    def act(g_key: bytes, x_key: bytes) -> bytes:
        g = by_key[g_key].astype(np.int64)
        gi = invs[g_key].astype(np.int64)
        x = by_key[x_key].astype(np.int64)
        return (((gi @ x) @ g) % q).astype(np.uint8).tobytes()

    keys = list(by_key)
    return EnumeratedAction(states=keys, group=keys, act=act)


def multiset_action(n: int, k: int, guard: int = 5000) -> EnumeratedAction:
    """S_n permuting the coordinates of k-colorings of length n."""
    if k**n > guard:
        raise GuardExceededError(f"{k}^{n} states exceeds the action guard")
    states = [tuple(s) for s in itertools.product(range(1, k + 1), repeat=n)]
    group = list(itertools.permutations(range(n)))

    def act(perm, x):
        return tuple(x[perm[i]] for i in range(n))

    return EnumeratedAction(states=states, group=group, act=act)


def multiset_stationary_expectation(i: int, k: int) -> tuple[Fraction, Fraction]:
    """Exact stationary expectation of the level statistic on length-(i+1)
    tuples, with the target ratio of exact orbit counts.  Returns
    (expectation, target); they must agree exactly."""
    length = i + 1
    k_cur = multiset.exact_multiset_count(length, k)
    k_prev = multiset.exact_multiset_count(i, k) if i >= 1 else 1
    total = Fraction(0)
    for x in itertools.product(range(1, k + 1), repeat=length):
        counts = [x.count(c) for c in range(1, k + 1)]
        orbit = math.factorial(length)
        for c in counts:
            orbit //= math.factorial(c)
        pi = Fraction(1, k_cur * orbit)
        stat = Fraction(length, k * x.count(x[-1]))
        total += pi * stat
    return total, Fraction(k_prev, k_cur)
