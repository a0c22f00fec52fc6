"""Pattern groups U_J: closed position sets, the nested level sequence,
centralizer bases and uniform centralizer sampling (the Burnside step for
the conjugation action), and the per-level importance-sampling statistic.

Group elements are numpy uint8 matrices with unit diagonal; positions are
1-based pairs (i, j) with i < j, matching the usual matrix indexing.
All cardinalities are kept in exponent form (q is never raised to large
powers outside of exact small-scale oracles).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._backend import kernels
from .rngstream import RawStream


@dataclass(frozen=True)
class ClosedPositionSet:
    """A closed set J of strictly-upper positions; defines the group U_J."""

    n: int
    positions: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(sorted(self.positions)))
        seen = set()
        by_row: dict[int, list[int]] = {}
        for (i, j) in self.positions:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"position {(i, j)} out of range for n={self.n}")
            seen.add((i, j))
            by_row.setdefault(i, []).append(j)
        for (i, j) in self.positions:
            for b in by_row.get(j, ()):
                if (i, b) not in seen:
                    raise ValueError(
                        f"not closed: {(i, j)} and {(j, b)} require {(i, b)}"
                    )

    @classmethod
    def full(cls, n: int) -> "ClosedPositionSet":
        return cls(n, tuple((i, j) for i in range(1, n) for j in range(i + 1, n + 1)))

    def __len__(self) -> int:
        return len(self.positions)

    def __contains__(self, pos) -> bool:
        return tuple(pos) in self._position_set

    @cached_property
    def _position_set(self) -> frozenset:
        return frozenset(self.positions)

    @cached_property
    def var_index(self) -> np.ndarray:
        """0-based (n, n) map position -> variable column, -1 outside J."""
        vi = np.full((self.n, self.n), -1, dtype=np.int32)
        for col, (i, j) in enumerate(self.positions):
            vi[i - 1, j - 1] = col
        return vi

    @cached_property
    def rows_cols(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based row/column arrays of the positions, in variable order."""
        jr = np.array([i - 1 for (i, j) in self.positions], dtype=np.int32)
        jc = np.array([j - 1 for (i, j) in self.positions], dtype=np.int32)
        return jr, jc


@dataclass(frozen=True)
class NestedSequence:
    """J_1 subset ... subset J_N with |J_m| = m, N = n(n-1)/2.

    Level m adds the single position added[m-1]; positions are added row
    by row from the bottom of the matrix up, right to left within a row.
    """

    n: int
    levels: tuple[ClosedPositionSet, ...] = field(repr=False)
    added: tuple[tuple[int, int], ...]

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    def level(self, m: int) -> ClosedPositionSet:
        """J_m; level(0) is the empty set (the trivial group H_0)."""
        if m == 0:
            return ClosedPositionSet(self.n, ())
        return self.levels[m - 1]


def nested_sequence(n: int) -> NestedSequence:
    """The level sequence: position (k, l) enters at level
    m = (n-k)(n-k-1)/2 + n - l + 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    order = []
    for k in range(n - 1, 0, -1):
        for l in range(n, k, -1):
            order.append((k, l))
    levels = []
    for m in range(1, len(order) + 1):
        levels.append(ClosedPositionSet(n, tuple(order[:m])))
    return NestedSequence(n, tuple(levels), tuple(order))


def level_pair(n: int, m: int) -> tuple[ClosedPositionSet, ClosedPositionSet,
                                        tuple[int, int]]:
    """(J_m, J_{m-1}, added position) without materializing all levels."""
    order = []
    for k in range(n - 1, 0, -1):
        for l in range(n, k, -1):
            order.append((k, l))
    if not (1 <= m <= len(order)):
        raise ValueError(f"level {m} out of range for n={n}")
    Jm = ClosedPositionSet(n, tuple(order[:m]))
    Jprev = ClosedPositionSet(n, tuple(order[: m - 1]))
    return Jm, Jprev, order[m - 1]


def identity_element(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def element_from_entries(n: int, entries: dict, p: int) -> np.ndarray:
    x = np.eye(n, dtype=np.uint8)
    for (i, j), v in entries.items():
        if not (1 <= i < j <= n):
            raise ValueError(f"entry position {(i, j)} is not strictly upper")
        x[i - 1, j - 1] = v % p
    return x


def in_group(x: np.ndarray, J: ClosedPositionSet, p: int) -> bool:
    """Membership in U_J: unit diagonal, support inside J, entries < p."""
    n = J.n
    if x.shape != (n, n):
        return False
    if np.any(np.diag(x) != 1):
        return False
    if np.any(np.tril(x, -1) != 0):
        return False
    if np.any(x >= p):
        return False
    mask = np.triu(np.ones((n, n), dtype=bool), 1)
    mask[J.var_index >= 0] = False
    return not np.any(x[mask])


def _require_member(x: np.ndarray, J: ClosedPositionSet, p: int) -> None:
    if not in_group(x, J, p):
        raise ValueError("element has support outside the closed set J")


def centralizer_basis(x: np.ndarray, J: ClosedPositionSet, p: int):
    """Nullspace basis of the commutation system y(x-I) = (x-I)y.

    Returns (d, basis) with basis of shape (d, |J|) over the variable
    order of J.  |C_{U_J}(x)| = p^d and |O_{U_J}(x)| = p^(|J| - d).
    """
    _require_member(x, J, p)
    basis = kernels.pattern_nullspace(x, J.var_index, len(J), p)
    return basis.shape[0], basis


def centralizer_sample(x: np.ndarray, J: ClosedPositionSet, p: int,
                       stream: RawStream) -> np.ndarray:
    """Uniform draw from the centralizer C_{U_J}(x)."""
    d, basis = centralizer_basis(x, J, p)
    jr, jc = J.rows_cols
    u = np.zeros(len(J), dtype=np.int64)
    for i in range(d):
        alpha = stream.rand_below(p)
        if alpha:
            u += alpha * basis[i].astype(np.int64)
    u %= p
    y = np.eye(J.n, dtype=np.uint8)
    y[jr, jc] = u
    return y


def burnside_step(x: np.ndarray, J: ClosedPositionSet, p: int,
                  stream: RawStream) -> np.ndarray:
    """One Burnside transition for conjugation.  The two half-steps of the
    general chain collapse: the new state is a uniform centralizer draw."""
    return centralizer_sample(x, J, p, stream)


def statistic_K(g: np.ndarray, seq: NestedSequence, m: int, p: int) -> Fraction:
    """Level-m statistic: 0 outside H_{m-1}, else the centralizer ratio
    |C_{H_{m-1}}(g)| / |C_{H_m}(g)| = p^-(d_m - d_{m-1})."""
    J = seq.level(m)
    _require_member(g, J, p)
    (kr, lc) = seq.added[m - 1]
    if g[kr - 1, lc - 1] != 0:
        return Fraction(0)
    d_cur, _ = centralizer_basis(g, J, p)
    Jprev = seq.level(m - 1)
    d_prev = kernels.pattern_nullspace(g, Jprev.var_index, len(Jprev), p).shape[0]
    return Fraction(1, p ** (d_cur - d_prev))


def class_size_histogram(n: int, q: int, steps: int,
                         stream: RawStream) -> dict[int, int]:
    """Histogram of log_q |O(x)| along the Burnside chain on U_n(F_q),
    started at the identity."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    J = ClosedPositionSet.full(n)
    jr, jc = J.rows_cols
    exps = kernels.run_histogram_chain(n, q, J.var_index, jr, jc, steps, stream)
    hist: dict[int, int] = {}
    for e in exps:
        hist[int(e)] = hist.get(int(e), 0) + 1
    return dict(sorted(hist.items()))
