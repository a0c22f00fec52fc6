"""Pure-Python fallback for the hot kernels.

Mirror of the compiled module ``orbitcount._kernels``.  Both backends must
produce bit-identical results: same pivot rule (first nonzero entry,
scanning columns left to right, rows top to bottom), same free-variable
nullspace construction, and the same random-word consumption order.
"""

from __future__ import annotations

import numpy as np

from .rngstream import RawStream


# ---------------------------------------------------------------------------
# reduced row echelon form / nullspace over F_p
# ---------------------------------------------------------------------------

def _rref_generic(M: np.ndarray, p: int):
    """In-place-style RREF on a copy, residue arithmetic for any prime p."""
    W = M.astype(np.int64) % p
    rows, cols = W.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(W[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            W[[r, piv]] = W[[piv, r]]
        f = pow(int(W[r, c]), p - 2, p)
        if f != 1:
            W[r] = (W[r] * f) % p
        others = np.nonzero(W[:, c])[0]
        others = others[others != r]
        if others.size:
            W[others] = (W[others] - np.outer(W[others, c], W[r])) % p
        pivots.append(c)
        r += 1
    return W.astype(np.uint8), r, pivots


def _rref_gf2(M: np.ndarray):
    """Bit-packed elimination for F_2: rows held as Python int bitsets."""
    rows, cols = M.shape
    work = []
    for i in range(rows):
        v = 0
        for c in np.nonzero(M[i])[0]:
            v |= 1 << int(c)
        work.append(v)
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if (work[i] >> c) & 1), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(rows):
            if i != r and (work[i] >> c) & 1:
                work[i] ^= work[r]
        pivots.append(c)
        r += 1
    R = np.zeros((rows, cols), dtype=np.uint8)
    for i in range(rows):
        v = work[i]
        c = 0
        while v:
            if v & 1:
                R[i, c] = 1
            v >>= 1
            c += 1
    return R, r, pivots


def rref(mat: np.ndarray, p: int):
    """RREF over F_p.  Returns (reduced matrix, rank, pivot columns)."""
    M = np.asarray(mat, dtype=np.uint8) % p
    if p == 2:
        return _rref_gf2(M)
    return _rref_generic(M, p)


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Deterministic nullspace basis, shape (cols - rank, cols).

    Standard free-variable construction from the RREF; free columns are
    taken in ascending order, so the basis is a function of the input only.
    """
    M = np.asarray(mat, dtype=np.uint8) % p
    R, rank, pivots = rref(M, p)
    cols = M.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for bi, f in enumerate(free):
        basis[bi, f] = 1
        for r, pc in enumerate(pivots):
            v = int(R[r, f])
            if v:
                basis[bi, pc] = p - v
    return basis


# ---------------------------------------------------------------------------
# pattern-group commutation systems
# ---------------------------------------------------------------------------

def build_commutation_system(x: np.ndarray, var_index: np.ndarray,
                             nvars: int, p: int) -> np.ndarray:
    """Linear system for y(x-I) = (x-I)y over the free coordinates of y.

    One equation per strictly-upper position (i, j) with j - i >= 2;
    variables are the positions of the closed set (var_index holds the
    column of each position, -1 outside the set).
    """
    n = x.shape[0]
    neq = (n - 1) * (n - 2) // 2
    M = np.zeros((neq, nvars), dtype=np.uint8)
    row = 0
    for i in range(n):
        for j in range(i + 2, n):
            for k in range(i + 1, j):
                v = var_index[i, k]
                if v >= 0:
                    M[row, v] = x[k, j]
                v = var_index[k, j]
                if v >= 0:
                    M[row, v] = (p - int(x[i, k])) % p
            row += 1
    return M


def pattern_nullspace(x: np.ndarray, var_index: np.ndarray,
                      nvars: int, p: int) -> np.ndarray:
    """Centralizer basis of x as vectors over the nvars free coordinates."""
    if nvars == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    M = build_commutation_system(x, var_index, nvars, p)
    return nullspace(M, p)


def _pattern_step(x, basis, jrows, jcols, n, p, stream):
    """Sample y = I + sum(alpha_i * eps_i); alphas drawn in basis order."""
    V = jrows.shape[0]
    u = np.zeros(V, dtype=np.int64)
    for i in range(basis.shape[0]):
        alpha = stream.rand_below(p)
        if alpha:
            u += alpha * basis[i].astype(np.int64)
    u %= p
    y = np.eye(n, dtype=np.uint8)
    y[jrows, jcols] = u
    return y


def run_pattern_level(n: int, p: int, var_index: np.ndarray,
                      jrows: np.ndarray, jcols: np.ndarray,
                      prev_var_index: np.ndarray, prev_nvars: int,
                      added_r: int, added_c: int,
                      burn_in: int, samples: int,
                      stream: RawStream) -> np.ndarray:
    """Burnside chain on one pattern group, from the identity.

    Returns one int per post-burn-in state: the exponent t >= 0 with
    statistic value q^-t, or -1 where the statistic is zero (the state
    lies outside the previous group).
    """
    V = jrows.shape[0]
    x = np.eye(n, dtype=np.uint8)
    basis = pattern_nullspace(x, var_index, V, p)
    out = np.empty(samples, dtype=np.int32)
    for j in range(burn_in + samples):
        x = _pattern_step(x, basis, jrows, jcols, n, p, stream)
        basis = pattern_nullspace(x, var_index, V, p)
        if j >= burn_in:
            if x[added_r, added_c] != 0:
                out[j - burn_in] = -1
            else:
                dprev = pattern_nullspace(x, prev_var_index, prev_nvars, p).shape[0]
                out[j - burn_in] = basis.shape[0] - dprev
    return out


def run_histogram_chain(n: int, p: int, var_index: np.ndarray,
                        jrows: np.ndarray, jcols: np.ndarray,
                        steps: int, stream: RawStream) -> np.ndarray:
    """Class-size exponents |J| - d for each state visited by the chain."""
    V = jrows.shape[0]
    x = np.eye(n, dtype=np.uint8)
    basis = pattern_nullspace(x, var_index, V, p)
    out = np.empty(steps, dtype=np.int32)
    for j in range(steps):
        x = _pattern_step(x, basis, jrows, jcols, n, p, stream)
        basis = pattern_nullspace(x, var_index, V, p)
        out[j] = V - basis.shape[0]
    return out


# ---------------------------------------------------------------------------
# multiset (coordinate-permutation) chain
# ---------------------------------------------------------------------------

def multiset_step(x: np.ndarray, k: int, stream: RawStream) -> np.ndarray:
    """One Burnside step for S_n acting on colorings by permutation.

    Phase 1: an independent uniform permutation of every level set (so g
    is uniform over the stabilizer of x).  Phase 2: a fresh uniform color
    per cycle of g.  Draw order is fixed: colors ascending, Fisher-Yates
    from the top, then cycles by smallest unvisited index.
    """
    n = x.shape[0]
    perm = np.arange(n)
    for color in range(1, k + 1):
        idx = np.nonzero(x == color)[0]
        m = idx.shape[0]
        arr = idx.copy()
        for t in range(m - 1, 0, -1):
            j = stream.rand_below(t + 1)
            arr[t], arr[j] = arr[j], arr[t]
        perm[idx] = arr
    y = np.empty(n, dtype=np.int32)
    visited = np.zeros(n, dtype=bool)
    for s in range(n):
        if visited[s]:
            continue
        color = 1 + stream.rand_below(k)
        t = s
        while not visited[t]:
            visited[t] = True
            y[t] = color
            t = perm[t]
    return y


def run_multiset_level(length: int, k: int, burn_in: int, samples: int,
                       stream: RawStream) -> np.ndarray:
    """Chain on k-colorings of given length, from the all-ones state.

    Returns, per post-burn-in state, the count #{j : x_j = x_length}; the
    level statistic is length / (k * count).
    """
    x = np.ones(length, dtype=np.int32)
    out = np.empty(samples, dtype=np.int32)
    for j in range(burn_in + samples):
        x = multiset_step(x, k, stream)
        if j >= burn_in:
            out[j - burn_in] = int(np.count_nonzero(x == x[length - 1]))
    return out
