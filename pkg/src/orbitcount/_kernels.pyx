# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: F_p elimination and the chain inner loops.

Mirror of ``orbitcount._purekernels``; the two must stay bit-identical in
results and in random-word consumption (same rejection rule, same draw
order).  Random words come straight from a Philox bitgen handed over via
the stream's PyCapsule.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t
from libc.stdint cimport uint8_t, uint64_t, int32_t
from libc.string cimport memset

cnp.import_array()

cdef const char *CAPSULE_NAME = "BitGenerator"


cdef inline uint64_t _rand_below(bitgen_t *bg, uint64_t bound) noexcept nogil:
    # accept w iff w <= 2^64 - 1 - (2^64 mod bound); identical to RawStream
    cdef uint64_t r = (<uint64_t>0 - bound) % bound
    cdef uint64_t lim = (<uint64_t>0xFFFFFFFFFFFFFFFF) - r
    cdef uint64_t w
    while True:
        w = bg.next_uint64(bg.state)
        if w <= lim:
            return w % bound


cdef bitgen_t *_bitgen(object stream):
    return <bitgen_t *> PyCapsule_GetPointer(stream.capsule, CAPSULE_NAME)


# ---------------------------------------------------------------------------
# elimination cores
# ---------------------------------------------------------------------------

cdef int _rref_generic_rows(uint8_t[:, ::1] M, int rows, int cols, int p,
                            uint8_t *inv, int32_t *pivots) noexcept nogil:
    cdef int r = 0, c, i, j, piv
    cdef int f
    cdef uint8_t tmp
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = M[r, j]; M[r, j] = M[piv, j]; M[piv, j] = tmp
        f = inv[M[r, c]]
        if f != 1:
            for j in range(c, cols):
                M[r, j] = <uint8_t>((M[r, j] * f) % p)
        for i in range(rows):
            if i != r and M[i, c] != 0:
                f = p - M[i, c]
                for j in range(c, cols):
                    M[i, j] = <uint8_t>((M[i, j] + f * M[r, j]) % p)
        pivots[r] = c
        r += 1
    return r


cdef int _rref_gf2_rows(uint64_t[:, ::1] W, int rows, int cols, int words,
                        int32_t *pivots) noexcept nogil:
    cdef int r = 0, c, i, j, piv, wi
    cdef uint64_t bit, tmp
    for c in range(cols):
        if r >= rows:
            break
        wi = c >> 6
        bit = (<uint64_t>1) << (c & 63)
        piv = -1
        for i in range(r, rows):
            if W[i, wi] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(words):
                tmp = W[r, j]; W[r, j] = W[piv, j]; W[piv, j] = tmp
        for i in range(rows):
            if i != r and (W[i, wi] & bit):
                for j in range(words):
                    W[i, j] ^= W[r, j]
        pivots[r] = c
        r += 1
    return r


cdef int _nullspace_generic(uint8_t[:, ::1] M, int rank, int cols, int p,
                            int32_t *pivots, uint8_t *ispiv,
                            uint8_t[:, ::1] basis) noexcept nogil:
    cdef int r, f, bi = 0
    cdef int v
    for f in range(cols):
        ispiv[f] = 0
    for r in range(rank):
        ispiv[pivots[r]] = 1
    for f in range(cols):
        if ispiv[f]:
            continue
        for r in range(cols):
            basis[bi, r] = 0
        basis[bi, f] = 1
        for r in range(rank):
            v = M[r, f]
            if v:
                basis[bi, pivots[r]] = <uint8_t>(p - v)
        bi += 1
    return bi


cdef int _nullspace_gf2(uint64_t[:, ::1] W, int rank, int cols,
                        int32_t *pivots, uint8_t *ispiv,
                        uint8_t[:, ::1] basis) noexcept nogil:
    cdef int r, f, bi = 0
    for f in range(cols):
        ispiv[f] = 0
    for r in range(rank):
        ispiv[pivots[r]] = 1
    for f in range(cols):
        if ispiv[f]:
            continue
        for r in range(cols):
            basis[bi, r] = 0
        basis[bi, f] = 1
        for r in range(rank):
            if (W[r, f >> 6] >> (f & 63)) & 1:
                basis[bi, pivots[r]] = 1
        bi += 1
    return bi


# ---------------------------------------------------------------------------
# commutation-system assembly
# ---------------------------------------------------------------------------

cdef int _build_system_generic(uint8_t[:, ::1] x, int n, int p,
                               int32_t[:, ::1] var_index, int nvars,
                               uint8_t[:, ::1] M) noexcept nogil:
    cdef int row = 0, i, j, k, v
    for i in range(n):
        for j in range(i + 2, n):
            memset(&M[row, 0], 0, nvars)
            for k in range(i + 1, j):
                v = var_index[i, k]
                if v >= 0:
                    M[row, v] = x[k, j]
                v = var_index[k, j]
                if v >= 0:
                    M[row, v] = <uint8_t>((p - x[i, k]) % p)
            row += 1
    return row


cdef int _build_system_gf2(uint8_t[:, ::1] x, int n,
                           int32_t[:, ::1] var_index, int words,
                           uint64_t[:, ::1] W) noexcept nogil:
    cdef int row = 0, i, j, k, v
    for i in range(n):
        for j in range(i + 2, n):
            memset(&W[row, 0], 0, words * sizeof(uint64_t))
            for k in range(i + 1, j):
                v = var_index[i, k]
                if v >= 0 and x[k, j]:
                    W[row, v >> 6] |= (<uint64_t>1) << (v & 63)
                v = var_index[k, j]
                if v >= 0 and x[i, k]:
                    W[row, v >> 6] |= (<uint64_t>1) << (v & 63)
            row += 1
    return row


cdef int _solve_basis(uint8_t[:, ::1] x, int n, int p,
                      int32_t[:, ::1] var_index, int nvars,
                      uint8_t[:, ::1] M, uint64_t[:, ::1] W, int words,
                      uint8_t *inv, int32_t *pivots, uint8_t *ispiv,
                      uint8_t[:, ::1] basis) noexcept nogil:
    """Centralizer nullspace dimension; basis rows over nvars coordinates."""
    cdef int rows, rank
    if nvars == 0:
        return 0
    if p == 2:
        rows = _build_system_gf2(x, n, var_index, words, W)
        rank = _rref_gf2_rows(W, rows, nvars, words, pivots)
        return _nullspace_gf2(W, rank, nvars, pivots, ispiv, basis)
    rows = _build_system_generic(x, n, p, var_index, nvars, M)
    rank = _rref_generic_rows(M, rows, nvars, p, inv, pivots)
    return _nullspace_generic(M, rank, nvars, p, pivots, ispiv, basis)


cdef object _inv_table(int p):
    inv = np.zeros(p, dtype=np.uint8)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


# ---------------------------------------------------------------------------
# public API (mirrors _purekernels)
# ---------------------------------------------------------------------------

def rref(mat, int p):
    """RREF over F_p.  Returns (reduced matrix, rank, pivot columns)."""
    M = np.array(mat, dtype=np.uint8) % p
    cdef int rows = M.shape[0], cols = M.shape[1]
    cdef int rank, i, c
    piv_arr = np.zeros(max(rows, 1), dtype=np.int32)
    cdef int32_t[::1] piv = piv_arr
    cdef uint8_t[:, ::1] Mv
    cdef uint64_t[:, ::1] Wv
    if rows == 0 or cols == 0:
        return M, 0, []
    if p == 2:
        words = (cols + 63) // 64
        Wa = np.zeros((rows, words), dtype=np.uint64)
        Wv = Wa
        Mv = M
        for i in range(rows):
            for c in range(cols):
                if Mv[i, c]:
                    Wv[i, c >> 6] |= (<uint64_t>1) << (c & 63)
        rank = _rref_gf2_rows(Wv, rows, cols, words, &piv[0])
        R = np.zeros((rows, cols), dtype=np.uint8)
        Mv = R
        for i in range(rows):
            for c in range(cols):
                if (Wv[i, c >> 6] >> (c & 63)) & 1:
                    Mv[i, c] = 1
        return R, rank, [int(piv[r]) for r in range(rank)]
    inv = _inv_table(p)
    cdef uint8_t[::1] invv = inv
    Mv = M
    rank = _rref_generic_rows(Mv, rows, cols, p, &invv[0], &piv[0])
    return M, rank, [int(piv[r]) for r in range(rank)]


def nullspace(mat, int p):
    """Deterministic nullspace basis, shape (cols - rank, cols)."""
    M = np.asarray(mat, dtype=np.uint8) % p
    cols = M.shape[1]
    R, rank, pivots = rref(M, p)
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


cdef class _Scratch:
    """Preallocated workspace for repeated centralizer solves."""
    cdef object M_a, W_a, basis_a, piv_a, ispiv_a, inv_a, u_a
    cdef uint8_t[:, ::1] M
    cdef uint64_t[:, ::1] W
    cdef uint8_t[:, ::1] basis
    cdef int32_t[::1] piv
    cdef uint8_t[::1] ispiv
    cdef uint8_t[::1] inv
    cdef int32_t[::1] u
    cdef int words

    def __init__(self, int n, int p, int nvars):
        cdef int neq = (n - 1) * (n - 2) // 2
        self.words = (nvars + 63) // 64 if nvars else 1
        self.M_a = np.zeros((max(neq, 1), max(nvars, 1)), dtype=np.uint8)
        self.W_a = np.zeros((max(neq, 1), self.words), dtype=np.uint64)
        self.basis_a = np.zeros((max(nvars, 1), max(nvars, 1)), dtype=np.uint8)
        self.piv_a = np.zeros(max(nvars, 1), dtype=np.int32)
        self.ispiv_a = np.zeros(max(nvars, 1), dtype=np.uint8)
        self.inv_a = _inv_table(p)
        self.u_a = np.zeros(max(nvars, 1), dtype=np.int32)
        self.M = self.M_a
        self.W = self.W_a
        self.basis = self.basis_a
        self.piv = self.piv_a
        self.ispiv = self.ispiv_a
        self.inv = self.inv_a
        self.u = self.u_a


def pattern_nullspace(x, var_index, int nvars, int p):
    """Centralizer basis of x over the nvars free coordinates."""
    if nvars == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    xa = np.ascontiguousarray(x, dtype=np.uint8)
    via = np.ascontiguousarray(var_index, dtype=np.int32)
    cdef uint8_t[:, ::1] xv = xa
    cdef int32_t[:, ::1] vi = via
    cdef int n = xa.shape[0]
    s = _Scratch(n, p, nvars)
    cdef _Scratch sc = s
    cdef int d = _solve_basis(xv, n, p, vi, nvars, sc.M, sc.W, sc.words,
                              &sc.inv[0], &sc.piv[0], &sc.ispiv[0], sc.basis)
    return np.array(sc.basis_a[:d, :nvars], dtype=np.uint8)


cdef void _set_identity(uint8_t[:, ::1] x, int n) noexcept nogil:
    cdef int a
    memset(&x[0, 0], 0, n * n)
    for a in range(n):
        x[a, a] = 1


def run_pattern_level(int n, int p, var_index, jrows, jcols,
                      prev_var_index, int prev_nvars,
                      int added_r, int added_c,
                      long burn_in, long samples, object stream):
    """Burnside chain on one pattern group; see _purekernels for contract."""
    cdef bitgen_t *bg = _bitgen(stream)
    via = np.ascontiguousarray(var_index, dtype=np.int32)
    pvia = np.ascontiguousarray(prev_var_index, dtype=np.int32)
    jra = np.ascontiguousarray(jrows, dtype=np.int32)
    jca = np.ascontiguousarray(jcols, dtype=np.int32)
    cdef int32_t[:, ::1] vi = via
    cdef int32_t[:, ::1] pvi = pvia
    cdef int32_t[::1] jr = jra
    cdef int32_t[::1] jc = jca
    cdef int V = jra.shape[0]
    s = _Scratch(n, p, V)
    s2 = _Scratch(n, p, V)
    cdef _Scratch sc = s, sc2 = s2
    xa = np.eye(n, dtype=np.uint8)
    out = np.empty(samples, dtype=np.int32)
    cdef uint8_t[:, ::1] x = xa
    cdef int32_t[::1] o = out
    cdef long j, total = burn_in + samples
    cdef int d, dprev, i, t
    cdef int alpha
    with nogil:
        d = _solve_basis(x, n, p, vi, V, sc.M, sc.W, sc.words,
                         &sc.inv[0], &sc.piv[0], &sc.ispiv[0], sc.basis)
        for j in range(total):
            for t in range(V):
                sc.u[t] = 0
            for i in range(d):
                alpha = <int>_rand_below(bg, p)
                if alpha:
                    for t in range(V):
                        sc.u[t] = (sc.u[t] + alpha * sc.basis[i, t]) % p
            _set_identity(x, n)
            for t in range(V):
                x[jr[t], jc[t]] = <uint8_t>sc.u[t]
            d = _solve_basis(x, n, p, vi, V, sc.M, sc.W, sc.words,
                             &sc.inv[0], &sc.piv[0], &sc.ispiv[0], sc.basis)
            if j >= burn_in:
                if x[added_r, added_c] != 0:
                    o[j - burn_in] = -1
                else:
                    dprev = _solve_basis(x, n, p, pvi, prev_nvars,
                                         sc2.M, sc2.W, sc2.words,
                                         &sc2.inv[0], &sc2.piv[0],
                                         &sc2.ispiv[0], sc2.basis)
                    o[j - burn_in] = d - dprev
    return out


def run_histogram_chain(int n, int p, var_index, jrows, jcols,
                        long steps, object stream):
    """Class-size exponents |J| - d for each state visited by the chain."""
    cdef bitgen_t *bg = _bitgen(stream)
    via = np.ascontiguousarray(var_index, dtype=np.int32)
    jra = np.ascontiguousarray(jrows, dtype=np.int32)
    jca = np.ascontiguousarray(jcols, dtype=np.int32)
    cdef int32_t[:, ::1] vi = via
    cdef int32_t[::1] jr = jra
    cdef int32_t[::1] jc = jca
    cdef int V = jra.shape[0]
    s = _Scratch(n, p, V)
    cdef _Scratch sc = s
    xa = np.eye(n, dtype=np.uint8)
    out = np.empty(steps, dtype=np.int32)
    cdef uint8_t[:, ::1] x = xa
    cdef int32_t[::1] o = out
    cdef long j
    cdef int d, i, t, alpha
    with nogil:
        d = _solve_basis(x, n, p, vi, V, sc.M, sc.W, sc.words,
                         &sc.inv[0], &sc.piv[0], &sc.ispiv[0], sc.basis)
        for j in range(steps):
            for t in range(V):
                sc.u[t] = 0
            for i in range(d):
                alpha = <int>_rand_below(bg, p)
                if alpha:
                    for t in range(V):
                        sc.u[t] = (sc.u[t] + alpha * sc.basis[i, t]) % p
            _set_identity(x, n)
            for t in range(V):
                x[jr[t], jc[t]] = <uint8_t>sc.u[t]
            d = _solve_basis(x, n, p, vi, V, sc.M, sc.W, sc.words,
                             &sc.inv[0], &sc.piv[0], &sc.ispiv[0], sc.basis)
            o[j] = V - d
    return out


cdef void _multiset_step_c(bitgen_t *bg, int32_t *x, int n, int k,
                           int32_t *perm, int32_t *idx, int32_t *arr,
                           uint8_t *visited) noexcept nogil:
    cdef int color, t, m, i, s, j
    cdef int32_t tmp
    for t in range(n):
        perm[t] = t
    for color in range(1, k + 1):
        m = 0
        for t in range(n):
            if x[t] == color:
                idx[m] = t
                m += 1
        for i in range(m):
            arr[i] = idx[i]
        for t in range(m - 1, 0, -1):
            j = <int>_rand_below(bg, t + 1)
            tmp = arr[t]; arr[t] = arr[j]; arr[j] = tmp
        for i in range(m):
            perm[idx[i]] = arr[i]
    for t in range(n):
        visited[t] = 0
    for s in range(n):
        if visited[s]:
            continue
        color = 1 + <int>_rand_below(bg, k)
        t = s
        while not visited[t]:
            visited[t] = 1
            x[t] = color
            t = perm[t]


def run_multiset_level(int length, int k, long burn_in, long samples,
                       object stream):
    """Coloring chain from the all-ones state; see _purekernels."""
    cdef bitgen_t *bg = _bitgen(stream)
    xa = np.ones(length, dtype=np.int32)
    perm_a = np.zeros(length, dtype=np.int32)
    idx_a = np.zeros(length, dtype=np.int32)
    arr_a = np.zeros(length, dtype=np.int32)
    vis_a = np.zeros(length, dtype=np.uint8)
    out = np.empty(samples, dtype=np.int32)
    cdef int32_t[::1] x = xa
    cdef int32_t[::1] perm = perm_a
    cdef int32_t[::1] idx = idx_a
    cdef int32_t[::1] arr = arr_a
    cdef uint8_t[::1] vis = vis_a
    cdef int32_t[::1] o = out
    cdef long j, total = burn_in + samples
    cdef int t, count
    cdef int32_t last
    with nogil:
        for j in range(total):
            _multiset_step_c(bg, &x[0], length, k, &perm[0], &idx[0],
                             &arr[0], &vis[0])
            if j >= burn_in:
                last = x[length - 1]
                count = 0
                for t in range(length):
                    if x[t] == last:
                        count += 1
                o[j - burn_in] = count
    return out
