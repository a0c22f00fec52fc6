"""Dense linear algebra over F_p: rank, RREF, nullspace, matvec.

Thin contract layer over the selected kernel backend.  Matrices are
numpy uint8 arrays with entries in [0, p); all operations are pure
functions and safe to call concurrently.  F_2 gets a bit-packed
elimination path inside the backend; other primes use the generic
residue path.  Pivoting is deterministic (first nonzero, scanning left
to right, top to bottom), so nullspace bases are reproducible.
"""

from __future__ import annotations

import numpy as np

from ._backend import kernels


def as_matrix(mat, p: int) -> np.ndarray:
    M = np.asarray(mat, dtype=np.int64) % p
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={M.ndim}")
    return M.astype(np.uint8)


def rref(mat, p: int):
    """Reduced row echelon form.  Returns (rref, rank, pivot_cols)."""
    return kernels.rref(as_matrix(mat, p), p)


def rank(mat, p: int) -> int:
    return rref(mat, p)[1]


def nullspace_basis(mat, p: int) -> np.ndarray:
    """Basis of the right nullspace, shape (cols - rank, cols).

    Every row v satisfies mat @ v = 0 (mod p); rows are linearly
    independent by the free-variable construction.
    """
    return kernels.nullspace(as_matrix(mat, p), p)


def matvec(mat, vec, p: int) -> np.ndarray:
    M = np.asarray(mat, dtype=np.int64)
    v = np.asarray(vec, dtype=np.int64)
    return (M @ v) % p


def solve_is_zero(mat, vec, p: int) -> bool:
    """True iff mat @ vec = 0 over F_p."""
    return not np.any(matvec(mat, vec, p))
