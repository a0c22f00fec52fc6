"""Compare the compiled kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py

Both backends are bit-identical; this script only measures speed.  Each
workload is timed with its own fixed seed, and the output equality is
re-checked before timings are reported.
"""

import sys
import time

import numpy as np

from orbitcount import _purekernels
from orbitcount.pattern import ClosedPositionSet, level_pair
from orbitcount.rngstream import stream_for

try:
    from orbitcount import _kernels
except ImportError:
    print("compiled backend not available; build the extension first",
          file=sys.stderr)
    sys.exit(1)


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, compiled_fn, pure_fn, check=None):
    tc, rc = timeit(compiled_fn)
    tp, rp = timeit(pure_fn)
    if check is not None:
        assert check(rc, rp), f"{name}: backend outputs differ"
    print(f"{name:38s} compiled {tc * 1e3:9.2f} ms   "
          f"python {tp * 1e3:9.2f} ms   speedup {tp / tc:7.1f}x")


def main():
    rng = np.random.default_rng(0)

    mats2 = [rng.integers(0, 2, size=(64, 64)).astype(np.uint8)
             for _ in range(200)]
    bench("rref F_2 64x64 (200 matrices)",
          lambda: [_kernels.rref(M, 2)[1] for M in mats2],
          lambda: [_purekernels.rref(M, 2)[1] for M in mats2],
          check=lambda a, b: a == b)

    mats3 = [rng.integers(0, 3, size=(40, 40)).astype(np.uint8)
             for _ in range(200)]
    bench("rref F_3 40x40 (200 matrices)",
          lambda: [_kernels.rref(M, 3)[1] for M in mats3],
          lambda: [_purekernels.rref(M, 3)[1] for M in mats3],
          check=lambda a, b: a == b)

    J = ClosedPositionSet.full(8)
    xs = []
    jr, jc = J.rows_cols
    for _ in range(200):
        x = np.eye(8, dtype=np.uint8)
        x[jr, jc] = rng.integers(0, 2, size=len(J))
        xs.append(x)
    bench("centralizer nullspace U_8(F_2) (200)",
          lambda: [_kernels.pattern_nullspace(x, J.var_index, len(J), 2).shape[0]
                   for x in xs],
          lambda: [_purekernels.pattern_nullspace(x, J.var_index, len(J), 2).shape[0]
                   for x in xs],
          check=lambda a, b: a == b)

    Jm, Jprev, (ar, ac) = level_pair(6, 15)
    jr, jc = Jm.rows_cols
    args = (6, 2, Jm.var_index, jr, jc, Jprev.var_index, len(Jprev),
            ar - 1, ac - 1, 100, 900)
    bench("chain level n=6 q=2 (1000 steps)",
          lambda: _kernels.run_pattern_level(*args, stream_for(1)),
          lambda: _purekernels.run_pattern_level(*args, stream_for(1)),
          check=np.array_equal)

    bench("multiset level n=20 k=10 (2000 steps)",
          lambda: _kernels.run_multiset_level(20, 10, 100, 1900, stream_for(2)),
          lambda: _purekernels.run_multiset_level(20, 10, 100, 1900, stream_for(2)),
          check=np.array_equal)


if __name__ == "__main__":
    main()
