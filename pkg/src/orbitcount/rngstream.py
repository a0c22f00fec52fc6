"""Counter-based random streams shared by every chain implementation.

All randomness in the chain code is drawn through a :class:`RawStream`, a
single-owner stream of raw 64-bit words from a Philox counter-based
generator.  Both the compiled and the pure-Python kernels consume words
through the same rejection protocol, so runs are bit-identical across
backends and reproducible across worker layouts.
"""

from __future__ import annotations

import numpy as np

_WORD_MAX = 2**64 - 1


class RawStream:
    """Stream of raw 64-bit words.  One stream per chain, never shared."""

    def __init__(self, bit_generator: np.random.Philox):
        self._bg = bit_generator

    @classmethod
    def from_seed(cls, master_seed: int, *path: int) -> "RawStream":
        """Derive a stream deterministically from (master_seed, path)."""
        ss = np.random.SeedSequence(
            entropy=int(master_seed), spawn_key=tuple(int(p) for p in path)
        )
        return cls(np.random.Philox(ss))

    @property
    def capsule(self):
        """PyCapsule handing the underlying bitgen_t to compiled kernels."""
        return self._bg.capsule

    def next_word(self) -> int:
        return int(self._bg.random_raw())

    def rand_below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection.

        A word w is accepted iff w <= 2^64 - 1 - (2^64 mod bound); the
        compiled kernels implement the identical acceptance rule.
        """
        lim = _WORD_MAX - ((1 << 64) % bound)
        while True:
            w = int(self._bg.random_raw())
            if w <= lim:
                return w % bound


def stream_for(master_seed: int, *path: int) -> RawStream:
    """Per-level stream: hash of (master_seed, path) into a Philox key."""
    return RawStream.from_seed(master_seed, *path)
