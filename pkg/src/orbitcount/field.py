"""Arithmetic in the prime field F_p.

A :class:`FieldContext` carries the modulus; elements are plain machine
integers in [0, p).  Contexts are immutable and safe to share across
workers.  Extension fields GF(p^l) are intentionally out of scope; the
interface is kept small so they could be added behind it later.
"""

from __future__ import annotations

from .rngstream import RawStream


def _smallest_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


class FieldContext:
    """The field F_p for a prime p."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if p < 2:
            raise ValueError(f"modulus must be >= 2, got {p}")
        f = _smallest_factor(p)
        if f != p:
            raise ValueError(f"modulus {p} is not prime (factor {f})")
        self.p = p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def uniform(self, stream: RawStream) -> int:
        """Exactly uniform residue; rejection guards against modulo bias."""
        return stream.rand_below(self.p)

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p})"


def field_context(p: int) -> FieldContext:
    return FieldContext(p)


def uniform_scalar(ctx: FieldContext, stream: RawStream) -> int:
    return ctx.uniform(stream)
