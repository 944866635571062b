"""Portable seeded PRNG used by the graph generators.

The generator is xorshift64* (Vigna, 2016).  The 64-bit state is initialised
by one round of splitmix64 applied to the seed, then each step is::

    x ^= x >> 12
    x ^= x << 25        (mod 2**64)
    x ^= x >> 27
    out = x * 0x2545F4914F6CDD1D   (mod 2**64)

Everything is plain integer arithmetic, so any language can reproduce the
same stream bit for bit.
"""

from __future__ import annotations

from fractions import Fraction

MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def probability_threshold(p) -> int:
    """Integer threshold ``t`` with ``P[(u64 >> 11) < t] == p`` (to 2**-53)."""
    frac = Fraction(p)
    if not 0 <= frac <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return int(frac * (1 << 53))


class XorShift64Star:
    def __init__(self, seed: int):
        state = splitmix64(seed & MASK64)
        # xorshift has a single absorbing zero state
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & MASK64

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        reject_under = (1 << 64) % bound
        while True:
            x = self.next_u64()
            if x >= reject_under:
                return x % bound

    def coin(self, threshold: int) -> bool:
        """True with probability ``threshold / 2**53``."""
        return (self.next_u64() >> 11) < threshold
