"""Counter-based 64-bit generator used by the instance generators.

Draw ``i`` (0-based) of a stream with seed ``s`` is the SplitMix64 finaliser
applied to ``s + (i + 1) * 0x9E3779B97F4A7C15 (mod 2**64)``.  This equals the
usual sequential SplitMix64 output, so the stream is reproducible from the
seed alone in any language.  Integer ranges are sampled by rejection, which
keeps them exactly uniform.
"""
from __future__ import annotations

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def draw(seed: int, index: int) -> int:
    return mix64((seed + (index + 1) * GAMMA) & MASK64)


class CounterRng:
    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        v = draw(self.seed, self.counter)
        self.counter += 1
        return v

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        if lo > hi:
            raise ValueError("empty range")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            v = self.next_u64()
            if v < limit:
                return lo + v % span
