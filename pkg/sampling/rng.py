"""Portable seeded random stream.

Draws come straight from numpy's PCG64 bit generator (seeded through
``SeedSequence``), whose raw 64-bit output is stable across platforms and
numpy releases. Integer and float conversions are done here so golden values
do not depend on ``Generator`` method implementations.
"""
from __future__ import annotations

import math

import numpy as np

_MASK64 = (1 << 64) - 1


class SeededStream:
    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._bits = np.random.PCG64(np.random.SeedSequence(self.seed))
        self.draws = 0

    def next_u64(self) -> int:
        self.draws += 1
        return int(self._bits.random_raw())

    def below(self, n: int) -> int:
        """Integer in [0, n) via a 64-bit multiply-shift."""

        if n <= 0:
            raise ValueError("upper bound must be positive")
        return (self.next_u64() * n) >> 64

    def unit(self) -> float:
        """Float in [0, 1) with 53 random bits."""

        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def angle(self) -> float:
        """Uniform orientation in (-pi, pi]."""

        return math.pi - self.unit() * 2.0 * math.pi


def derive_seed(*parts: int) -> int:
    """Stable 64-bit child seed for a (run seed, frame, purpose, ...) tuple."""

    entropy = [int(part) & _MASK64 for part in parts]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])
