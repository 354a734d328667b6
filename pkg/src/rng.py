"""Portable seeded randomness for folds, samples and synthetic corpora.

SplitMix64 plus Fisher-Yates, so any implementation fed the same seed
reproduces the same folds and samples bit for bit.
"""

from __future__ import annotations
from typing import List, MutableSequence, TypeVar

T = TypeVar("T")

MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit SplitMix generator (state advances by the golden gamma)."""

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + _GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Integer in [0, n) as `next() mod n`."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        return self.next() % n

    def random(self) -> float:
        """Float in [0, 1) from the top 53 bits."""
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def choice(self, items):
        if not items:
            raise ValueError("choice from an empty sequence")
        return items[self.below(len(items))]

    def weighted_index(self, weights) -> int:
        total = float(sum(weights))
        r = self.random() * total
        acc = 0.0
        for i, w in enumerate(weights):
            acc += w
            if r < acc:
                return i
        # float round-off: fall back to the last positive weight
        return max(i for i, w in enumerate(weights) if w > 0)


def shuffle(items: MutableSequence[T], rng: SplitMix64) -> MutableSequence[T]:
    """In-place Fisher-Yates, last index down to 1."""
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def sample_indices(n: int, m: int, rng: SplitMix64) -> List[int]:
    """m distinct indices of range(n), ascending (order of the population kept)."""
    if not 0 <= m <= n:
        raise ValueError(f"cannot sample {m} of {n}")
    if m == n:
        return list(range(n))
    order = shuffle(list(range(n)), rng)
    return sorted(order[:m])


__all__ = ["SplitMix64", "shuffle", "sample_indices", "MASK64"]
