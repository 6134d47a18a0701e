"""Deterministic hashing and pseudo-randomness used across the package.

Anything that needs reproducible "random" behavior (template choice,
bootstrap resampling, parameter init, shuffling) goes through the small
LCG below instead of the stdlib ``random`` module, so results are
bit-identical across runs and trivially reimplementable in another
language for cross-checking.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

# FNV-1a 64-bit constants.
FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211

# Knuth MMIX multiplier / increment.
LCG_MULT = 6364136223846793005
LCG_INC = 1442695040888963407


def fnv1a64(data: str | bytes) -> int:
    """64-bit FNV-1a hash of a string (UTF-8) or byte sequence."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = FNV_OFFSET
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & MASK64
    return h


def derive_seed(seed: int, label: str) -> int:
    """Stable sub-seed for a named stream, e.g. one tree of a forest."""
    return fnv1a64(f"{seed & MASK64}/{label}")


class Lcg64:
    """64-bit linear congruential generator: s' = s * LCG_MULT + LCG_INC mod 2^64."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state * LCG_MULT + LCG_INC) & MASK64
        return self.state

    def randrange(self, n: int) -> int:
        """Integer in [0, n) from the top 32 bits via multiply-shift.

        The low bits of a power-of-two-modulus LCG have short periods (the
        lowest bit alternates), so never reduce the raw state modulo n.
        """
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return ((self.next_u64() >> 32) * n) >> 32

    def float01(self) -> float:
        """Float in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) / float(1 << 53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.float01()

    def choice(self, items):
        return items[self.randrange(len(items))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), in draw order."""
        if k > n:
            raise ValueError("cannot sample more indices than available")
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < k:
            i = self.randrange(n)
            if i not in seen:
                seen.add(i)
                out.append(i)
        return out
