"""Deterministic seeded randomness.

The stdlib only guarantees cross-version stability for random.random(),
not for its sampling helpers, so reproducible acceptance runs get their
own generator: splitmix64 (Vigna), whose whole definition is the few
integer operations below.  Identical seeds replay bit-for-bit on every
platform and Python version.
"""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit splitmix generator; state advances by the golden-ratio gamma."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform draw from [0, n) by rejection; no modulo bias."""
        if not 1 <= n <= 1 << 64:
            raise ValueError(f"randbelow needs 1 <= n <= 2**64, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n


def derive_seed(*parts) -> int:
    """Stable 64-bit child seed from a tag and parameters (sha256 based).

    Used to give every sampling site and every scan cell its own stream,
    so parallel and serial schedules draw identical values.
    """
    text = ":".join(str(part) for part in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def sample_distinct(rng: SplitMix64, universe: int, n: int) -> list[int]:
    """Uniform n-subset of range(universe) via Floyd's algorithm, sorted."""
    if not 0 <= n <= universe:
        raise ValueError(f"cannot sample {n} distinct values from {universe}")
    chosen: set[int] = set()
    for j in range(universe - n, universe):
        t = rng.randbelow(j + 1)
        chosen.add(t if t not in chosen else j)
    return sorted(chosen)
