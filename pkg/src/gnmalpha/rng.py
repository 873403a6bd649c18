"""Counter-based, splittable randomness.

Every random word is a pure function of ``(master, stream_index, counter)``::

    key  = mix64(master ^ mix64(stream_index ^ STREAM_SALT))
    word = mix64(key + GOLDEN * (counter + 1))        (mod 2**64)

``mix64`` is the SplitMix64 finalizer, so a stream is the SplitMix64 sequence
started from ``key``.  There is no global state; two calls with equal
arguments produce identical words on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM_SALT = 0xD1B54A32D192ED03
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def stream_key(master: int, stream_index: int) -> int:
    return mix64((master & MASK64) ^ mix64((stream_index & MASK64) ^ STREAM_SALT))


def word(master: int, stream_index: int, counter: int) -> int:
    """The 64-bit word at position ``counter`` of stream ``(master, stream_index)``."""
    return mix64(stream_key(master, stream_index) + GOLDEN * (counter + 1))


@dataclass(frozen=True)
class SeedSpec:
    master: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.master <= MASK64 and 0 <= self.stream_index <= MASK64):
            raise ValueError("seed fields must be unsigned 64-bit integers")

    def stream(self) -> "Stream":
        return Stream(self)

    def child(self, stream_index: int) -> "SeedSpec":
        return SeedSpec(self.master, stream_index)


class Stream:
    """Sequential reader over one counter-based stream."""

    def __init__(self, seed: SeedSpec, counter: int = 0):
        self.seed = seed
        self.key = stream_key(seed.master, seed.stream_index)
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + GOLDEN * self.counter)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randbelow(self, bound: int) -> int:
        """Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound > MASK64:
            # wide bounds: rejection on enough concatenated words
            nbits = bound.bit_length()
            nwords = (nbits + 63) // 64
            while True:
                x = 0
                for _ in range(nwords):
                    x = (x << 64) | self.next_u64()
                x >>= nwords * 64 - nbits
                if x < bound:
                    return x
        threshold = ((1 << 64) - bound) % bound
        while True:
            prod = self.next_u64() * bound
            if (prod & MASK64) >= threshold:
                return prod >> 64

    def words(self, count: int) -> np.ndarray:
        """The next ``count`` words as a uint64 array (vectorised ``next_u64``)."""
        idx = np.arange(self.counter + 1, self.counter + 1 + count, dtype=np.uint64)
        self.counter += count
        with np.errstate(over="ignore"):
            z = np.uint64(self.key) + np.uint64(GOLDEN) * idx
            return _mix64_array(z)

    def uniforms(self, count: int) -> np.ndarray:
        return (self.words(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53
