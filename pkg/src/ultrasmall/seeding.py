"""Seed bookkeeping: one (seed, stream) pair fixes every draw in a run.

Substreams are derived through numpy's SeedSequence with a spawn key of
(stream, *path), where path entries name the consumer (a generator stage,
a replica index, ...). String tags are folded to stable 32-bit ints, so
the same (seed, stream, path) always yields the same stream regardless of
scheduling or worker count.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngSeed:
    """64-bit master seed plus a substream id."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if not 0 <= int(self.stream) < 2**64:
            raise ValueError("stream must fit in 64 bits")


def _fold(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode())
    return int(part)


def seed_sequence(seed: RngSeed, *path) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        entropy=int(seed.seed), spawn_key=tuple([int(seed.stream)] + [_fold(p) for p in path])
    )


def generator(seed: RngSeed, *path) -> np.random.Generator:
    """PCG64 generator on the named substream."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *path)))


def kernel_state(seed: RngSeed, *path) -> np.uint64:
    """64-bit state word for the splitmix-based numba kernels."""
    return np.uint64(seed_sequence(seed, *path).generate_state(1, np.uint64)[0])


def derive(seed: RngSeed, *path) -> RngSeed:
    """Child RngSeed on the named substream, e.g. one per (n, replica)."""
    words = seed_sequence(seed, *path).generate_state(2, np.uint64)
    return RngSeed(int(words[0]), int(words[1]))
