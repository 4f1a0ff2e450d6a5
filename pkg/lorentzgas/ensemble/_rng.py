from __future__ import annotations

import dataclasses

import numpy as np

BLOCK_SIZE = 4096


def substream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based stream for (seed, key): Philox keyed by a spawned SeedSequence."""
    if seed < 0:
        msg = f"Seeds must be nonnegative, got {seed}"
        raise ValueError(msg)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


@dataclasses.dataclass(slots=True, kw_only=True, frozen=True)
class Block:
    index: int
    start: int
    count: int
    seed: int

    def generator(self, *purpose: int) -> np.random.Generator:
        return substream(self.seed, self.index, *purpose)


def partition(n_samples: int, seed: int, block_size: int = BLOCK_SIZE) -> list[Block]:
    """Fixed-size sample blocks; the split never depends on the worker count."""
    if n_samples < 1:
        msg = f"Need at least one sample, got {n_samples}"
        raise ValueError(msg)
    if block_size < 1:
        msg = f"Block size must be positive, got {block_size}"
        raise ValueError(msg)
    return [
        Block(index=index, start=start, count=min(block_size, n_samples - start), seed=seed)
        for index, start in enumerate(range(0, n_samples, block_size))
    ]
