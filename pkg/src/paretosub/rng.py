"""Named, seed-derived random streams.

Every randomized decision in an optimizer draws from a stream dedicated to its
role, so that changing how often one role draws never shifts another role's
sequence.  This is what makes ``run_bpo(p=0)`` reproduce ``run_po`` exactly.
"""
from __future__ import annotations

import numpy as np

STREAM_NAMES = ("select", "coin", "bias", "mutate", "sg")

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 finalizer (a fixed 64-bit integer hash)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def repetition_seed(master_seed: int, rep: int) -> int:
    """Seed of repetition ``rep``: master XOR the hashed repetition index."""
    return (int(master_seed) & _MASK64) ^ splitmix64(int(rep) & _MASK64)


class RngStreams:
    """Independent generators keyed by role, all derived from one 64-bit seed."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._streams = {}
        for index, name in enumerate(STREAM_NAMES):
            seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(index,))
            self._streams[name] = np.random.Generator(np.random.PCG64(seq))

    def __getitem__(self, name: str) -> np.random.Generator:
        return self._streams[name]

    @property
    def select(self) -> np.random.Generator:
        return self._streams["select"]

    @property
    def coin(self) -> np.random.Generator:
        return self._streams["coin"]

    @property
    def bias(self) -> np.random.Generator:
        return self._streams["bias"]

    @property
    def mutate(self) -> np.random.Generator:
        return self._streams["mutate"]

    @property
    def sg(self) -> np.random.Generator:
        return self._streams["sg"]
