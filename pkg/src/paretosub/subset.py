"""Fixed-width subset representation over the ground set ``{0, ..., n-1}``."""
from __future__ import annotations

from typing import Iterable

import numpy as np


class SubsetMask:
    """Immutable membership bit vector with a cached cardinality.

    ``bits`` is a read-only boolean array of length ``n``.
    """

    __slots__ = ("bits", "cardinality")

    def __init__(self, bits, cardinality: int | None = None):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if bits.flags.writeable:
            bits = bits.copy()
            bits.flags.writeable = False
        self.bits = bits
        self.cardinality = int(np.count_nonzero(bits)) if cardinality is None else int(cardinality)

    @classmethod
    def empty(cls, n: int) -> "SubsetMask":
        return cls(np.zeros(n, dtype=bool), 0)

    @classmethod
    def full(cls, n: int) -> "SubsetMask":
        return cls(np.ones(n, dtype=bool), n)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "SubsetMask":
        bits = np.zeros(n, dtype=bool)
        idx = list(indices)
        if idx:
            if min(idx) < 0 or max(idx) >= n:
                raise IndexError(f"element index out of range for n={n}")
            bits[idx] = True
        return cls(bits)

    @classmethod
    def from_int(cls, n: int, value: int) -> "SubsetMask":
        if value < 0 or value >> n:
            raise ValueError(f"bitmask {value:#x} does not fit n={n}")
        raw = value.to_bytes((n + 7) // 8 or 1, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n]
        return cls(bits.astype(bool))

    @classmethod
    def from_hex(cls, n: int, text: str) -> "SubsetMask":
        return cls.from_int(n, int(text, 16))

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def to_int(self) -> int:
        packed = np.packbits(self.bits, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def to_hex(self) -> str:
        return format(self.to_int(), "x")

    def flip(self, flips: np.ndarray) -> "SubsetMask":
        """Return a new mask with the memberships marked in ``flips`` toggled."""
        return SubsetMask(np.logical_xor(self.bits, flips))

    def add(self, u: int) -> "SubsetMask":
        if self.bits[u]:
            return self
        bits = self.bits.copy()
        bits[u] = True
        return SubsetMask(bits, self.cardinality + 1)

    def __contains__(self, u: int) -> bool:
        return bool(self.bits[u])

    def __len__(self) -> int:
        return self.cardinality

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubsetMask):
            return NotImplemented
        return self.cardinality == other.cardinality and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.to_int()))

    def __repr__(self) -> str:
        return f"SubsetMask(n={self.n}, {set(self.indices().tolist())})"
