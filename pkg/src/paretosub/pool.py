"""The archive of mutually non-dominated (subset, value) pairs."""
from __future__ import annotations

from dataclasses import dataclass

from .subset import SubsetMask


@dataclass(frozen=True)
class PoolEntry:
    subset: SubsetMask
    value: float

    @property
    def cardinality(self) -> int:
        return self.subset.cardinality


def precedes(x: PoolEntry, y: PoolEntry) -> bool:
    """``x ⪯ y``: y is at least as valuable and no larger."""
    return y.value >= x.value and y.cardinality <= x.cardinality


def dominates(y: PoolEntry, x: PoolEntry) -> bool:
    """``x ≺ y``: y weakly dominates x with at least one strict inequality."""
    return precedes(x, y) and (y.value > x.value or y.cardinality < x.cardinality)


def equivalent(x: PoolEntry, y: PoolEntry) -> bool:
    return x.value == y.value and x.cardinality == y.cardinality


class ParetoPool:
    """Cardinality-indexed pool with capacity ``P``.

    Slot ``c`` holds the unique entry of cardinality ``c`` or ``None``.
    Present entries have strictly increasing values, and slot 0 always holds
    the empty set with value 0.
    """

    def __init__(self, n: int, P: int):
        if P < 1:
            raise ValueError("pool capacity P must be at least 1")
        self.n = n
        self.P = P
        self.slots: list[PoolEntry | None] = [None] * P
        self.slots[0] = PoolEntry(SubsetMask.empty(n), 0.0)

    def __len__(self) -> int:
        return sum(e is not None for e in self.slots)

    def __iter__(self):
        return (e for e in self.slots if e is not None)

    def cardinalities(self) -> list[int]:
        return [c for c, e in enumerate(self.slots) if e is not None]

    def get(self, i: int) -> PoolEntry | None:
        """Entry of cardinality ``i``, if present."""
        if 0 <= i < self.P:
            return self.slots[i]
        return None

    def best_under(self, cap: int) -> PoolEntry:
        """Highest-valued entry of cardinality at most ``cap``."""
        c = min(cap, self.P - 1)
        slots = self.slots
        while slots[c] is None:
            c -= 1
        return slots[c]

    def max_entry(self) -> PoolEntry:
        return self.best_under(self.P - 1)

    def insert(self, candidate: PoolEntry) -> bool:
        """Add ``candidate`` unless it is too large or weakly dominated.

        On success every entry it dominates is dropped.  Returns whether the
        candidate was added.
        """
        c = candidate.cardinality
        if c >= self.P:
            return False
        v = candidate.value
        # values increase with cardinality, so the best weak dominator sits at or below c
        if self.best_under(c).value >= v:
            return False
        slots = self.slots
        slots[c] = candidate
        for k in range(c + 1, self.P):
            e = slots[k]
            if e is not None:
                if e.value > v:
                    break
                slots[k] = None
        return True

    def snapshot(self) -> list[dict]:
        """JSON-ready list of ``{cardinality, value, subset}`` with hex bitmasks."""
        return [
            {"cardinality": e.cardinality, "value": e.value, "subset": e.subset.to_hex()}
            for e in self
        ]

    @classmethod
    def from_snapshot(cls, n: int, P: int, rows: list[dict]) -> "ParetoPool":
        pool = cls(n, P)
        for row in rows:
            entry = PoolEntry(SubsetMask.from_hex(n, row["subset"]), float(row["value"]))
            if entry.cardinality != row["cardinality"]:
                raise ValueError("snapshot cardinality does not match its bitmask")
            pool.slots[entry.cardinality] = entry
        return pool

    def same_as(self, other: "ParetoPool") -> bool:
        """Exact equality of slots, subsets and values."""
        if self.P != other.P:
            return False
        for a, b in zip(self.slots, other.slots):
            if (a is None) != (b is None):
                return False
            if a is not None and (a.value != b.value or a.subset != b.subset):
                return False
        return True


def pool_insert(pool: ParetoPool, candidate: PoolEntry) -> bool:
    return pool.insert(candidate)


def get_by_cardinality(pool: ParetoPool, i: int) -> PoolEntry | None:
    return pool.get(i)


def best_under(pool: ParetoPool, cap: int) -> PoolEntry:
    return pool.best_under(cap)
