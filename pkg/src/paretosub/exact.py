"""Brute-force ground truth for small instances.

Nothing here touches an oracle's query counter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError, InfeasibleError
from .objectives import ObjectiveOracle, _membership, value_table
from .subset import SubsetMask

MAX_N = 20
MAX_SUBSETS = 2_000_000
VERIFY_MAX_N = 12
TOL = 1e-9


@dataclass
class ExactResult:
    opt_value: float
    opt_set: SubsetMask
    enumerated: int

    @property
    def cardinality(self) -> int:
        return self.opt_set.cardinality


def _subsets_up_to(n, k):
    return sum(math.comb(n, i) for i in range(k + 1))


def _check_size(n, k):
    if n > MAX_N or _subsets_up_to(n, k) > MAX_SUBSETS:
        raise CapacityError(
            f"enumerating subsets of size <= {k} over n={n} exceeds "
            f"n <= {MAX_N} / {MAX_SUBSETS} subsets"
        )


def brute_force_sm(oracle: ObjectiveOracle, kappa: int) -> ExactResult:
    """Exact max of f over |X| <= kappa.

    Subsets are visited by size, then lexicographically, and only a strictly
    better value replaces the incumbent, so ties resolve to the smallest,
    lexicographically first witness.
    """
    n = oracle.n
    kappa = max(0, min(kappa, n))
    _check_size(n, kappa)
    best_set, best_value, count = (), 0.0, 0
    for size in range(kappa + 1):
        for combo in combinations(range(n), size):
            count += 1
            value = oracle.evaluate(SubsetMask.from_indices(n, combo))
            if count == 1 or value > best_value:
                best_set, best_value = combo, value
    return ExactResult(best_value, SubsetMask.from_indices(n, best_set), count)


def brute_force_sc(oracle: ObjectiveOracle, tau: float) -> ExactResult:
    """Smallest subset with f(X) >= tau, lexicographically first among ties."""
    n = oracle.n
    if n > MAX_N:
        raise CapacityError(f"n={n} exceeds the exact-cover limit {MAX_N}")
    slack = 1e-12 * max(1.0, abs(tau))
    top = oracle.evaluate(SubsetMask.full(n))
    if tau > top + slack:
        raise InfeasibleError(f"threshold {tau} exceeds f(U) = {top}")
    count = 0
    for size in range(n + 1):
        if count + math.comb(n, size) > MAX_SUBSETS:
            raise CapacityError(f"exact cover over n={n} needs more than {MAX_SUBSETS} subsets")
        for combo in combinations(range(n), size):
            count += 1
            X = SubsetMask.from_indices(n, combo)
            value = oracle.evaluate(X)
            if value >= tau - slack:
                return ExactResult(value, X, count)
    raise InfeasibleError(f"no subset reaches {tau}")  # unreachable: U itself qualifies


@dataclass
class VerificationReport:
    monotone: bool
    submodular: bool
    worst_violation: float

    def to_json(self) -> dict:
        return {"monotone": self.monotone, "submodular": self.submodular,
                "worst_violation": self.worst_violation}


def _submasks(mask: int, n: int) -> np.ndarray:
    members = np.array([1 << u for u in range(n) if (mask >> u) & 1], dtype=np.int64)
    return _membership(members.size) @ members


def verify_oracle(oracle: ObjectiveOracle, tol: float = TOL) -> VerificationReport:
    """Exhaustively check monotonicity and diminishing returns.

    Monotonicity is checked on every pair A ⊆ B and submodularity on every
    A ⊆ B with x outside B.  ``worst_violation`` is the largest amount by
    which either inequality fails (0 when both hold everywhere).
    """
    n = oracle.n
    if n > VERIFY_MAX_N:
        raise CapacityError(f"verification enumerates 3**n pairs; n={n} > {VERIFY_MAX_N}")
    v = value_table(oracle)
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    # gain[m, x] = f(m + x) - f(m), NaN where x is already in m
    gain = np.full((size, n), np.nan)
    for x in range(n):
        absent = (masks >> x) & 1 == 0
        gain[absent, x] = v[masks[absent] | (1 << x)] - v[masks[absent]]
    mono_worst = 0.0
    sub_worst = 0.0
    for B in range(size):
        A = _submasks(B, n)
        mono_worst = max(mono_worst, float((v[A] - v[B]).max()))
        outside = [x for x in range(n) if not (B >> x) & 1]
        if outside:
            diff = gain[B, outside][None, :] - gain[np.ix_(A, outside)]
            sub_worst = max(sub_worst, float(diff.max()))
    return VerificationReport(mono_worst <= tol, sub_worst <= tol, max(mono_worst, sub_worst))
