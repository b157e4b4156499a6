"""Value oracles for monotone (weakly) submodular set functions.

An oracle maps a :class:`SubsetMask` to a non-negative real and counts how many
times it was asked.  Algorithms only ever call :meth:`ObjectiveOracle.value`;
exhaustive verification code uses :meth:`ObjectiveOracle.evaluate`, which
leaves the counter alone so that benchmark query counts stay meaningful.
"""
from __future__ import annotations

import copy
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapacityError, ConfigurationError, NumericDomainError
from .subset import SubsetMask

PSD_TOL = 1e-9
SYMMETRY_TOL = 1e-9


class ObjectiveOracle:
    """Base class; subclasses implement ``_evaluate(bits) -> float``."""

    kind = "abstract"

    def __init__(self, n: int):
        if n < 0:
            raise ConfigurationError("ground set size must be non-negative")
        self.n = int(n)
        self.queries = 0

    def _evaluate(self, bits: np.ndarray) -> float:
        raise NotImplementedError

    def _check(self, X: SubsetMask) -> None:
        if X.n != self.n:
            raise ConfigurationError(
                f"subset over {X.n} elements given to a {self.kind} oracle with n={self.n}"
            )

    def value(self, X: SubsetMask) -> float:
        """Counted evaluation of f(X)."""
        self._check(X)
        self.queries += 1
        return self._evaluate(X.bits)

    __call__ = value

    def evaluate(self, X: SubsetMask) -> float:
        """Uncounted evaluation, reserved for verification code."""
        self._check(X)
        return self._evaluate(X.bits)

    def fresh(self) -> "ObjectiveOracle":
        """A handle sharing the (immutable) data with its own zeroed counter."""
        clone = copy.copy(self)
        clone.queries = 0
        return clone

    def to_json(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} has no JSON form")


class ModularObjective(ObjectiveOracle):
    """f(X) = sum of non-negative weights of X."""

    kind = "modular"

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or np.any(w < 0):
            raise ConfigurationError("modular weights must be a 1-d non-negative vector")
        super().__init__(len(w))
        self.weights = w

    def _evaluate(self, bits):
        return float(self.weights[bits].sum())

    def to_json(self):
        return {"kind": self.kind, "weights": self.weights.tolist()}


class CoverageObjective(ObjectiveOracle):
    """Weighted coverage: total weight of items in the union of the chosen sets."""

    kind = "coverage"

    def __init__(self, sets: Sequence[Iterable[int]], m: int | None = None,
                 weights: Sequence[float] | None = None):
        sets = [sorted({int(i) for i in s}) for s in sets]
        top = max((s[-1] for s in sets if s), default=-1)
        if any(s and s[0] < 0 for s in sets):
            raise ConfigurationError("item indices must be non-negative")
        if m is None:
            m = top + 1 if weights is None else len(weights)
        if top >= m:
            raise ConfigurationError(f"item index {top} out of range for m={m}")
        if weights is None:
            w = np.ones(m)
        else:
            w = np.asarray(weights, dtype=np.float64)
            if w.shape != (m,) or np.any(w < 0):
                raise ConfigurationError("coverage weights must be m non-negative reals")
        super().__init__(len(sets))
        self.sets = sets
        self.m = int(m)
        self.item_weights = w
        self.incidence = np.zeros((len(sets), m), dtype=bool)
        for i, s in enumerate(sets):
            self.incidence[i, s] = True

    def _evaluate(self, bits):
        if not bits.any():
            return 0.0
        covered = self.incidence[bits].any(axis=0)
        return float(self.item_weights[covered].sum())

    def to_json(self):
        out = {"kind": self.kind, "sets": self.sets, "m": self.m}
        if not np.all(self.item_weights == 1.0):
            out["weights"] = self.item_weights.tolist()
        return out


class FacilityLocationObjective(ObjectiveOracle):
    """f(X) = sum_j max_{i in X} W[i, j], with the empty max taken as 0."""

    kind = "facility_location"

    def __init__(self, W):
        W = np.asarray(W, dtype=np.float64)
        if W.ndim != 2:
            raise ConfigurationError("similarity matrix must be two-dimensional")
        if np.any(W < 0) or not np.all(np.isfinite(W)):
            raise ConfigurationError("similarities must be finite and non-negative")
        super().__init__(W.shape[0])
        self.W = W

    def _evaluate(self, bits):
        if not bits.any():
            return 0.0
        return float(self.W[bits].max(axis=0).sum())

    def to_json(self):
        return {"kind": self.kind, "W": self.W.tolist()}


class DppObjective(ObjectiveOracle):
    """f(X) = log det(I + L_X) for a symmetric PSD kernel L."""

    kind = "dpp"

    def __init__(self, L):
        L = np.asarray(L, dtype=np.float64)
        if L.ndim != 2 or L.shape[0] != L.shape[1]:
            raise ConfigurationError("DPP kernel must be square")
        if not np.allclose(L, L.T, rtol=0.0, atol=SYMMETRY_TOL):
            raise ConfigurationError("DPP kernel must be symmetric")
        if L.size and np.linalg.eigvalsh(L).min() < -PSD_TOL:
            raise NumericDomainError("DPP kernel is not positive semidefinite")
        super().__init__(L.shape[0])
        self.L = L

    def _evaluate(self, bits):
        idx = np.flatnonzero(bits)
        if idx.size == 0:
            return 0.0
        sub = self.L[np.ix_(idx, idx)] + np.eye(idx.size)
        try:
            chol = np.linalg.cholesky(sub)
        except np.linalg.LinAlgError as exc:
            raise NumericDomainError("I + L_X is not positive definite") from exc
        return float(2.0 * np.log(np.diag(chol)).sum())

    def to_json(self):
        return {"kind": self.kind, "L": self.L.tolist()}


class SetFunction(ObjectiveOracle):
    """Wraps an arbitrary Python function of a frozenset of element indices."""

    kind = "function"

    def __init__(self, n: int, func: Callable[[frozenset], float]):
        super().__init__(n)
        self.func = func

    def _evaluate(self, bits):
        return float(self.func(frozenset(np.flatnonzero(bits).tolist())))


# -- exhaustive tables -------------------------------------------------------

@lru_cache(maxsize=32)
def _membership(k: int) -> np.ndarray:
    """Row r holds the binary digits of r (little-endian), shape (2**k, k)."""
    rows = np.arange(1 << k, dtype=np.int64)
    return ((rows[:, None] >> np.arange(k)) & 1).astype(np.int64)


def value_table(oracle: ObjectiveOracle, max_n: int = 16) -> np.ndarray:
    """Uncounted values of f on all 2**n subsets, indexed by integer bitmask."""
    n = oracle.n
    if n > max_n:
        raise CapacityError(f"exhaustive table over n={n} exceeds the limit n<={max_n}")
    bits = _membership(n).astype(bool)
    return np.array([oracle._evaluate(row) for row in bits], dtype=np.float64)


def estimate_gamma(oracle: ObjectiveOracle, tol: float = 1e-12) -> float:
    """Submodularity ratio by exhaustive enumeration of all pairs X ⊆ Y.

    Returns the smallest ratio of summed singleton gains at X over the joint
    gain of Y \\ X, clamped to [0, 1]; 1.0 when no pair has a positive joint
    gain.  Only feasible for ``n <= 15``.
    """
    n = oracle.n
    if n > 15:
        raise CapacityError(f"estimate_gamma enumerates 3**n pairs; n={n} > 15")
    v = value_table(oracle)
    scale = max(1.0, float(np.abs(v).max()))
    best = 1.0
    for X in range(1 << n):
        comp = [u for u in range(n) if not (X >> u) & 1]
        k = len(comp)
        if k < 2:
            continue  # |Y \ X| <= 1 gives ratio exactly 1
        member = _membership(k)
        comp_bits = np.array([1 << u for u in comp], dtype=np.int64)
        gains = v[X | comp_bits] - v[X]
        D = member @ comp_bits
        numer = member @ gains
        denom = v[X | D] - v[X]
        ok = denom > tol * scale
        if ok.any():
            best = min(best, float((numer[ok] / denom[ok]).min()))
    return min(1.0, max(0.0, best))
