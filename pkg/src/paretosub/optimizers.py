"""Pareto-optimization algorithms and greedy baselines.

Every Pareto variant shares one loop: choose a pool entry, flip each element's
membership with probability 1/n, and offer the mutant to the pool.  The
variants differ only in how the entry is chosen.

Queries are never spent on sets whose value is already known: a mutation
that flips nothing reproduces its parent, and mutants with ``|B'| >= P`` are
rejected before evaluation.  A run of ``T`` iterations therefore issues at
most ``T`` queries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .bounds import E, m_value
from .errors import ConfigurationError, InfeasibleError
from .objectives import ObjectiveOracle
from .pool import ParetoPool, PoolEntry
from .rng import RngStreams
from .subset import SubsetMask

BETA_REACHED_KAPPA = "beta_reached_kappa"


# -- trajectories ------------------------------------------------------------

class Sample(NamedTuple):
    query_count: int
    best_value: float
    cap: int


class Event(NamedTuple):
    iteration: int
    name: str
    query_count: int


@dataclass
class Trajectory:
    """Best-value-under-cap samples indexed by the run's cumulative query count."""

    caps: tuple
    sample_every: int = 1
    samples: list = field(default_factory=list)
    events: list = field(default_factory=list)

    def __post_init__(self):
        self.caps = tuple(int(c) for c in self.caps)
        if self.sample_every < 1:
            raise ConfigurationError("sample_every must be at least 1")
        self._last_q = -1

    def record(self, queries: int, best: Callable[[int], float]) -> None:
        if queries <= self._last_q:
            return
        self._last_q = queries
        for cap in self.caps:
            self.samples.append(Sample(queries, best(cap), cap))

    def maybe_record(self, queries: int, best: Callable[[int], float]) -> None:
        if queries % self.sample_every == 0:
            self.record(queries, best)

    def mark(self, iteration: int, name: str, queries: int, best=None) -> None:
        self.events.append(Event(iteration, name, queries))
        if best is not None:
            self.record(queries, best)

    def series(self, cap: int) -> tuple[np.ndarray, np.ndarray]:
        """(query_counts, best_values) for one cap."""
        rows = [s for s in self.samples if s.cap == cap]
        return (np.array([s.query_count for s in rows], dtype=np.int64),
                np.array([s.best_value for s in rows], dtype=np.float64))

    def final(self, cap: int) -> Sample:
        return [s for s in self.samples if s.cap == cap][-1]


# -- bias bookkeeping ----------------------------------------------------------

@dataclass
class BiasState:
    """Targets beta_j, selection counters ell_j and periods H_j for j = 1..M.

    Lists are 0-based: index ``j - 1`` holds target ``j``.
    """

    M: int
    H: list
    beta: list = None
    ell: list = None

    def __post_init__(self):
        self.beta = [0] * self.M if self.beta is None else self.beta
        self.ell = [0] * self.M if self.ell is None else self.ell
        self.period = [math.ceil(h) for h in self.H]

    @classmethod
    def create(cls, P: int, eps: float, xi: float) -> "BiasState":
        M = m_value(P, xi)
        return cls(M, [E * -math.log(eps) / xi ** j for j in range(1, M + 1)])


@dataclass
class KBiasState:
    H: float
    beta: int = 0
    ell: int = 0

    def __post_init__(self):
        self.period = math.ceil(self.H)


ScBiasState = BiasState


# -- mutation -----------------------------------------------------------------

def _flip_draw(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.random(n) < 1.0 / n


def mutate(B: SubsetMask, n: int, rng) -> SubsetMask:
    """Flip each element's membership independently with probability 1/n."""
    if n < 1:
        raise ConfigurationError("mutation needs a non-empty ground set")
    if isinstance(rng, RngStreams):
        rng = rng.mutate
    return B.flip(_flip_draw(rng, n))


def mutation_flips(n: int, rng, trials: int) -> np.ndarray:
    """Flip indicators of ``trials`` successive mutations, shape (trials, n).

    Consumes the generator exactly as ``trials`` calls of :func:`mutate` would.
    """
    if n < 1:
        raise ConfigurationError("mutation needs a non-empty ground set")
    if isinstance(rng, RngStreams):
        rng = rng.mutate
    return rng.random((trials, n)) < 1.0 / n


# -- the shared evolutionary loop -------------------------------------------------

def _check_run_args(oracle, P, T, budget):
    if oracle.n < 1:
        raise ConfigurationError("ground set must be non-empty")
    if not 1 <= P <= oracle.n + 1:
        raise ConfigurationError(f"P must lie in [1, n+1], got {P}")
    if T is None and budget is None:
        raise ConfigurationError("give an iteration count T or a query budget")
    if T is not None and T < 0:
        raise ConfigurationError("T must be non-negative")


def _evolve(oracle, P, T, streams, choose, caps, budget, sample_every, on_iteration,
            after=None, trajectory=None):
    n = oracle.n
    pool = ParetoPool(n, P)
    traj = trajectory or Trajectory(caps if caps is not None else (P - 1,), sample_every)
    q0 = oracle.queries
    best = lambda cap: pool.best_under(cap).value  # noqa: E731
    traj.record(0, best)
    mut = streams.mutate
    inv_n = 1.0 / n
    t = 0
    while T is None or t < T:
        if budget is not None and oracle.queries - q0 >= budget:
            break
        t += 1
        entry = choose(pool, t, traj, best)
        if entry is not None:
            flips = mut.random(n) < inv_n
            if flips.any():
                bits = np.logical_xor(entry.subset.bits, flips)
                card = int(np.count_nonzero(bits))
                if card < P:
                    mutant = SubsetMask(bits, card)
                    pool.insert(PoolEntry(mutant, oracle.value(mutant)))
                    traj.maybe_record(oracle.queries - q0, best)
        if after is not None:
            after(pool)
        if on_iteration is not None:
            on_iteration(t, pool)
    traj.record(oracle.queries - q0, best)
    return pool, traj, t


def run_po(oracle: ObjectiveOracle, P: int, T: int | None, rng: RngStreams,
           caps: Sequence[int] | None = None, *, budget: int | None = None,
           sample_every: int = 1, on_iteration=None):
    """Pareto Optimization: select a uniformly random cardinality slot each iteration."""
    _check_run_args(oracle, P, T, budget)
    select = rng.select

    def choose(pool, t, traj, best):
        return pool.get(int(select.integers(P)))

    pool, traj, _ = _evolve(oracle, P, T, rng, choose, caps, budget, sample_every, on_iteration)
    return pool, traj


def run_bpo(oracle: ObjectiveOracle, P: int, T: int | None, p: float, eps: float, xi: float,
            rng: RngStreams, caps: Sequence[int] | None = None, *, budget: int | None = None,
            sample_every: int = 1, on_iteration=None):
    """Biased Pareto Optimization over M = ceil(ln P / ln(1/xi)) targets.

    With probability ``p`` a target j is drawn and the slot of the best entry
    of size at most beta_j is used instead of the uniform slot; beta_j
    advances after ceil(H_j) such selections.  ``p = 0`` reproduces
    :func:`run_po` draw for draw.
    """
    _check_run_args(oracle, P, T, budget)
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"p must lie in [0, 1], got {p}")
    if not 0.0 < eps < 1.0 or not 0.0 < xi < 1.0:
        raise ConfigurationError("eps and xi must lie in (0, 1)")
    state = BiasState.create(P, eps, xi)
    select, coin, bias = rng.select, rng.coin, rng.bias

    def choose(pool, t, traj, best):
        i = int(select.integers(P))
        if coin.random() < p:
            j = int(bias.integers(state.M))
            i = pool.best_under(state.beta[j]).cardinality
            state.ell[j] += 1
            if state.ell[j] == state.period[j]:
                state.ell[j] = 0
                state.beta[j] += 1
        return pool.get(i)

    pool, traj, _ = _evolve(oracle, P, T, rng, choose, caps, budget, sample_every, on_iteration)
    return pool, traj, state


def kbpo_period(n: int, kappa: int, eps: float) -> float:
    """H = e n ln(1/eps) / kappa."""
    return E * n * -math.log(eps) / kappa


def run_kbpo(oracle: ObjectiveOracle, kappa: int, P: int, T: int | None, p: float, eps: float,
             rng: RngStreams, caps: Sequence[int] | None = None, *, budget: int | None = None,
             sample_every: int = 1, on_iteration=None):
    """κ-BPO: bias towards a single target beta that advances every ceil(H) selections.

    The iteration at which beta first equals ``kappa`` is recorded as the
    ``beta_reached_kappa`` trajectory event.
    """
    _check_run_args(oracle, P, T, budget)
    n = oracle.n
    if not 1 <= kappa <= n:
        raise ConfigurationError(f"kappa must lie in [1, n], got {kappa}")
    if not kappa < P:
        raise ConfigurationError(f"kappa-BPO needs kappa < P (kappa={kappa}, P={P})")
    if not 0.0 <= p <= 1.0 or not 0.0 < eps < 1.0:
        raise ConfigurationError("p must lie in [0, 1] and eps in (0, 1)")
    state = KBiasState(kbpo_period(n, kappa, eps))
    select, coin = rng.select, rng.coin
    q0 = oracle.queries
    if caps is None:
        caps = (kappa,)

    def choose(pool, t, traj, best):
        i = int(select.integers(P))
        if coin.random() < p:
            i = pool.best_under(state.beta).cardinality
            state.ell += 1
            if state.ell == state.period:
                state.ell = 0
                if state.beta < n:
                    state.beta += 1
                    if state.beta == kappa:
                        traj.mark(t, BETA_REACHED_KAPPA, oracle.queries - q0, best)
        return pool.get(i)

    pool, traj, _ = _evolve(oracle, P, T, rng, choose, caps, budget, sample_every, on_iteration)
    return pool, traj, state


def run_bposc(oracle: ObjectiveOracle, tau: float, P: int, T: int | None, p: float, eps: float,
              xi: float, rng: RngStreams, caps: Sequence[int] | None = None, *,
              budget: int | None = None, sample_every: int = 1, on_iteration=None):
    """Biased Pareto Optimization for submodular cover.

    With probability ``p`` a target i is drawn and the entry of size beta^i is
    mutated (the best entry below beta^i if that slot has since been
    vacated); otherwise an entry is drawn uniformly from the pool.  beta^i
    advances once it has been selected ceil(H_i) times since its last advance
    and the pool holds an entry of size beta^i + 1.

    ``tau`` does not steer the search; it is validated and kept for
    extraction with :func:`extract_sc`.
    """
    _check_run_args(oracle, P, T, budget)
    if tau < 0:
        raise ConfigurationError("tau must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"p must lie in [0, 1], got {p}")
    if not 0.0 < eps < 1.0 or not 0.0 < xi < 1.0:
        raise ConfigurationError("eps and xi must lie in (0, 1)")
    state = BiasState.create(P, eps, xi)
    select, coin, bias = rng.select, rng.coin, rng.bias

    def choose(pool, t, traj, best):
        if coin.random() < p:
            j = int(bias.integers(state.M))
            state.ell[j] += 1
            return pool.get(state.beta[j]) or pool.best_under(state.beta[j])
        cards = pool.cardinalities()
        return pool.slots[cards[int(select.integers(len(cards)))]]

    def after(pool):
        for j in range(state.M):
            if state.ell[j] >= state.period[j] and pool.get(state.beta[j] + 1) is not None:
                state.beta[j] += 1
                state.ell[j] = 0

    pool, traj, _ = _evolve(oracle, P, T, rng, choose, caps, budget, sample_every,
                            on_iteration, after=after)
    return pool, traj, state


# -- extraction -----------------------------------------------------------------

class CoverExtraction(NamedTuple):
    entry: PoolEntry
    feasible: bool


def extract_sm(pool: ParetoPool, kappa: int) -> PoolEntry:
    """Best pool entry of size at most ``kappa``."""
    return pool.best_under(kappa)


def extract_sc(pool: ParetoPool, tau: float, cap: int) -> CoverExtraction:
    """Best pool entry of size at most ``cap`` and whether it reaches ``tau``."""
    entry = pool.best_under(cap)
    return CoverExtraction(entry, entry.value >= tau)


# -- greedy baselines ---------------------------------------------------------------

def _best_addition(oracle, X, candidates):
    best_u, best_v = -1, -math.inf
    for u in candidates:
        v = oracle.value(X.add(int(u)))
        if v > best_v:
            best_u, best_v = int(u), v
    return best_u, best_v


def run_greedy(oracle: ObjectiveOracle, kappa: int):
    """Standard greedy: kappa rounds, each adding the best element (lowest index on ties).

    Returns ``(subset, value, trajectory)``; the trajectory has one sample
    per round plus the initial empty set.
    """
    n = oracle.n
    if not 0 <= kappa <= n:
        raise ConfigurationError(f"kappa must lie in [0, n], got {kappa}")
    q0 = oracle.queries
    X, value = SubsetMask.empty(n), 0.0
    traj = Trajectory((kappa,))
    traj.record(0, lambda cap: value)
    for _ in range(kappa):
        u, value = _best_addition(oracle, X, np.flatnonzero(~X.bits))
        X = X.add(u)
        traj.record(oracle.queries - q0, lambda cap: value)
    return X, value, traj


def sg_sample_size(n: int, kappa: int, eps: float) -> int:
    """ceil((n / kappa) ln(1/eps))."""
    return math.ceil(n / kappa * -math.log(eps))


def run_stochastic_greedy(oracle: ObjectiveOracle, kappa: int, eps: float, rng):
    """Stochastic greedy: each round scans a random sample of the remaining elements.

    Returns ``(subset, value, trajectory)``.  When the sample covers the
    whole remainder the run coincides with :func:`run_greedy`.
    """
    n = oracle.n
    if not 0.0 < eps < 1.0:
        raise ConfigurationError(f"eps must lie in (0, 1), got {eps}")
    if not 1 <= kappa <= n:
        raise ConfigurationError(f"kappa must lie in [1, n], got {kappa}")
    if isinstance(rng, RngStreams):
        rng = rng.sg
    s = sg_sample_size(n, kappa, eps)
    q0 = oracle.queries
    X, value = SubsetMask.empty(n), 0.0
    traj = Trajectory((kappa,))
    traj.record(0, lambda cap: value)
    for _ in range(kappa):
        remaining = np.flatnonzero(~X.bits)
        if s < remaining.size:
            remaining = np.sort(rng.choice(remaining, size=s, replace=False))
        u, value = _best_addition(oracle, X, remaining)
        X = X.add(u)
        traj.record(oracle.queries - q0, lambda cap: value)
    return X, value, traj


def run_greedy_cover(oracle: ObjectiveOracle, tau: float):
    """Add maximum-gain elements until f(X) >= tau; returns ``(subset, value)``."""
    n = oracle.n
    X, value = SubsetMask.empty(n), 0.0
    if tau <= 0:
        return X, value
    slack = 1e-12 * max(1.0, abs(tau))
    top = oracle.evaluate(SubsetMask.full(n))
    if tau > top + slack:
        raise InfeasibleError(f"threshold {tau} exceeds f(U) = {top}")
    while value < tau - slack and X.cardinality < n:
        u, value = _best_addition(oracle, X, np.flatnonzero(~X.bits))
        X = X.add(u)
    return X, value
