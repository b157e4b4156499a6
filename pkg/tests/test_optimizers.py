import math

import numpy as np
import pytest

from paretosub import (
    ConfigurationError,
    CoverageObjective,
    InfeasibleError,
    ModularObjective,
    ParetoPool,
    PoolEntry,
    RngStreams,
    SetFunction,
    SubsetMask,
)
from paretosub.optimizers import (
    BETA_REACHED_KAPPA,
    BiasState,
    extract_sc,
    extract_sm,
    kbpo_period,
    mutate,
    mutation_flips,
    run_bpo,
    run_bposc,
    run_greedy,
    run_greedy_cover,
    run_kbpo,
    run_po,
    run_stochastic_greedy,
    sg_sample_size,
)

from .conftest import CANONICAL_SETS


def counted_coverage():
    """Coverage oracle whose evaluations are counted outside the library."""
    calls = [0]
    sets = [frozenset(s) for s in CANONICAL_SETS]

    def f(X):
        calls[0] += 1
        return float(len(set().union(*(sets[i] for i in X)))) if X else 0.0

    return SetFunction(3, f), calls


class TestMutation:
    def test_single_element(self):
        rng = np.random.default_rng(0)
        assert mutate(SubsetMask.empty(1), 1, rng).indices().tolist() == [0]
        assert mutate(SubsetMask.full(1), 1, rng).cardinality == 0

    def test_flips_match_sequential_mutations(self):
        a, b = RngStreams(5), RngStreams(5)
        flips = mutation_flips(7, a, 200)
        for row in flips:
            m = mutate(SubsetMask.empty(7), 7, b)
            assert m.bits.tolist() == row.tolist()

    def test_single_flip_rate(self):
        flips = mutation_flips(10, np.random.default_rng(1), 200_000)
        rate = np.mean(flips.sum(1) == 1)
        assert rate == pytest.approx(0.9 ** 9, abs=0.005)
        assert 0.9 ** 9 == pytest.approx(0.38742, abs=1e-5)


class TestPO:
    def test_zero_iterations(self, coverage):
        pool, traj = run_po(coverage, 3, 0, RngStreams(0))
        assert pool.cardinalities() == [0] and coverage.queries == 0
        assert [(s.query_count, s.best_value) for s in traj.samples] == [(0, 0.0)]

    def test_golden_trajectory(self, coverage):
        pool, traj = run_po(coverage, 3, 40, RngStreams(42))
        assert pool.snapshot() == [
            {"cardinality": 0, "value": 0.0, "subset": "0"},
            {"cardinality": 1, "value": 3.0, "subset": "1"},
            {"cardinality": 2, "value": 5.0, "subset": "5"},
        ]
        assert coverage.queries == 18
        q, v = traj.series(2)
        assert q.tolist() == list(range(19))
        assert v.tolist() == [0.0] + [4.0] * 14 + [5.0] * 4

    def test_query_accounting(self):
        oracle, calls = counted_coverage()
        run_po(oracle, 3, 200, RngStreams(3))
        assert oracle.queries == calls[0] <= 200

    def test_budget_stops_run(self, coverage):
        run_po(coverage, 3, None, RngStreams(0), budget=10)
        assert coverage.queries == 10

    def test_archive_monotone(self):
        oracle = ModularObjective(np.linspace(1, 2, 12))
        P = 6
        seen = []

        def watch(t, pool):
            seen.append([pool.best_under(a).value for a in range(P)])

        run_po(oracle, P, 500, RngStreams(9), on_iteration=watch)
        arr = np.array(seen)
        assert len(seen) == 500 and (np.diff(arr, axis=0) >= 0).all()

    def test_deterministic(self, coverage):
        a, _ = run_po(coverage, 3, 100, RngStreams(11))
        b, _ = run_po(coverage.fresh(), 3, 100, RngStreams(11))
        assert a.same_as(b)

    def test_bad_arguments(self, coverage):
        with pytest.raises(ConfigurationError):
            run_po(coverage, 5, 10, RngStreams(0))
        with pytest.raises(ConfigurationError):
            run_po(coverage, 3, None, RngStreams(0))

    def test_finds_optimum_on_small_modular(self, modular):
        pool, _ = run_po(modular, 3, 400, RngStreams(2))
        assert extract_sm(pool, 2).value == 8.0


class TestBPO:
    def test_m(self):
        assert BiasState.create(100, 0.1, 0.5).M == 7

    def test_p_zero_is_po(self):
        for seed in range(10):
            oracle = ModularObjective(np.arange(1.0, 9.0))
            a, ta = run_po(oracle, 5, 150, RngStreams(seed))
            qa = oracle.queries
            b, tb, _ = run_bpo(oracle.fresh(), 5, 150, 0.0, 0.1, 0.5, RngStreams(seed))
            assert a.same_as(b) and ta.samples == tb.samples
            assert qa == ta.samples[-1].query_count

    def test_bias_bookkeeping_replay(self):
        P, T, p, eps, xi, seed = 8, 600, 0.5, 0.3, 0.5, 4
        oracle = ModularObjective(np.ones(10))
        _, _, state = run_bpo(oracle, P, T, p, eps, xi, RngStreams(seed))
        # the select/coin/bias streams do not depend on the pool, so replay them
        r = RngStreams(seed)
        M = math.ceil(math.log(P) / math.log(1 / xi))
        period = [math.ceil(math.e * math.log(1 / eps) / xi ** j) for j in range(1, M + 1)]
        beta, ell = [0] * M, [0] * M
        for _ in range(T):
            r.select.integers(P)
            if r.coin.random() < p:
                j = int(r.bias.integers(M))
                ell[j] += 1
                if ell[j] == period[j]:
                    ell[j], beta[j] = 0, beta[j] + 1
        assert state.period == period and state.beta == beta and state.ell == ell
        assert all(e < h for e, h in zip(state.ell, state.period))

    def test_query_accounting(self):
        oracle, calls = counted_coverage()
        run_bpo(oracle, 3, 300, 0.7, 0.2, 0.5, RngStreams(1))
        assert oracle.queries == calls[0] <= 300


class TestKBPO:
    def test_period(self):
        H = kbpo_period(100, 10, 0.1)
        assert H == pytest.approx(62.59, abs=0.01) and math.ceil(H) == 63

    def test_event_and_cap(self):
        oracle = ModularObjective(np.ones(6))
        _, traj, state = run_kbpo(oracle, 2, 4, 2000, 1.0, 0.5, RngStreams(0))
        period = math.ceil(kbpo_period(6, 2, 0.5))
        hits = [e for e in traj.events if e.name == BETA_REACHED_KAPPA]
        assert len(hits) == 1 and hits[0].iteration == 2 * period
        assert state.beta == min(6, 2000 // period)

    def test_kappa_must_be_below_P(self, coverage):
        with pytest.raises(ConfigurationError):
            run_kbpo(coverage, 3, 3, 10, 0.5, 0.1, RngStreams(0))


class TestBPOSC:
    def test_zero_iterations(self, coverage):
        pool, _, state = run_bposc(coverage, 5.0, 4, 0, 0.5, 0.2, 0.5, RngStreams(0))
        assert pool.cardinalities() == [0] and state.beta == [0] * state.M

    def test_full_bias_single_target(self, coverage):
        seen = set()
        pool, _, state = run_bposc(coverage, 5.0, 2, 300, 1.0, 0.2, 0.5, RngStreams(3),
                                   on_iteration=lambda t, pool: seen.update(pool.cardinalities()))
        assert state.M == 1
        # beta only moves onto a size the pool has actually held
        assert state.beta[0] in seen and state.beta[0] <= 1
        assert extract_sc(pool, 3.0, 1) == (pool.get(1), True)

    def test_reaches_cover(self, coverage):
        pool, _, _ = run_bposc(coverage, 5.0, 4, 400, 0.5, 0.2, 0.5, RngStreams(8))
        entry, ok = extract_sc(pool, 5.0, 3)
        assert ok and entry.cardinality == 2


class TestExtraction:
    def test_examples(self):
        pool = ParetoPool(4, 4)
        pool.insert(PoolEntry(SubsetMask.from_indices(4, [0]), 3.0))
        pool.insert(PoolEntry(SubsetMask.from_indices(4, [0, 2]), 5.0))
        assert extract_sm(pool, 1).value == 3.0
        assert extract_sm(pool, 3).value == 5.0
        assert extract_sc(pool, 4.0, 1).feasible is False
        assert extract_sc(pool, 4.0, 2).entry.cardinality == 2


class TestGreedy:
    def test_coverage(self, coverage):
        X, value, traj = run_greedy(coverage, 2)
        assert X.indices().tolist() == [0, 2] and value == 5.0
        assert coverage.queries == 3 + 2
        assert [s.query_count for s in traj.samples] == [0, 3, 5]

    def test_query_count(self):
        oracle = ModularObjective(np.arange(10.0))
        run_greedy(oracle, 4)
        assert oracle.queries == sum(10 - i for i in range(4))

    def test_lowest_index_tie_break(self):
        X, _, _ = run_greedy(ModularObjective([1.0, 1.0, 1.0]), 1)
        assert X.indices().tolist() == [0]

    def test_sample_size(self):
        assert sg_sample_size(100, 10, 0.1) == 24

    def test_sg_equals_greedy_when_sample_covers(self):
        oracle = ModularObjective([0.5, 4.0, 1.0, 3.0])
        assert sg_sample_size(4, 1, 0.01) >= 4
        X, v, _ = run_stochastic_greedy(oracle, 1, 0.01, RngStreams(0))
        G, g, _ = run_greedy(oracle.fresh(), 1)
        assert X == G and v == g

    def test_sg_queries(self):
        oracle = ModularObjective(np.ones(100))
        run_stochastic_greedy(oracle, 10, 0.1, RngStreams(0))
        assert oracle.queries == 240

    def test_cover(self, coverage):
        X, value = run_greedy_cover(coverage, 5.0)
        assert X.indices().tolist() == [0, 2] and value == 5.0
        assert run_greedy_cover(coverage, 0.0)[0].cardinality == 0
        with pytest.raises(InfeasibleError):
            run_greedy_cover(coverage, 6.0)
