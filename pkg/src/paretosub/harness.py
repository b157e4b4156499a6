"""Repeated, seeded benchmark runs normalized by the standard greedy algorithm.

Values are divided by the greedy value and query counts by ``kappa * n``, the
nominal cost of greedy, so that greedy itself ends at (1.0, 1.0).
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .datasets import instance_from_json
from .objectives import ObjectiveOracle
from .optimizers import (
    BETA_REACHED_KAPPA,
    run_bpo,
    run_greedy,
    run_kbpo,
    run_po,
    run_stochastic_greedy,
)
from .rng import RngStreams, repetition_seed

STOCHASTIC = ("sg", "po", "bpo", "kbpo")
KNOWN = ("greedy",) + STOCHASTIC
DEFAULT_BUDGET_X = 3.0


@dataclass
class AlgorithmConfig:
    name: str
    P: int | None = None
    T: int | None = None
    budget: int | None = None
    budget_x: float | None = None
    p: float = 0.5
    eps: float = 0.1
    xi: float = 0.5
    label: str | None = None

    @property
    def key(self) -> str:
        return self.label or self.name


@dataclass
class ExperimentConfig:
    dataset: dict
    kappa: int
    algorithms: list
    repetitions: int = 1
    seed: int = 0
    sample_every: int = 1
    output_dir: str | None = None
    objective: str | None = None

    @classmethod
    def from_dict(cls, raw: dict, base_dir=None) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigurationError("config must be a JSON object")
        missing = [k for k in ("dataset", "kappa", "algorithms") if k not in raw]
        if missing:
            raise ConfigurationError(f"config is missing fields: {', '.join(missing)}")
        unknown = set(raw) - {"dataset", "kappa", "algorithms", "repetitions", "seed",
                              "sample_every", "output_dir", "objective"}
        if unknown:
            raise ConfigurationError(f"unknown config fields: {', '.join(sorted(unknown))}")
        algos = []
        for i, a in enumerate(raw["algorithms"]):
            if isinstance(a, str):
                a = {"name": a}
            try:
                algos.append(AlgorithmConfig(**a))
            except TypeError as exc:
                raise ConfigurationError(f"algorithms[{i}]: {exc}") from None
        dataset = dict(raw["dataset"])
        if base_dir is not None and "csv" in dataset and not Path(dataset["csv"]).is_absolute():
            dataset["csv"] = str(Path(base_dir) / dataset["csv"])
        cfg = cls(dataset, raw["kappa"], algos, raw.get("repetitions", 1), raw.get("seed", 0),
                  raw.get("sample_every", 1), raw.get("output_dir"), raw.get("objective"))
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_dict(raw, base_dir=path.parent)

    def validate(self, n: int | None = None) -> None:
        """Raise one :class:`ConfigurationError` naming every offending field."""
        bad = []
        if not isinstance(self.kappa, int) or self.kappa < 1:
            bad.append("kappa (must be a positive integer)")
        elif n is not None and self.kappa > n:
            bad.append(f"kappa (exceeds n={n})")
        if not isinstance(self.repetitions, int) or self.repetitions < 1:
            bad.append("repetitions (must be >= 1)")
        if not isinstance(self.sample_every, int) or self.sample_every < 1:
            bad.append("sample_every (must be >= 1)")
        seen = set()
        for i, a in enumerate(self.algorithms):
            where = f"algorithms[{i}]"
            if a.name not in KNOWN:
                bad.append(f"{where}.name (unknown algorithm {a.name!r})")
                continue
            if a.key in seen:
                bad.append(f"{where}.label (duplicate {a.key!r})")
            seen.add(a.key)
            if a.name in ("po", "bpo", "kbpo"):
                P = self.pareto_size(a)
                if isinstance(self.kappa, int) and P <= self.kappa:
                    bad.append(f"{where}.P (kappa={self.kappa} must be < P={P})")
                if n is not None and P > n + 1:
                    bad.append(f"{where}.P (exceeds n+1={n + 1})")
                if a.T is not None and a.T < 0:
                    bad.append(f"{where}.T (must be >= 0)")
                if a.budget is not None and a.budget <= 0:
                    bad.append(f"{where}.budget (must be positive)")
                if a.budget_x is not None and a.budget_x <= 0:
                    bad.append(f"{where}.budget_x (must be positive)")
            if a.name in ("bpo", "kbpo") and not 0.0 < a.p <= 1.0:
                bad.append(f"{where}.p (must lie in (0, 1])")
            if a.name in ("sg", "bpo", "kbpo") and not 0.0 < a.eps < 1.0:
                bad.append(f"{where}.eps (must lie in (0, 1))")
            if a.name == "bpo" and not 0.0 < a.xi < 1.0:
                bad.append(f"{where}.xi (must lie in (0, 1))")
        if bad:
            raise ConfigurationError("invalid config: " + "; ".join(bad))

    def pareto_size(self, a: AlgorithmConfig) -> int:
        return a.P if a.P is not None else 2 * self.kappa

    def query_budget(self, a: AlgorithmConfig, n: int) -> int | None:
        if a.budget is not None:
            return a.budget
        if a.T is not None and a.budget_x is None:
            return None
        return int(math.ceil((a.budget_x or DEFAULT_BUDGET_X) * self.kappa * n))

    def build_oracle(self) -> ObjectiveOracle:
        desc = dict(self.dataset)
        if self.objective is not None:
            desc.setdefault("objective", self.objective)
        return instance_from_json(desc)


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    queries: np.ndarray
    values: np.ndarray
    cap: int
    events: list = field(default_factory=list)


@dataclass
class SummaryStats:
    greedy_value: float
    normalizer: int
    grid: np.ndarray
    mean: dict
    std: dict
    crossings: dict
    sg_final: float | None
    beta_events: dict
    runs: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "greedy_value": self.greedy_value,
            "normalizer_queries": self.normalizer,
            "sg_final_mean": self.sg_final,
            "crossings": self.crossings,
            "beta_reached_kappa": self.beta_events,
        }


def _single_run(args):
    a, oracle, kappa, P, budget, seed, sample_every = args
    oracle = oracle.fresh()
    streams = RngStreams(seed)
    if a.name == "sg":
        _, _, traj = run_stochastic_greedy(oracle, kappa, a.eps, streams)
    elif a.name == "po":
        _, traj = run_po(oracle, P, a.T, streams, [kappa], budget=budget,
                         sample_every=sample_every)
    elif a.name == "bpo":
        _, traj, _ = run_bpo(oracle, P, a.T, a.p, a.eps, a.xi, streams, [kappa],
                             budget=budget, sample_every=sample_every)
    else:
        _, traj, _ = run_kbpo(oracle, kappa, P, a.T, a.p, a.eps, streams, [kappa],
                              budget=budget, sample_every=sample_every)
    q, v = traj.series(kappa)
    return RunRecord(a.key, seed, q, v, kappa, list(traj.events))


def _worker_count() -> int:
    raw = os.environ.get("PARETO_THREADS", "0").strip() or "0"
    try:
        return max(0, int(raw))
    except ValueError:
        raise ConfigurationError(f"PARETO_THREADS must be an integer, got {raw!r}") from None


def _execute(jobs, workers):
    if workers <= 1:
        return [_single_run(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_single_run, jobs))


def _first_crossing(grid, mean, level):
    above = np.flatnonzero(mean > level)
    return float(grid[above[0]]) if above.size else None


def run_experiment(config: ExperimentConfig, write: bool = True) -> SummaryStats:
    """Run greedy once and every stochastic algorithm ``repetitions`` times.

    Repetition ``r`` uses seed ``repetition_seed(config.seed, r)``.  Raw
    trajectories and normalized summaries are written to
    ``config.output_dir`` when it is set and ``write`` is true.
    """
    oracle = config.build_oracle()
    n = oracle.n
    kappa = config.kappa
    config.validate(n)
    Q = kappa * n

    _, greedy_value, greedy_traj = run_greedy(oracle.fresh(), kappa)
    scale = greedy_value if greedy_value > 0 else 1.0
    # greedy round r is charged its nominal r*n queries
    greedy_x = np.arange(kappa + 1) * n / Q
    _, greedy_v = greedy_traj.series(kappa)
    greedy_y = greedy_v / scale

    jobs = []
    for a in config.algorithms:
        if a.name == "greedy":
            continue
        P = config.pareto_size(a)
        budget = config.query_budget(a, n)
        for r in range(config.repetitions):
            jobs.append((a, oracle, kappa, P, budget,
                         repetition_seed(config.seed, r), config.sample_every))
    runs = _execute(jobs, _worker_count())

    curves = {}
    grid_parts = []
    for a in config.algorithms:
        if a.name == "greedy":
            curves[a.key] = [(greedy_x, greedy_y)]
            grid_parts.append(greedy_x[1:])
        else:
            mine = [(run.queries / Q, run.values / scale) for run in runs if run.algorithm == a.key]
            curves[a.key] = mine
            grid_parts.extend(x for x, _ in mine)
    grid = np.unique(np.concatenate(grid_parts)) if grid_parts else np.zeros(0)

    mean, std = {}, {}
    for key, series in curves.items():
        stacked = np.array([np.interp(grid, x, y) for x, y in series])
        mean[key] = stacked.mean(axis=0)
        std[key] = stacked.std(axis=0)

    sg_keys = [a.key for a in config.algorithms if a.name == "sg"]
    sg_final = None
    if sg_keys:
        finals = [run.values[-1] / scale for run in runs if run.algorithm == sg_keys[0]]
        sg_final = float(np.mean(finals))

    crossings = {}
    for a in config.algorithms:
        if a.name == "greedy":
            continue
        row = {}
        for label, level in (("greedy", 1.0), ("sg", sg_final)):
            if level is None or (label == "sg" and a.name == "sg"):
                continue
            x = _first_crossing(grid, mean[a.key], level)
            row[f"x_exceeds_{label}"] = x
            row[f"queries_exceeds_{label}"] = None if x is None else int(round(x * Q))
        crossings[a.key] = row

    beta_events = {}
    for a in config.algorithms:
        if a.name != "kbpo":
            continue
        hits = [e for run in runs if run.algorithm == a.key
                for e in run.events if e.name == BETA_REACHED_KAPPA]
        its = np.array([e.iteration for e in hits], dtype=float)
        xs = np.array([e.query_count / Q for e in hits], dtype=float)
        beta_events[a.key] = {
            "runs": config.repetitions,
            "reached": len(hits),
            "iteration_mean": float(its.mean()) if hits else None,
            "iteration_std": float(its.std()) if hits else None,
            "iteration_min": int(its.min()) if hits else None,
            "iteration_max": int(its.max()) if hits else None,
            "x_mean": float(xs.mean()) if hits else None,
        }

    stats = SummaryStats(greedy_value, Q, grid, mean, std, crossings, sg_final,
                         beta_events, runs)
    if write and config.output_dir:
        out = Path(config.output_dir)
        emit_plotdata(stats, out)
        write_raw_trajectories(runs, out / "raw_trajectories.csv")
    return stats


def _fmt(x) -> str:
    return repr(float(x))


def emit_plotdata(stats: SummaryStats, directory) -> list:
    """Write ``trajectory.csv``, ``crossings.json`` and ``events.csv``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "trajectory.csv", out / "crossings.json", out / "events.csv"]
    with open(paths[0], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "x_normalized_queries", "mean", "std"])
        for key in stats.mean:
            for x, m, s in zip(stats.grid, stats.mean[key], stats.std[key]):
                w.writerow([key, _fmt(x), _fmt(m), _fmt(s)])
    with open(paths[1], "w", encoding="utf-8") as fh:
        json.dump(stats.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(paths[2], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "seed", "iteration", "event_name"])
        for run in stats.runs:
            for e in run.events:
                w.writerow([run.algorithm, run.seed, e.iteration, e.name])
    return paths


def write_raw_trajectories(runs, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "seed", "query_count", "cap", "best_value"])
        for run in runs:
            for q, v in zip(run.queries, run.values):
                w.writerow([run.algorithm, run.seed, int(q), run.cap, _fmt(v)])
