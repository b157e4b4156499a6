"""Anytime submodular optimization by Pareto optimization, with greedy baselines."""
from .bounds import (
    GuaranteeSpec,
    chernoff_tail,
    guarantee_ratio,
    h_value,
    m_value,
    q_index,
    t_bound_bpo,
    t_bound_bposc,
    t_bound_kbpo,
    t_bound_po,
    t_bound_posc,
)
from .datasets import gen_gaussian_dataset, instance_from_json, load_vector_csv
from .errors import (
    CapacityError,
    ConfigurationError,
    CsvParseError,
    InfeasibleError,
    NumericDomainError,
)
from .exact import ExactResult, brute_force_sc, brute_force_sm, verify_oracle
from .objectives import (
    CoverageObjective,
    DppObjective,
    FacilityLocationObjective,
    ModularObjective,
    ObjectiveOracle,
    SetFunction,
    estimate_gamma,
)
from .optimizers import (
    Trajectory,
    extract_sc,
    extract_sm,
    mutate,
    run_bpo,
    run_bposc,
    run_greedy,
    run_greedy_cover,
    run_kbpo,
    run_po,
    run_stochastic_greedy,
)
from .pool import ParetoPool, PoolEntry, best_under, dominates, precedes
from .rng import RngStreams
from .subset import SubsetMask

__version__ = "0.1.0"
