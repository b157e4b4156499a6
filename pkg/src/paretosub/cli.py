"""Command-line entry point: ``paretosub {run,bounds,verify,gen-data,brute}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds as B
from .datasets import gaussian_vectors, instance_from_json, write_vector_csv
from .errors import (
    CapacityError,
    ConfigurationError,
    CsvParseError,
    InfeasibleError,
    NumericDomainError,
)
from .exact import brute_force_sc, brute_force_sm, verify_oracle
from .harness import ExperimentConfig, run_experiment

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def _load_instance(path, objective):
    try:
        with open(path, encoding="utf-8") as fh:
            desc = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON: {exc}") from None
    if objective is not None:
        if "kind" in desc and desc["kind"] != objective and desc["kind"] != "gaussian":
            raise ConfigurationError(
                f"--objective {objective} does not match instance kind {desc['kind']!r}")
        desc.setdefault("kind", objective)
    return instance_from_json(desc, base_dir=Path(path).parent)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_run(args):
    stats = run_experiment(ExperimentConfig.from_file(args.config))
    _emit(stats.to_json())


def cmd_bounds(args):
    spec = B.GuaranteeSpec(args.algo, n=args.n, P=args.P, kappa=args.kappa, p=args.p,
                           eps=args.eps, xi=args.xi, delta=args.delta, gamma=args.gamma)
    _emit(B.all_bounds(spec))


def cmd_verify(args):
    _emit(verify_oracle(_load_instance(args.file, args.objective)).to_json())


def cmd_gen_data(args):
    X = gaussian_vectors(args.clusters, args.points, args.dim, args.seed)
    write_vector_csv(args.out, X)
    _emit({"path": args.out, "rows": X.shape[0], "dim": X.shape[1]})


def cmd_brute(args):
    oracle = _load_instance(args.file, args.objective)
    if (args.kappa is None) == (args.tau is None):
        raise ConfigurationError("brute needs exactly one of --kappa or --tau")
    res = brute_force_sm(oracle, args.kappa) if args.tau is None else brute_force_sc(oracle, args.tau)
    _emit({"opt_value": res.opt_value, "opt_set": res.opt_set.indices().tolist(),
           "cardinality": res.cardinality, "enumerated": res.enumerated})


def build_parser():
    parser = argparse.ArgumentParser(prog="paretosub", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a benchmark experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bounds", help="print iteration bounds and guarantee ratios")
    p.add_argument("--algo", required=True, type=str.upper, choices=B.ALGORITHMS)
    p.add_argument("--n", type=int)
    p.add_argument("--P", type=int)
    p.add_argument("--kappa", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--gamma", type=float, default=1.0)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="exhaustively check monotonicity and submodularity")
    p.add_argument("--file", required=True)
    p.add_argument("--objective")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen-data", help="write Gaussian-cluster vectors to CSV")
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--dim", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("brute", help="exact optimum for a small instance")
    p.add_argument("--file", required=True)
    p.add_argument("--objective")
    p.add_argument("--kappa", type=int)
    p.add_argument("--tau", type=float)
    p.set_defaults(func=cmd_brute)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        args.func(args)
    except (ConfigurationError, NumericDomainError, CsvParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CapacityError, InfeasibleError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


cli = main

if __name__ == "__main__":
    sys.exit(main())
