"""Synthetic data, vector CSV ingestion and JSON instance descriptions."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, CsvParseError, NumericDomainError
from .objectives import (
    CoverageObjective,
    DppObjective,
    FacilityLocationObjective,
    ModularObjective,
    ObjectiveOracle,
)

SIGMA_SAMPLE_PAIRS = 1000
CENTER_SCALE = 5.0


def gaussian_vectors(clusters: int, points: int, dim: int, seed: int) -> np.ndarray:
    """Points drawn from ``clusters`` isotropic unit Gaussians.

    Centers are N(0, 5^2 I); point ``k`` belongs to cluster ``k % clusters``.
    """
    if dim <= 0 or points <= 0 or clusters <= 0:
        raise ConfigurationError("clusters, points and dim must be positive")
    if clusters > points:
        raise ConfigurationError("clusters must not exceed points")
    center_seq, point_seq, _ = np.random.SeedSequence(int(seed)).spawn(3)
    centers = np.random.default_rng(center_seq).normal(0.0, CENTER_SCALE, size=(clusters, dim))
    noise = np.random.default_rng(point_seq).normal(0.0, 1.0, size=(points, dim))
    return centers[np.arange(points) % clusters] + noise


def squared_distances(X: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * X @ X.T
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def rbf_kernel(X: np.ndarray, sigma: float) -> np.ndarray:
    """exp(-||x_i - x_j||^2 / (2 sigma^2))."""
    if not sigma > 0:
        raise ConfigurationError("RBF bandwidth must be positive")
    return np.exp(-squared_distances(np.asarray(X, dtype=np.float64)) / (2.0 * sigma * sigma))


def median_pair_distance(X: np.ndarray, seed: int, pairs: int = SIGMA_SAMPLE_PAIRS) -> float:
    """Median Euclidean distance over a seeded sample of distinct index pairs.

    All pairs are used when there are at most ``pairs`` of them.  Falls back to
    1.0 when fewer than two points exist or every sampled distance is zero.
    """
    n = X.shape[0]
    if n < 2:
        return 1.0
    total = n * (n - 1) // 2
    if total <= pairs:
        i, j = np.triu_indices(n, k=1)
    else:
        rng = np.random.default_rng(np.random.SeedSequence(int(seed)).spawn(3)[2])
        i = rng.integers(0, n, size=pairs)
        j = (i + rng.integers(1, n, size=pairs)) % n
    d = np.sqrt(((X[i] - X[j]) ** 2).sum(axis=1))
    med = float(np.median(d))
    return med if med > 0 else 1.0


def gen_gaussian_dataset(clusters: int, points: int, dim: int, seed: int) -> FacilityLocationObjective:
    """Facility-location instance over Gaussian-cluster points with RBF similarity."""
    X = gaussian_vectors(clusters, points, dim, seed)
    sigma = median_pair_distance(X, seed)
    return FacilityLocationObjective(rbf_kernel(X, sigma))


def read_vector_csv(path) -> np.ndarray:
    """Parse a header-less, comma-separated numeric matrix."""
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not field.strip() for field in record):
                continue
            try:
                row = [float(field) for field in record]
            except ValueError:
                raise CsvParseError(path, lineno, "non-numeric field") from None
            if not all(math.isfinite(x) for x in row):
                raise CsvParseError(path, lineno, "non-finite value")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise CsvParseError(path, lineno, f"expected {width} fields, found {len(row)}")
            rows.append(row)
    if not rows:
        raise CsvParseError(path, 0, "no data rows")
    return np.array(rows, dtype=np.float64)


def write_vector_csv(path, X: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(X, dtype=np.float64):
            writer.writerow([repr(float(x)) for x in row])


def similarity_matrix(X: np.ndarray, similarity: str = "rbf", sigma: float | None = 1.0) -> np.ndarray:
    if similarity == "rbf":
        return rbf_kernel(X, 1.0 if sigma is None else sigma)
    if similarity == "inner_product":
        return X @ X.T
    raise ConfigurationError(f"unknown similarity {similarity!r}")


def load_vector_csv(path, similarity: str = "rbf", sigma: float | None = 1.0,
                    objective: str = "facility_location") -> ObjectiveOracle:
    """Build a facility-location or DPP objective from a vector CSV file."""
    X = read_vector_csv(path)
    K = similarity_matrix(X, similarity, sigma)
    if objective == "facility_location":
        return FacilityLocationObjective(K)
    if objective == "dpp":
        return DppObjective(K)
    raise ConfigurationError(f"unknown objective {objective!r}")


def instance_to_json(oracle: ObjectiveOracle) -> dict:
    return oracle.to_json()


def instance_from_json(desc: dict, base_dir=None) -> ObjectiveOracle:
    """Instantiate an objective from its JSON description.

    Recognized ``kind`` values: ``modular``, ``coverage``,
    ``facility_location`` (inline ``W`` or ``csv``), ``dpp`` (inline ``L`` or
    ``csv``) and ``gaussian`` (generated facility location).
    """
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigurationError("instance description needs a 'kind' field")
    kind = desc["kind"]
    try:
        if kind == "modular":
            return ModularObjective(desc["weights"])
        if kind == "coverage":
            return CoverageObjective(desc["sets"], desc.get("m"), desc.get("weights"))
        if kind == "gaussian":
            args = (desc.get("clusters", 1), desc["points"], desc.get("dim", 10),
                    desc.get("seed", 0))
            objective = desc.get("objective", "facility_location")
            if objective == "facility_location":
                return gen_gaussian_dataset(*args)
            if objective == "dpp":
                X = gaussian_vectors(*args)
                return DppObjective(rbf_kernel(X, median_pair_distance(X, args[3])))
            raise ConfigurationError(f"unknown objective {objective!r}")
        if kind in ("facility_location", "dpp"):
            inline = "W" if kind == "facility_location" else "L"
            if inline in desc:
                cls = FacilityLocationObjective if kind == "facility_location" else DppObjective
                return cls(desc[inline])
            path = Path(desc["csv"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            return load_vector_csv(path, desc.get("similarity", "rbf"),
                                   desc.get("sigma", 1.0), kind)
    except KeyError as exc:
        raise ConfigurationError(f"{kind} instance is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ConfigurationError, CsvParseError, NumericDomainError)):
            raise
        raise ConfigurationError(f"bad {kind} instance: {exc}") from None
    raise ConfigurationError(f"unknown instance kind {kind!r}")


def load_instance_file(path) -> ObjectiveOracle:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            desc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from None
    return instance_from_json(desc, base_dir=path.parent)
