"""Iteration counts, approximation ratios and tail bounds for the PO family.

All iteration counts are rounded up: a larger ``T`` never weakens a guarantee.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import NumericDomainError

E = math.e
ALGORITHMS = ("PO", "BPO", "KBPO", "POSC", "BPOSC", "GREEDY", "SG")


def _open_unit(name, x):
    if not 0.0 < x < 1.0:
        raise NumericDomainError(f"{name} must lie in (0, 1), got {x}")


def _half_open_unit(name, x):
    if not 0.0 < x <= 1.0:
        raise NumericDomainError(f"{name} must lie in (0, 1], got {x}")


def _ground(n):
    if n < 1 or int(n) != n:
        raise NumericDomainError(f"n must be a positive integer, got {n}")


def _capacity(n, P):
    if int(P) != P or not 1 <= P <= n + 1:
        raise NumericDomainError(f"P must be an integer in [1, n+1], got {P}")


def _log_inv(x):
    """ln(1/x) without rounding 1/x first."""
    return -math.log(x)


def _ceil(x):
    return int(math.ceil(x))


def m_value(P: int, xi: float) -> int:
    """Number of bias targets, ceil(ln P / ln(1/xi)), at least 1.

    Ratios within 1e-9 of an integer are snapped to it, so that exact powers
    such as P=100, xi=0.1 give 2 rather than 3.
    """
    if P < 1:
        raise NumericDomainError(f"P must be at least 1, got {P}")
    _open_unit("xi", xi)
    x = math.log(P) / _log_inv(xi)
    r = round(x)
    m = r if abs(x - r) <= 1e-9 * max(1.0, x) else math.ceil(x)
    return max(1, int(m))


def h_value(j: int, eps: float, xi: float) -> float:
    """Selections of target ``j`` between advances: e ln(1/eps) / xi^j."""
    _open_unit("eps", eps)
    _open_unit("xi", xi)
    return E * _log_inv(eps) / xi ** j


def q_index(P: int, xi: float, size: int) -> int:
    """Smallest q >= 1 with xi^q P < size, clamped to [1, M]."""
    M = m_value(P, xi)
    if not 1 <= size <= P:
        raise NumericDomainError(f"size must lie in [1, P={P}], got {size}")
    q = 1
    while q < M and xi ** q * P >= size:
        q += 1
    return q


def t_bound_po(n: int, P: int, eps: float) -> int:
    _ground(n)
    _capacity(n, P)
    _open_unit("eps", eps)
    return _ceil(max(2 * E * n * P, 8 * E * n * P * _log_inv(eps)))


def t_bound_bpo(n: int, P: int, p: float, eps: float, xi: float) -> int:
    _ground(n)
    _capacity(n, P)
    _half_open_unit("p", p)
    _open_unit("eps", eps)
    M = m_value(P, xi)
    return _ceil(max(2 * E * _log_inv(eps) / p * n * M, 8 / p * math.log(n) * M))


def t_bound_kbpo(n: int, p: float, eps: float) -> int:
    _ground(n)
    _half_open_unit("p", p)
    _open_unit("eps", eps)
    return _ceil(max(2 * E * n * _log_inv(eps) / p, 8 * math.log(n) / p))


def t_bound_posc(n: int, delta: float) -> int:
    # the stated max{2en^2 ln(1/delta), 8en^2 ln(1/delta)} is always its second term
    _ground(n)
    _half_open_unit("delta", delta)
    return _ceil(8 * E * n * n * _log_inv(delta))


def t_bound_bposc(n: int, P: int, p: float, eps: float, xi: float, delta: float) -> int:
    _ground(n)
    _capacity(n, P)
    _half_open_unit("p", p)
    _open_unit("eps", eps)
    _half_open_unit("delta", delta)
    M = m_value(P, xi)
    first = 2 * E * n * _log_inv(delta) * _log_inv(eps) * M / (xi * p * (1 - eps))
    second = 8 * E * math.log(n) * M / p
    return _ceil(max(first, second))


def chernoff_tail(T: int, rho: float, eta: float) -> float:
    """Lower-tail bound exp(-eta^2 T rho / 2) on a sum of T Bernoulli(rho)."""
    if T < 0:
        raise NumericDomainError("T must be non-negative")
    if not 0.0 <= rho <= 1.0:
        raise NumericDomainError(f"rho must lie in [0, 1], got {rho}")
    if not eta > 0:
        raise NumericDomainError(f"eta must be positive, got {eta}")
    return math.exp(-eta * eta * T * rho / 2)


@dataclass
class GuaranteeSpec:
    algorithm: str
    n: int | None = None
    P: int | None = None
    kappa: int | None = None
    p: float | None = None
    eps: float | None = None
    xi: float | None = None
    delta: float | None = None
    gamma: float = 1.0

    def __post_init__(self):
        self.algorithm = self.algorithm.upper().replace("-", "").replace("Κ", "K")
        if self.algorithm not in ALGORITHMS:
            raise NumericDomainError(f"unknown algorithm {self.algorithm!r}")

    def require(self, *names):
        missing = [k for k in names if getattr(self, k) is None]
        if missing:
            raise NumericDomainError(f"{self.algorithm} needs parameters: {', '.join(missing)}")


def guarantee_ratio(spec: GuaranteeSpec) -> float:
    """Expected approximation ratio promised for ``spec``.

    Cover algorithms return the fraction of the threshold reached; when ``n``
    is known this is the weaker of (1-delta)^2 and (1-1/n)(1-delta).
    """
    _half_open_unit("gamma", spec.gamma)
    base = -math.expm1(-spec.gamma)  # 1 - e^{-gamma}
    algo = spec.algorithm
    if algo == "PO":
        spec.require("eps")
        _open_unit("eps", spec.eps)
        ratio = (1 - spec.eps) * base
    elif algo in ("BPO", "KBPO"):
        spec.require("eps")
        _open_unit("eps", spec.eps)
        ratio = (1 - spec.eps) * (base - spec.eps)
    elif algo in ("POSC", "BPOSC"):
        spec.require("delta")
        _open_unit("delta", spec.delta)
        ratio = (1 - spec.delta) ** 2
        if spec.n is not None:
            ratio = min(ratio, (1 - 1 / spec.n) * (1 - spec.delta))
    elif algo == "GREEDY":
        ratio = base
    else:
        spec.require("eps")
        _open_unit("eps", spec.eps)
        ratio = base - spec.eps
    if not 0.0 < ratio < 1.0:
        raise NumericDomainError(f"parameters give a vacuous ratio {ratio} for {algo}")
    return ratio


def all_bounds(spec: GuaranteeSpec) -> dict:
    """Every bound applicable to ``spec`` as a JSON-ready dict."""
    algo = spec.algorithm
    out = {"params": {k: v for k, v in asdict(spec).items() if v is not None}}
    if algo == "PO":
        spec.require("n", "P", "eps")
        out["T"] = t_bound_po(spec.n, spec.P, spec.eps)
    elif algo == "BPO":
        spec.require("n", "P", "p", "eps", "xi")
        out["M"] = m_value(spec.P, spec.xi)
        out["H"] = [h_value(j, spec.eps, spec.xi) for j in range(1, out["M"] + 1)]
        out["T"] = t_bound_bpo(spec.n, spec.P, spec.p, spec.eps, spec.xi)
    elif algo == "KBPO":
        spec.require("n", "kappa", "p", "eps")
        out["H"] = E * spec.n * _log_inv(spec.eps) / spec.kappa
        out["T"] = t_bound_kbpo(spec.n, spec.p, spec.eps)
    elif algo == "POSC":
        spec.require("n", "delta")
        out["T"] = t_bound_posc(spec.n, spec.delta)
    elif algo == "BPOSC":
        spec.require("n", "P", "p", "eps", "xi", "delta")
        out["M"] = m_value(spec.P, spec.xi)
        out["H"] = [h_value(j, spec.eps, spec.xi) for j in range(1, out["M"] + 1)]
        out["T"] = t_bound_bposc(spec.n, spec.P, spec.p, spec.eps, spec.xi, spec.delta)
    elif algo in ("GREEDY", "SG"):
        spec.require("n", "kappa")
        if algo == "GREEDY":
            out["queries"] = sum(spec.n - i for i in range(spec.kappa))
        else:
            spec.require("eps")
            out["sample_size"] = _ceil(spec.n / spec.kappa * _log_inv(spec.eps))
    try:
        out["ratio"] = guarantee_ratio(spec)
    except NumericDomainError as exc:
        out["ratio"] = None
        out["ratio_error"] = str(exc)
    return out
