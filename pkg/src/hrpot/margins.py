"""Marginal standardisation and selection of extremal observations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .core import ExceedanceSet, SampleMatrix
from .errors import DegenerateColumn, TooFewExceedances

MIN_EXCEEDANCES = 10


@dataclass(frozen=True)
class ThresholdSpec:
    """Threshold given as a quantile ``q`` or as a target exceedance count."""

    q: float | None = None
    count: int | None = None

    def __post_init__(self):
        if (self.q is None) == (self.count is None):
            raise ValueError("give exactly one of q or count")
        if self.q is not None and not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if self.count is not None and self.count < 1:
            raise ValueError("count must be positive")

    def quantile(self, n: int) -> float:
        if self.q is not None:
            return float(self.q)
        q = 1.0 - self.count / n
        if not (0.0 < q < 1.0):
            raise ValueError(f"count {self.count} incompatible with n={n}")
        return q

    def u(self, n: int) -> float:
        """Expected number of marginal exceedances, ``n (1 - q)``."""
        return n * (1.0 - self.quantile(n))


def _spec(spec) -> ThresholdSpec:
    return spec if isinstance(spec, ThresholdSpec) else ThresholdSpec(q=float(spec))


def empirical_standardize(data: SampleMatrix, target: str = "exponential") -> SampleMatrix:
    """Rank-transform each column to standard exponential or Fréchet margins.

    Uses average ranks divided by ``n + 1``.
    """
    vals = data.values
    n = vals.shape[0]
    if n < 2:
        raise DegenerateColumn("need at least two observations")
    for j in range(vals.shape[1]):
        if np.all(vals[:, j] == vals[0, j]):
            raise DegenerateColumn(f"column {data.labels[j]!r} is constant")
    u = stats.rankdata(vals, axis=0, method="average") / (n + 1.0)
    expo = -np.log1p(-u)
    if target == "exponential":
        return SampleMatrix(expo, "exponential", list(data.labels))
    if target == "frechet":
        return SampleMatrix(np.exp(expo), "frechet", list(data.labels))
    raise ValueError(f"target must be 'exponential' or 'frechet', got {target!r}")


def to_scale(data: SampleMatrix, target: str) -> SampleMatrix:
    """Convert between known standard margins (Gumbel, exponential, Fréchet).

    Raw data go through :func:`empirical_standardize`.
    """
    if data.scale == target:
        return data
    if data.scale == "raw":
        return empirical_standardize(data, target)
    x = data.values
    # via the exponential scale
    if data.scale == "gumbel":
        # -log(1 - exp(-exp(-x)))
        expo = -np.log(-np.expm1(-np.exp(-x)))
    elif data.scale == "frechet":
        expo = np.log(x)
    else:
        expo = x
    if target == "exponential":
        out = expo
    elif target == "frechet":
        out = np.exp(expo)
    elif target == "gumbel":
        out = -np.log(-np.log1p(-np.exp(-expo)))
    else:
        raise ValueError(f"unknown target scale {target!r}")
    return SampleMatrix(out, target, list(data.labels))


def _check_count(count: int, minimum: int):
    if count < minimum:
        raise TooFewExceedances(count, minimum)


def select_exceedances_component(
    data: SampleMatrix, pivot: int = 0, spec=0.95, *, min_count: int = MIN_EXCEEDANCES
) -> ExceedanceSet:
    """Rows whose pivot component lies strictly above its ``q``-quantile.

    Returns the increments ``x_j - x_pivot`` for all ``j != pivot``.
    """
    data = to_scale(data, "exponential")
    spec = _spec(spec)
    x = data.values
    if not (0 <= pivot < x.shape[1]):
        raise ValueError(f"pivot {pivot} out of range")
    q = spec.quantile(data.n)
    thr = float(np.quantile(x[:, pivot], q))
    idx = np.flatnonzero(x[:, pivot] > thr)
    _check_count(idx.size, min_count)
    others = [j for j in range(x.shape[1]) if j != pivot]
    incr = x[np.ix_(idx, others)] - x[idx, pivot][:, None]
    return ExceedanceSet(
        "component", data.n, data.k_plus_1, q, thr, idx, pivot=pivot, increments=incr,
        marginal_counts=np.array([idx.size]),
    )


def select_exceedances_union(
    data: SampleMatrix, spec=0.95, *, min_count: int = MIN_EXCEEDANCES
) -> ExceedanceSet:
    """Rows where either of the two components exceeds its ``q``-quantile."""
    data = to_scale(data, "exponential")
    if data.k_plus_1 != 2:
        raise ValueError("union exceedances are defined for bivariate data only")
    spec = _spec(spec)
    x = data.values
    q = spec.quantile(data.n)
    thr = np.quantile(x, q, axis=0)
    above = x > thr[None, :]
    idx = np.flatnonzero(above.any(axis=1))
    _check_count(idx.size, min_count)
    incr = (x[idx, 1] - x[idx, 0])[:, None]
    return ExceedanceSet(
        "union", data.n, 2, q, thr, idx, pivot=0, increments=incr,
        marginal_counts=above.sum(axis=0),
    )


def select_exceedances_sum(
    data: SampleMatrix, spec=0.95, *, min_count: int = MIN_EXCEEDANCES, boundary_tol: float = 1e-12
) -> ExceedanceSet:
    """Rows whose Fréchet-scale L1 norm exceeds the ``q``-quantile of row sums.

    Returns pseudo-polar coordinates ``r = sum_j y_j`` and ``omega = y / r``.
    Points with a coordinate below ``boundary_tol`` are dropped and counted.
    """
    data = to_scale(data, "frechet")
    spec = _spec(spec)
    y = data.values
    q = spec.quantile(data.n)
    r_all = y.sum(axis=1)
    thr = float(np.quantile(r_all, q))
    idx = np.flatnonzero(r_all > thr)
    r = r_all[idx]
    omega = y[idx] / r[:, None]
    keep = np.all(omega >= boundary_tol, axis=1)
    dropped = int(np.sum(~keep))
    idx, r, omega = idx[keep], r[keep], omega[keep]
    _check_count(idx.size, min_count)
    return ExceedanceSet(
        "sum", data.n, data.k_plus_1, q, thr, idx, radii=r, omega=omega, dropped=dropped
    )
