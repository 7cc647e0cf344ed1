"""Samplers for Gaussian vectors and Brown-Resnick / Hüsler-Reiss vectors.

Brown-Resnick samples are maxima over a Poisson process ``U_1 > U_2 > ...``
with intensity ``e^{-u} du`` of ``U_i + log Z_i(t)``. Two spectral
representations are available:

``"normalized"`` (default)
    ``W(t) = Y(t) - Y(t_J) - gamma(t - t_J)/2`` with a uniformly chosen
    anchor site ``J`` and ``Z = exp(W) / mean_t exp(W(t))``. Since
    ``Z <= k+1`` the loop can stop exactly once ``U_m + log(k+1)`` falls
    below the current minimum over sites.
``"anchored"``
    ``Z = exp(Y(t) - sigma^2(t)/2)`` with ``Y(t_0) = 0``, truncated once
    ``U_m < min_t xi(t) - accuracy * max_t sigma(t)``. This is approximate
    and needs many more points when the variogram is large.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from . import numerics as nx
from .core import SampleMatrix
from .errors import AccuracyNotReached
from .variogram import LocationSet, VariogramSpec, variogram_matrix


def mvn_sample(mean, cov, rng, size: int | None = None) -> np.ndarray:
    """Draw ``mean + L z`` with ``L`` the Cholesky factor of ``cov``."""
    rng = nx.make_rng(rng)
    mean = np.asarray(mean, dtype=float)
    chol = nx.cholesky(cov)
    k = chol.shape[0]
    z = rng.standard_normal((1 if size is None else size, k))
    out = mean + z @ chol.T
    return out[0] if size is None else out


def covariance_from_variogram(spec: VariogramSpec, locs: LocationSet, anchor: int = 0):
    """Covariance of ``Y(t_i)`` for the Gaussian process with ``Y(t_anchor) = 0``.

    Returns ``(sigma^2 / 2, cov)`` where ``cov`` is the full ``(k+1, k+1)``
    matrix (zero row and column at ``anchor``). The block without the anchor
    is checked to be positive definite.
    """
    gam = variogram_matrix(spec, locs)
    ga = gam[anchor]
    cov = 0.5 * (ga[:, None] + ga[None, :] - gam)
    cov[anchor, :] = 0.0
    cov[:, anchor] = 0.0
    if len(locs) > 1:
        keep = [i for i in range(len(locs)) if i != anchor]
        nx.cholesky(cov[np.ix_(keep, keep)])
    return 0.5 * ga, cov


@dataclass
class BrSampleConfig:
    locs: LocationSet
    spec: VariogramSpec
    n: int
    seed: int | np.random.Generator | None = None
    accuracy: float = 6.0
    method: str = "normalized"
    max_points: int = 100_000

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.accuracy > 0:
            raise ValueError("accuracy must be positive")
        if self.method not in ("normalized", "anchored"):
            raise ValueError(f"unknown method {self.method!r}")


def br_sample(config: BrSampleConfig, *, return_info: bool = False):
    """Brown-Resnick vectors at ``config.locs`` with standard Gumbel margins."""
    rng = nx.make_rng(config.seed)
    locs, n = config.locs, config.n
    k1 = len(locs)
    gam = variogram_matrix(config.spec, locs) if k1 > 1 else np.zeros((1, 1))
    if k1 == 1 or np.max(gam) == 0.0:
        xi = -np.log(rng.standard_exponential(n))
        out, info = np.repeat(xi[:, None], k1, axis=1), {"points": np.ones(n, int), "capped": 0}
    elif config.method == "normalized":
        out, info = _sample_normalized(gam, n, rng, config.max_points)
    else:
        out, info = _sample_anchored(gam, n, rng, config.accuracy, config.max_points)
    if info["capped"]:
        msg = f"{info['capped']} draws hit the cap of {config.max_points} points"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    sample = SampleMatrix(out, "gumbel", list(locs.labels))
    return (sample, info) if return_info else sample


def _anchor0_factor(gam: np.ndarray) -> np.ndarray:
    g0 = gam[0]
    cov = 0.5 * (g0[1:, None] + g0[None, 1:] - gam[1:, 1:])
    return nx.cholesky(cov)


def _sample_normalized(gam, n, rng, max_points):
    k1 = gam.shape[0]
    chol = _anchor0_factor(gam)
    log_k1 = np.log(k1)
    xi = np.full((n, k1), -np.inf)
    cum = np.zeros(n)
    points = np.zeros(n, dtype=int)
    active = np.arange(n)
    capped = 0
    while active.size:
        na = active.size
        cum[active] += rng.standard_exponential(na)
        u = -np.log(cum[active])
        y = np.zeros((na, k1))
        y[:, 1:] = rng.standard_normal((na, k1 - 1)) @ chol.T
        anchor = rng.integers(0, k1, size=na)
        w = y - y[np.arange(na), anchor][:, None] - 0.5 * gam[anchor]
        logz = w - (logsumexp(w, axis=1) - log_k1)[:, None]
        cur = xi[active]
        np.maximum(cur, u[:, None] + logz, out=cur)
        xi[active] = cur
        points[active] += 1
        done = u + log_k1 <= cur.min(axis=1)
        over = ~done & (points[active] >= max_points)
        capped += int(over.sum())
        active = active[~(done | over)]
    return xi, {"points": points, "capped": capped}


def _sample_anchored(gam, n, rng, accuracy, max_points):
    k1 = gam.shape[0]
    chol = _anchor0_factor(gam)
    half_var = 0.5 * gam[0]
    kappa = accuracy * np.sqrt(np.max(gam[0]))
    xi = np.full((n, k1), -np.inf)
    cum = np.zeros(n)
    points = np.zeros(n, dtype=int)
    active = np.arange(n)
    capped = 0
    while active.size:
        na = active.size
        cum[active] += rng.standard_exponential(na)
        u = -np.log(cum[active])
        y = np.zeros((na, k1))
        y[:, 1:] = rng.standard_normal((na, k1 - 1)) @ chol.T
        cur = xi[active]
        np.maximum(cur, u[:, None] + y - half_var, out=cur)
        xi[active] = cur
        points[active] += 1
        done = u < cur.min(axis=1) - kappa
        over = ~done & (points[active] >= max_points)
        capped += int(over.sum())
        active = active[~(done | over)]
    return xi, {"points": points, "capped": capped}


def hr_sample_bivariate(lam_sq: float, n: int, rng, **kwargs) -> SampleMatrix:
    """Bivariate HR sample: BR with ``gamma(h) = |h|`` at sites ``0`` and ``4 lambda^2``."""
    lam_sq = float(lam_sq)
    if lam_sq < 0:
        raise ValueError("lambda^2 must be nonnegative")
    if lam_sq == 0.0:
        rng = nx.make_rng(rng)
        xi = -np.log(rng.standard_exponential(n))
        return SampleMatrix(np.column_stack([xi, xi]), "gumbel")
    locs = LocationSet(np.array([0.0, 4.0 * lam_sq]))
    return br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1.0), n, rng, **kwargs))


def require_accuracy(info: dict):
    if info.get("capped"):
        raise AccuracyNotReached(f"{info['capped']} draws hit the point cap")
