"""Block-maxima baselines: componentwise maxima, madogram, bivariate HR ML."""
from __future__ import annotations

import numpy as np
from scipy import stats

from . import hr_model
from . import numerics as nx
from .core import EstimateReport, SampleMatrix
from .errors import BlockTooLarge, DegenerateColumn


def block_maxima(data: SampleMatrix, block_size: int) -> SampleMatrix:
    """Componentwise maxima over consecutive blocks; a partial last block is dropped."""
    if block_size < 1:
        raise ValueError("block_size must be positive")
    if block_size > data.n:
        raise BlockTooLarge(f"block size {block_size} exceeds sample size {data.n}")
    m = data.n // block_size
    vals = data.values[: m * block_size].reshape(m, block_size, data.k_plus_1).max(axis=1)
    return SampleMatrix(vals, data.scale, list(data.labels))


def _pair_ranks(maxima: SampleMatrix, pair) -> np.ndarray:
    i, j = pair
    x = maxima.values[:, [i, j]]
    if x.shape[0] < 2:
        raise ValueError("need at least two blocks")
    for col in (0, 1):
        if np.all(x[:, col] == x[0, col]):
            raise DegenerateColumn(f"column {pair[col]} of the maxima is constant")
    return stats.rankdata(x, axis=0) / (x.shape[0] + 1.0)


def madogram_theta(maxima: SampleMatrix, pair=(0, 1)) -> float:
    """F-madogram extremal coefficient ``(1 + 2 nu) / (1 - 2 nu)`` clamped to [1, 2]."""
    f = _pair_ranks(maxima, pair)
    nu = 0.5 * np.mean(np.abs(f[:, 0] - f[:, 1]))
    theta = (1.0 + 2.0 * nu) / (1.0 - 2.0 * nu)
    return float(np.clip(theta, 1.0, 2.0))


def est_madogram(maxima: SampleMatrix, pair=(0, 1)) -> EstimateReport:
    theta = madogram_theta(maxima, pair)
    if theta >= 2.0:
        lam_sq = np.inf
    else:
        lam_sq = float(nx.std_normal_quantile(theta / 2.0) ** 2) if theta > 1.0 else 0.0
    return EstimateReport("mado", lam_sq, maxima.n, None, {"theta": theta, "pair": list(pair)})


def gumbel_standardize(maxima: SampleMatrix) -> np.ndarray:
    """Empirical Gumbel margins ``-log(-log(rank / (m + 1)))``."""
    u = stats.rankdata(maxima.values, axis=0) / (maxima.n + 1.0)
    return -np.log(-np.log(u))


def blockml_objective(lam_sq: float, x: np.ndarray, y: np.ndarray) -> float:
    """Negative bivariate HR log-likelihood of Gumbel-scale maxima."""
    if not (0.0 < lam_sq <= hr_model.LAMBDA_SQ_INF):
        return np.inf
    return -float(np.sum(hr_model.hr_logdensity_bivariate(x, y, np.sqrt(lam_sq))))


def est_hr_blockml(maxima: SampleMatrix, pair=(0, 1)) -> EstimateReport:
    """Maximum likelihood for the bivariate HR law fitted to block maxima."""
    i, j = pair
    if maxima.n < 2:
        raise ValueError("need at least two blocks")
    _pair_ranks(maxima, pair)
    g = gumbel_standardize(maxima.columns([i, j]))
    x, y = g[:, 0], g[:, 1]
    theta0 = madogram_theta(maxima, pair)
    lam0 = nx.std_normal_quantile(np.clip(theta0, 1.02, 1.98) / 2.0) ** 2

    def f(p):
        return blockml_objective(np.exp(p[0]), x, y)

    res = nx.nelder_mead(f, [np.log(lam0)], step=0.5, xatol=1e-9, fatol=1e-11)
    lam_sq = float(np.exp(res.x[0]))
    return EstimateReport("block-ml", lam_sq, maxima.n, None, res.diagnostics() | {"objective": res.fun})
