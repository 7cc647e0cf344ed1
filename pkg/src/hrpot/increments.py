"""Estimators built on extremal increments ``X^(j) - X^(pivot)``.

Conditionally on the pivot being large, increments are asymptotically
``N(-diag(Sigma)/2, Sigma)`` with ``Sigma = psi_submatrix(lam)``. All
estimators here take an :class:`~hrpot.core.ExceedanceSet` produced by
:mod:`hrpot.margins`.
"""
from __future__ import annotations

import numpy as np

from . import hr_model
from . import numerics as nx
from .core import EstimateReport, ExceedanceSet
from .errors import NotPositiveDefinite, TooFewExceedances


def _bivariate_increments(exc: ExceedanceSet, region: str | tuple = "component") -> np.ndarray:
    regions = (region,) if isinstance(region, str) else region
    if exc.region not in regions:
        raise ValueError(f"estimator needs {regions} exceedances, got {exc.region!r}")
    if exc.increments is None or exc.increments.shape[1] != 1:
        raise ValueError("bivariate estimator needs a single increment column")
    return exc.increments[:, 0]


def closed_form_lambda_sq(values) -> float:
    """``(-1 + sqrt(1 + mean(values^2))) / 2`` for a 1-D array of values."""
    values = np.asarray(values, dtype=float)
    return 0.5 * (-1.0 + np.sqrt(1.0 + np.mean(values**2)))


def biv_increment_objective(lam_sq: float, values) -> float:
    """Negative log-likelihood of ``N(-2 lambda^2, 4 lambda^2)`` up to a constant:
    ``N lambda^2 / 2 + N log lambda + sum(values^2) / (8 lambda^2)``."""
    if lam_sq <= 0:
        return np.inf
    values = np.asarray(values, dtype=float)
    n = values.size
    return n * lam_sq / 2.0 + 0.5 * n * np.log(lam_sq) + np.sum(values**2) / (8.0 * lam_sq)


def est_biv_mle1(exc: ExceedanceSet) -> EstimateReport:
    """Closed-form maximum likelihood estimate from pivot exceedances."""
    d = _bivariate_increments(exc)
    return EstimateReport("mle1", float(closed_form_lambda_sq(d)), exc.count, exc.q)


def mle2_objective(theta: float, values, u: float, *, log_term: bool = True) -> float:
    """Poisson-process negative log-likelihood for union exceedances.

    ``2 Phi(sqrt(theta)) u + N theta / 2 + sum(values^2) / (8 theta)`` plus
    ``(N/2) log theta`` when ``log_term`` is set. The logarithmic term comes
    from the ``1 / (4 lambda Phi(lambda))`` normalisation of the limiting
    increment density and is needed for consistency.
    """
    if theta <= 0:
        return np.inf
    values = np.asarray(values, dtype=float)
    n = values.size
    out = 2.0 * nx.std_normal_cdf(np.sqrt(theta)) * u + n * theta / 2.0
    out += np.sum(values**2) / (8.0 * theta)
    if log_term:
        out += 0.5 * n * np.log(theta)
    return float(out)


def est_biv_mle2(
    exc: ExceedanceSet, u: float | None = None, *, u_mode: str = "count", log_term: bool = True
) -> EstimateReport:
    """Numerical ML estimate from union exceedances.

    ``u`` defaults to the mean realised marginal exceedance count
    (``u_mode="count"``) or to ``n (1 - q)`` (``u_mode="rate"``).
    """
    d = _bivariate_increments(exc, "union")
    if u is None:
        if u_mode == "count":
            u = float(np.mean(exc.marginal_counts))
        elif u_mode == "rate":
            u = exc.n * (1.0 - exc.q)
        else:
            raise ValueError(f"unknown u_mode {u_mode!r}")
    if not u > 0:
        raise ValueError("u must be positive")

    def f(p):
        return mle2_objective(np.exp(p[0]), d, u, log_term=log_term)

    start = np.log(max(closed_form_lambda_sq(d), 1e-3))
    res = nx.nelder_mead(f, [start], step=0.5, xatol=1e-10, fatol=1e-12)
    theta = float(np.exp(res.x[0]))
    diag = res.diagnostics() | {"objective": res.fun, "u": u}
    return EstimateReport("mle2", theta, exc.count, exc.q, diag)


def est_biv_var(exc: ExceedanceSet) -> EstimateReport:
    """A quarter of the (1/N) sample variance of the increments."""
    d = _bivariate_increments(exc)
    if d.size < 2:
        raise TooFewExceedances(d.size, 2)
    return EstimateReport("var", float(np.var(d) / 4.0), exc.count, exc.q)


def est_biv_mean(exc: ExceedanceSet) -> EstimateReport:
    d = _bivariate_increments(exc)
    raw = -np.mean(d) / 2.0
    report = EstimateReport("mean", float(max(raw, 0.0)), exc.count, exc.q, {"clamped": bool(raw < 0)})
    if raw < 0:
        report.notes.append(f"negative raw estimate {raw:.6g} clamped to 0")
    return report


def _mv_increments(exc: ExceedanceSet) -> np.ndarray:
    if exc.region != "component" or exc.increments is None:
        raise ValueError("multivariate increment estimators need component exceedances")
    return exc.increments


def _reorder_to_pivot(lam_pivot_first: np.ndarray, pivot: int) -> np.ndarray:
    """Map a matrix indexed (pivot, others...) back to original order."""
    k1 = lam_pivot_first.shape[0]
    order = [pivot] + [j for j in range(k1) if j != pivot]
    inv = np.argsort(order)
    return lam_pivot_first[np.ix_(inv, inv)]


def _reorder_from_pivot(lam: np.ndarray, pivot: int) -> np.ndarray:
    k1 = lam.shape[0]
    order = [pivot] + [j for j in range(k1) if j != pivot]
    return lam[np.ix_(order, order)]


def est_mv_var(exc: ExceedanceSet) -> EstimateReport:
    """``lambda_of_sigma`` of the empirical covariance of the increments."""
    d = _mv_increments(exc)
    n, k = d.shape
    if n < k + 1:
        raise NotPositiveDefinite(f"{n} exceedances cannot give a nonsingular {k}x{k} covariance")
    centred = d - d.mean(axis=0)
    sigma = centred.T @ centred / n
    nx.cholesky(sigma)
    lam = _reorder_to_pivot(hr_model.lambda_of_sigma(sigma), exc.pivot or 0)
    return EstimateReport("mv-var", lam, exc.count, exc.q, {"pivot": exc.pivot})


def gaussian_increment_objective(sigma: np.ndarray, rows: np.ndarray) -> float:
    """``(N/2) log det Sigma + 1/2 sum (s - M)^T Sigma^{-1} (s - M)`` with
    ``M = -diag(Sigma)/2``. Shared by the increment and spectral likelihoods."""
    centred = rows + 0.5 * np.diag(sigma)[None, :]
    logdet, quad = nx.gaussian_quadratic_terms(centred, sigma)
    return 0.5 * rows.shape[0] * logdet + 0.5 * quad


def _chol_params(sigma: np.ndarray) -> np.ndarray:
    chol = nx.cholesky(sigma)
    k = chol.shape[0]
    il = np.tril_indices(k)
    p = chol[il].copy()
    diag_pos = np.flatnonzero(il[0] == il[1])
    p[diag_pos] = np.log(p[diag_pos])
    return p


def _sigma_from_params(p: np.ndarray, k: int) -> np.ndarray:
    il = np.tril_indices(k)
    chol = np.zeros((k, k))
    chol[il] = p
    d = np.arange(k)
    chol[d, d] = np.exp(chol[d, d])
    return chol @ chol.T


def fit_gaussian_increments(rows: np.ndarray, start_sigma: np.ndarray, **nm_options):
    """Minimise :func:`gaussian_increment_objective` over SPD ``Sigma``.

    Optimises the Cholesky factor with log-diagonal, so every iterate is a
    valid covariance. Returns ``(Sigma_hat, OptimizeResult)``.
    """
    rows = np.asarray(rows, dtype=float)
    k = rows.shape[1]

    def f(p):
        sig = _sigma_from_params(p, k)
        try:
            return gaussian_increment_objective(sig, rows)
        except NotPositiveDefinite:
            return np.inf

    opts = {"step": 0.1, "xatol": 1e-9, "fatol": 1e-11, "restarts": 2} | nm_options
    res = nx.nelder_mead(f, _chol_params(start_sigma), **opts)
    return _sigma_from_params(res.x, k), res


def est_mv_mle(exc: ExceedanceSet, start=None, **nm_options) -> EstimateReport:
    """Full Gaussian-increment ML estimate of the parameter matrix.

    ``start`` is a parameter matrix in the original component order and
    defaults to :func:`est_mv_var`.
    """
    d = _mv_increments(exc)
    pivot = exc.pivot or 0
    if start is None:
        start = est_mv_var(exc).estimate
    start_sigma = hr_model.psi_submatrix(_reorder_from_pivot(np.asarray(start, float), pivot))
    start_obj = gaussian_increment_objective(start_sigma, d)
    sigma, res = fit_gaussian_increments(d, start_sigma, **nm_options)
    lam = _reorder_to_pivot(hr_model.lambda_of_sigma(sigma), pivot)
    diag = res.diagnostics() | {"objective": res.fun, "start_objective": start_obj, "pivot": pivot}
    return EstimateReport("mv-mle", lam, exc.count, exc.q, diag, trace=res.history)
