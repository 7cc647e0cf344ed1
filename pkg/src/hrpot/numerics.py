"""Numerical kernels: normal functions, SPD linear algebra, Nelder-Mead, RNG.

The scalar normal functions are thin wrappers around ``scipy.special``
(``ndtr``/``ndtri`` are accurate to double precision in both tails).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, special

from .errors import MaxIterationsExceeded, NotPositiveDefinite

LOG_2PI = float(np.log(2.0 * np.pi))

# relative to the largest diagonal entry
CHOLESKY_PIVOT_TOL = 1e-12


def std_normal_cdf(x):
    """Standard normal distribution function, vectorised."""
    return special.ndtr(x)


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


def std_normal_logpdf(x):
    x = np.asarray(x, dtype=float)
    return -0.5 * x * x - 0.5 * LOG_2PI


def std_normal_logcdf(x):
    return special.log_ndtr(x)


def std_normal_quantile(p):
    """Inverse of :func:`std_normal_cdf`.

    Raises
    ------
    ValueError
        If any ``p`` lies outside the open interval (0, 1).
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0.0) & (p_arr < 1.0))):
        raise ValueError("std_normal_quantile requires 0 < p < 1")
    out = special.ndtri(p_arr)
    return float(out) if out.ndim == 0 else out


def symmetrize(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + m.T)


def cholesky(m: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Raises
    ------
    NotPositiveDefinite
        If the matrix is not symmetric or a pivot falls below
        ``1e-12 * max(diag(m))``.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotPositiveDefinite("matrix has non-finite entries")
    scale = max(np.max(np.abs(m)), np.finfo(float).tiny)
    if np.max(np.abs(m - m.T)) > 1e-12 * scale:
        raise NotPositiveDefinite("matrix is not symmetric")
    diag_max = np.max(np.diag(m))
    if diag_max <= 0.0:
        raise NotPositiveDefinite("matrix has no positive diagonal entry")
    try:
        chol = np.linalg.cholesky(symmetrize(m))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.diag(chol) ** 2
    if np.min(pivots) <= CHOLESKY_PIVOT_TOL * diag_max:
        raise NotPositiveDefinite(
            f"Cholesky pivot {np.min(pivots):.3e} below tolerance"
        )
    return chol


def is_spd(m: np.ndarray) -> bool:
    try:
        cholesky(m)
    except NotPositiveDefinite:
        return False
    return True


def chol_logdet(chol: np.ndarray) -> float:
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def mvn_logpdf(x, mean, cov) -> float | np.ndarray:
    """Log density of N(mean, cov).

    ``x`` may be a single vector of length k or an (N, k) array of rows, in
    which case an array of N log densities is returned.
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    k = cov.shape[0]
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    rows = x.reshape(-1, k)
    diff = rows - np.asarray(mean, dtype=float).reshape(1, k)
    chol = cholesky(cov)
    z = _solve_lower(chol, diff.T)
    out = -0.5 * (k * LOG_2PI + chol_logdet(chol) + np.sum(z * z, axis=0))
    return float(out[0]) if single else out


def _solve_lower(chol: np.ndarray, b: np.ndarray) -> np.ndarray:
    from scipy.linalg import solve_triangular

    return solve_triangular(chol, b, lower=True, check_finite=False)


def gaussian_quadratic_terms(rows: np.ndarray, cov: np.ndarray) -> tuple[float, float]:
    """Return ``(log det cov, sum_i rows_i^T cov^{-1} rows_i)``.

    This is the common core of all Gaussian-type negative log-likelihoods.
    """
    chol = cholesky(cov)
    z = _solve_lower(chol, np.asarray(rows, dtype=float).T)
    return chol_logdet(chol), float(np.sum(z * z))


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    nit: int
    nfev: int
    converged: bool
    message: str = ""
    history: list[float] = field(default_factory=list)

    def diagnostics(self) -> dict:
        return {
            "iterations": int(self.nit),
            "evaluations": int(self.nfev),
            "converged": bool(self.converged),
            "message": self.message,
        }


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    start: Sequence[float],
    *,
    step: float | Sequence[float] = 0.25,
    xatol: float = 1e-8,
    fatol: float = 1e-10,
    maxiter: int | None = None,
    restarts: int = 1,
    raise_on_maxiter: bool = False,
) -> OptimizeResult:
    """Minimise ``objective`` with the Nelder-Mead simplex method.

    Backed by ``scipy.optimize.minimize(method="Nelder-Mead")`` using an
    axis-aligned initial simplex with edge ``step``. After convergence the
    search is restarted ``restarts`` times from the best point, which guards
    against the simplex collapsing prematurely in higher dimensions.
    Objective values that are not finite are treated as ``+inf``.

    Returns best point found; when the iteration budget is exhausted
    ``converged`` is False (or :class:`MaxIterationsExceeded` is raised if
    ``raise_on_maxiter``).
    """
    x0 = np.atleast_1d(np.asarray(start, dtype=float)).copy()
    p = x0.size
    f0 = objective(x0)
    if not np.isfinite(f0):
        raise ValueError("objective is not finite at the starting point")
    if maxiter is None:
        maxiter = 400 * p
    steps = np.broadcast_to(np.asarray(step, dtype=float), (p,))

    def safe(x):
        val = objective(x)
        return float(val) if np.isfinite(val) else np.inf

    history: list[float] = [float(f0)]
    best_x, best_f = x0, float(f0)
    nit = nfev = 0
    converged = False
    message = ""
    for _ in range(restarts + 1):
        simplex = np.vstack([best_x, best_x + np.diag(steps)])

        def record(intermediate_result):
            history.append(float(intermediate_result.fun))

        res = optimize.minimize(
            safe,
            best_x,
            method="Nelder-Mead",
            callback=record,
            options={
                "initial_simplex": simplex,
                "xatol": xatol,
                "fatol": fatol,
                "maxiter": max(maxiter - nit, 1),
                "adaptive": p > 3,
            },
        )
        nit += int(res.nit)
        nfev += int(res.nfev)
        message = str(res.message)
        converged = bool(res.success)
        if res.fun <= best_f:
            improvement = best_f - float(res.fun)
            best_x, best_f = np.asarray(res.x, dtype=float), float(res.fun)
        else:
            improvement = 0.0
        if not converged or nit >= maxiter:
            converged = False
            break
        if improvement <= fatol * max(1.0, abs(best_f)):
            break
    if not converged and raise_on_maxiter:
        raise MaxIterationsExceeded(message)
    return OptimizeResult(best_x, best_f, nit, nfev, converged, message, history)


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator (Gaussians via numpy's ziggurat sampler)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def child_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Deterministic, statistically independent child seeds for workers."""
    return np.random.SeedSequence(seed).spawn(count)
