"""Hüsler-Reiss family: parameter matrices, densities and extremal coefficients.

A parameter matrix ``lam`` is a symmetric ``(k+1, k+1)`` array of
``lambda^2_{ij}`` values with zero diagonal. It is valid when the associated
``psi_submatrix(lam)`` is positive definite.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import numerics as nx
from .errors import NotPositiveDefinite

# lambda^2 above this is treated as independence
LAMBDA_SQ_INF = 1e8


def as_parameter_matrix(lam, *, check: bool = True) -> np.ndarray:
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    if lam.ndim != 2 or lam.shape[0] != lam.shape[1] or lam.shape[0] < 2:
        raise ValueError(f"parameter matrix must be square with size >= 2, got {lam.shape}")
    if check:
        if np.any(lam < 0) or np.any(np.diag(lam) != 0.0):
            raise ValueError("parameter matrix needs nonnegative entries and zero diagonal")
        if np.max(np.abs(lam - lam.T)) > 1e-12 * max(1.0, np.max(lam)):
            raise ValueError("parameter matrix is not symmetric")
    return lam


def psi_submatrix(lam, m: Sequence[int] | None = None, *, check: bool = True) -> np.ndarray:
    """Covariance-type matrix ``2 (l_{m_i m_0} + l_{m_j m_0} - l_{m_i m_j})``.

    ``m`` is a strictly increasing index vector ``(m_0, ..., m_l)``; the
    default uses every index, giving the ``k x k`` matrix of the full model.
    With ``check`` the result is verified to be positive definite.
    """
    lam = as_parameter_matrix(lam)
    if m is None:
        m = np.arange(lam.shape[0])
    m = np.asarray(m, dtype=int)
    if m.size < 2 or np.any(np.diff(m) <= 0) or m[0] < 0 or m[-1] >= lam.shape[0]:
        raise ValueError("index vector must be strictly increasing within range, length >= 2")
    m0, rest = m[0], m[1:]
    col = lam[rest, m0]
    psi = 2.0 * (col[:, None] + col[None, :] - lam[np.ix_(rest, rest)])
    if check:
        nx.cholesky(psi)
    return psi


def is_valid_parameter_matrix(lam) -> bool:
    try:
        psi_submatrix(lam)
    except (NotPositiveDefinite, ValueError):
        return False
    return True


def lambda_of_sigma(sigma) -> np.ndarray:
    """Invert :func:`psi_submatrix` for the full index set."""
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
    k = sigma.shape[0]
    d = np.diag(sigma)
    lam = np.zeros((k + 1, k + 1))
    lam[0, 1:] = d
    lam[1:, 0] = d
    lam[1:, 1:] = d[:, None] + d[None, :] - 2.0 * sigma
    lam *= 0.25
    np.fill_diagonal(lam, 0.0)
    return lam


def increment_mean(lam) -> np.ndarray:
    """Mean ``-2 lambda^2_{j0}`` of the limiting extremal increments."""
    lam = as_parameter_matrix(lam)
    return -2.0 * lam[1:, 0]


def _check_lambda(lam_sq: float) -> float:
    lam_sq = float(lam_sq)
    if not lam_sq >= 0:
        raise ValueError("lambda^2 must be nonnegative")
    return lam_sq


def hr_cdf_bivariate(x, y, lam: float):
    """Bivariate Hüsler-Reiss CDF with standard Gumbel margins.

    ``lam`` is the (non-squared) dependence parameter; ``0`` gives complete
    dependence and ``np.inf`` independence.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lam = float(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if lam == 0.0:
        return np.exp(-np.exp(-np.minimum(x, y)))
    if lam**2 > LAMBDA_SQ_INF:
        return np.exp(-np.exp(-x) - np.exp(-y))
    a = lam + (y - x) / (2.0 * lam)
    b = lam + (x - y) / (2.0 * lam)
    with np.errstate(over="ignore", invalid="ignore"):
        v = np.exp(-x) * nx.std_normal_cdf(a) + np.exp(-y) * nx.std_normal_cdf(b)
    # handle x or y at +inf: the other margin survives
    v = np.where(np.isposinf(y), np.exp(-x), v)
    v = np.where(np.isposinf(x), np.exp(-y), v)
    out = np.exp(-v)
    return float(out) if out.ndim == 0 else out


def hr_logdensity_bivariate(x, y, lam: float):
    """Log density of the bivariate HR law (Gumbel margins).

    With ``V = -log H`` the density is ``H (V_x V_y - V_xy)``, which here
    equals ``H [e^{-x-y} Phi(a) Phi(b) + e^{-x} phi(a) / (2 lam)]`` with
    ``a = lam + (y-x)/(2 lam)`` and ``b = lam + (x-y)/(2 lam)``.
    """
    lam = float(lam)
    if not (0.0 < lam and lam**2 <= LAMBDA_SQ_INF):
        raise ValueError("density requires 0 < lambda < inf")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = lam + (y - x) / (2.0 * lam)
    b = lam + (x - y) / (2.0 * lam)
    log_pa, log_pb = nx.std_normal_logcdf(a), nx.std_normal_logcdf(b)
    v = np.exp(-x + log_pa) + np.exp(-y + log_pb)
    t1 = -x - y + log_pa + log_pb
    t2 = -x + nx.std_normal_logpdf(a) - np.log(2.0 * lam)
    out = -v + np.logaddexp(t1, t2)
    return float(out) if out.ndim == 0 else out


def exponent_measure_logdensity(x, lam) -> float | np.ndarray:
    """Log density of the HR exponent measure on the Gumbel scale.

    ``x`` is a length ``k+1`` vector or an array of such rows. The density is
    ``e^{-x_0}`` times the ``N(-2 lambda^2_{.0}, Psi)`` density evaluated at
    the increments ``x_j - x_0``.
    """
    lam = as_parameter_matrix(lam)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    rows = np.atleast_2d(x)
    incr = rows[:, 1:] - rows[:, :1]
    out = -rows[:, 0] + nx.mvn_logpdf(incr, increment_mean(lam), psi_submatrix(lam))
    out = np.atleast_1d(out)
    return float(out[0]) if single else out


def spectral_log_terms(omega) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(log omega_j - log omega_0, jacobian term)`` per simplex row.

    The jacobian term is ``-2 log omega_0 - sum_{j>=1} log omega_j``.
    """
    omega = np.atleast_2d(np.asarray(omega, dtype=float))
    if np.any(omega <= 0.0):
        raise ValueError("spectral density is only defined on the open simplex")
    logw = np.log(omega)
    log_ratio = logw[:, 1:] - logw[:, :1]
    jac = -2.0 * logw[:, 0] - np.sum(logw[:, 1:], axis=1)
    return log_ratio, jac


def spectral_logdensity(omega, lam) -> float | np.ndarray:
    """Log of the HR spectral density w.r.t. Lebesgue measure on the L1 simplex.

    ``omega`` has ``k+1`` positive coordinates summing to one (or is an
    array of such rows). The simplex is parametrised by ``omega_1..omega_k``.
    """
    lam = as_parameter_matrix(lam)
    omega_arr = np.asarray(omega, dtype=float)
    single = omega_arr.ndim == 1
    if omega_arr.shape[-1] != lam.shape[0]:
        raise ValueError("simplex dimension does not match the parameter matrix")
    log_ratio, jac = spectral_log_terms(omega_arr)
    tilde = log_ratio + 2.0 * lam[1:, 0]
    out = jac + np.atleast_1d(nx.mvn_logpdf(tilde, np.zeros(lam.shape[0] - 1), psi_submatrix(lam)))
    return float(out[0]) if single else out


def extremal_coefficient(lam_sq):
    """``theta = 2 Phi(sqrt(lambda^2))``; accepts arrays and ``np.inf``."""
    lam_sq = np.asarray(lam_sq, dtype=float)
    if np.any(lam_sq < 0):
        raise ValueError("lambda^2 must be nonnegative")
    out = 2.0 * nx.std_normal_cdf(np.sqrt(lam_sq))
    return float(out) if out.ndim == 0 else out


def ecf_of_variogram(h, variogram: Callable[[np.ndarray], float]):
    """Extremal coefficient ``2 Phi(sqrt(gamma(h)) / 2)`` of a BR process."""
    g = np.asarray(variogram(h), dtype=float)
    if np.any(g < 0):
        raise ValueError("variogram values must be nonnegative")
    out = 2.0 * nx.std_normal_cdf(np.sqrt(g) / 2.0)
    return float(out) if out.ndim == 0 else out


def random_parameter_matrix(k_plus_1: int, rng, dim: int = 2) -> np.ndarray:
    """Random valid parameter matrix from a fractal variogram on random sites."""
    rng = nx.make_rng(rng)
    while True:
        pts = rng.uniform(0.0, 3.0, size=(k_plus_1, dim))
        alpha = rng.uniform(0.2, 1.9)
        s = rng.uniform(0.3, 3.0)
        dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        lam = (dist / s) ** alpha / 4.0
        if is_valid_parameter_matrix(lam):
            return lam
