"""Spectral-domain estimators from observations with a large L1 norm.

With ``L = log(omega_j / omega_0)`` the Hüsler-Reiss spectral likelihood
has the same Gaussian form in ``L`` as the increment likelihood, so the
optimiser of :mod:`hrpot.increments` is reused.
"""
from __future__ import annotations

import numpy as np

from . import hr_model
from .core import EstimateReport, ExceedanceSet
from .increments import (
    closed_form_lambda_sq,
    fit_gaussian_increments,
    gaussian_increment_objective,
)


def _log_ratios(exc: ExceedanceSet) -> np.ndarray:
    if exc.region != "sum":
        raise ValueError(f"spectral estimators need sum exceedances, got {exc.region!r}")
    return exc.log_ratios()


def est_spec_biv(exc: ExceedanceSet) -> EstimateReport:
    """Closed-form bivariate spectral estimate of ``lambda^2``."""
    lr = _log_ratios(exc)
    if lr.shape[1] != 1:
        raise ValueError("est_spec_biv needs bivariate data")
    return EstimateReport("spec", float(closed_form_lambda_sq(lr[:, 0])), exc.count, exc.q,
                          {"dropped_boundary": exc.dropped})


def spectral_objective(lam, log_ratios: np.ndarray) -> float:
    """``(N/2) log det Psi + 1/2 sum omega~^T Psi^{-1} omega~``."""
    return gaussian_increment_objective(hr_model.psi_submatrix(lam), log_ratios)


def spectral_neg_loglik(lam, exc: ExceedanceSet) -> float:
    """``-sum_i log h(omega_i; lam)`` using the full spectral density."""
    return -float(np.sum(hr_model.spectral_logdensity(exc.omega, lam)))


def spectral_variance_start(log_ratios: np.ndarray) -> np.ndarray:
    """Moment start value: ``lambda_of_sigma`` of the log-ratio covariance."""
    centred = log_ratios - log_ratios.mean(axis=0)
    sigma = centred.T @ centred / log_ratios.shape[0]
    return hr_model.lambda_of_sigma(sigma)


def est_spec_mv(exc: ExceedanceSet, start=None, **nm_options) -> EstimateReport:
    """Spectral maximum likelihood estimate of the full parameter matrix.

    ``start`` defaults to :func:`spectral_variance_start`; pass the
    increment-variance estimate to follow the usual two-stage recipe.
    """
    lr = _log_ratios(exc)
    if start is None:
        start = spectral_variance_start(lr)
    start_sigma = hr_model.psi_submatrix(start)
    start_obj = gaussian_increment_objective(start_sigma, lr)
    sigma, res = fit_gaussian_increments(lr, start_sigma, **nm_options)
    lam = hr_model.lambda_of_sigma(sigma)
    diag = res.diagnostics() | {
        "objective": res.fun,
        "start_objective": start_obj,
        "dropped_boundary": exc.dropped,
    }
    return EstimateReport("spec-mv", lam, exc.count, exc.q, diag, trace=res.history)


def biv_spectral_objective(lam_sq: float, log_ratios) -> float:
    """Bivariate spectral negative log-likelihood up to a constant."""
    if lam_sq <= 0:
        return np.inf
    lr = np.asarray(log_ratios, dtype=float)
    n = lr.size
    return 0.5 * n * np.log(4.0 * lam_sq) + np.sum((lr + 2.0 * lam_sq) ** 2) / (8.0 * lam_sq)


def spectral_point_objective(lam, omega) -> float:
    """Same as :func:`spectral_objective` taking simplex points directly."""
    omega = np.atleast_2d(np.asarray(omega, dtype=float))
    lr, _ = hr_model.spectral_log_terms(omega)
    return spectral_objective(lam, lr)


__all__ = [
    "est_spec_biv",
    "est_spec_mv",
    "spectral_objective",
    "spectral_neg_loglik",
    "spectral_variance_start",
    "biv_spectral_objective",
    "spectral_point_objective",
]
