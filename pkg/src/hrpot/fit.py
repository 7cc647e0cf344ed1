"""Parametric Brown-Resnick fitting on a set of locations.

Three estimators of the variogram parameters ``(alpha, s[, beta, c])``:

* :func:`fit_projection_ls` least-squares projection of pairwise
  ``lambda^2`` estimates onto the model family;
* :func:`fit_spectral_ml` full multivariate spectral likelihood;
* :func:`fit_spectral_cl` pairwise (composite) spectral likelihood.

All optimise over unconstrained coordinates
``(logit(alpha/2), log s[, beta, log c])`` with Nelder-Mead.
"""
from __future__ import annotations

from itertools import combinations
from typing import Callable

import numpy as np

from . import numerics as nx
from .core import EstimateReport, ExceedanceSet, SampleMatrix
from .errors import NotPositiveDefinite
from .increments import closed_form_lambda_sq
from .margins import select_exceedances_component, select_exceedances_sum, to_scale
from .spectral import spectral_objective
from .variogram import LocationSet, VariogramSpec, lambda_of_variogram, pairwise_distances

_ALPHA_EPS = 1e-9


def default_start(locs: LocationSet, anisotropy: bool = False) -> VariogramSpec:
    d = pairwise_distances(locs.points)[np.triu_indices(len(locs), 1)]
    return VariogramSpec(1.0, float(np.median(d)), 0.0, 1.0, anisotropy)


def to_free(spec: VariogramSpec) -> np.ndarray:
    a = np.clip(spec.alpha / 2.0, _ALPHA_EPS, 1.0 - _ALPHA_EPS)
    p = [np.log(a / (1.0 - a)), np.log(spec.s)]
    if spec.anisotropy:
        p += [spec.beta, np.log(spec.c)]
    return np.array(p)


def from_free(p: np.ndarray, anisotropy: bool) -> VariogramSpec:
    alpha = 2.0 / (1.0 + np.exp(-p[0]))
    alpha = float(np.clip(alpha, _ALPHA_EPS, 2.0))
    if anisotropy:
        return VariogramSpec(alpha, float(np.exp(p[1])), float(p[2]), float(np.exp(p[3])), True)
    return VariogramSpec(alpha, float(np.exp(p[1])))


def _check_locs(locs: LocationSet, anisotropy: bool):
    if anisotropy and locs.dim != 2:
        raise ValueError("anisotropy requires 2-D locations")


def _starts(start: VariogramSpec, locs: LocationSet, n_beta: int) -> list[VariogramSpec]:
    if not start.anisotropy or n_beta <= 1:
        return [start]
    # beta is unidentified at c = 1, so spread starting angles and perturb c
    c0 = start.c if start.c != 1.0 else 1.5
    return [
        VariogramSpec(start.alpha, start.s, start.beta + i * np.pi / n_beta, c0, True)
        for i in range(n_beta)
    ]


def _minimise(
    objective: Callable[[VariogramSpec], float],
    starts: list[VariogramSpec],
    name: str,
    nm_options: dict,
) -> EstimateReport:
    anis = starts[0].anisotropy

    def f(p):
        try:
            return objective(from_free(p, anis))
        except (NotPositiveDefinite, ValueError, FloatingPointError):
            return np.inf

    opts = {"step": 0.3, "xatol": 1e-8, "fatol": 1e-10, "restarts": 2} | nm_options
    best = None
    start_obj = objective(starts[0])
    for st in starts:
        res = nx.nelder_mead(f, to_free(st), **opts)
        if best is None or res.fun < best.fun:
            best = res
    spec = from_free(best.x, anis).normalized()
    diag = best.diagnostics() | {"objective": best.fun, "start_objective": start_obj}
    return EstimateReport(name, spec.params(), None, None, diag, model=spec, trace=best.history)


def fit_projection_ls(
    pairwise,
    locs: LocationSet,
    start: VariogramSpec | None = None,
    *,
    anisotropy: bool = False,
    norm: str = "fro",
    n_beta_starts: int = 4,
    **nm_options,
) -> EstimateReport:
    """Minimise ``||(lambda^2_ij - gamma(t_i - t_j) / 4)_ij||`` over the parameters.

    ``norm`` is ``"fro"`` (Frobenius) or ``"2"`` (spectral norm).
    """
    pw = np.asarray(pairwise, dtype=float)
    if pw.shape != (len(locs), len(locs)):
        raise ValueError("pairwise matrix must match the number of locations")
    if np.max(np.abs(pw - pw.T)) > 1e-12 or np.any(pw < 0):
        raise ValueError("pairwise matrix must be symmetric and nonnegative")
    _check_locs(locs, anisotropy)
    if start is None:
        start = default_start(locs, anisotropy)
    ord_ = {"fro": "fro", "2": 2}[norm]

    def objective(spec):
        return float(np.linalg.norm(pw - lambda_of_variogram(spec, locs, check=False), ord=ord_))

    rep = _minimise(objective, _starts(start, locs, n_beta_starts), "proj-ls", nm_options)
    rep.diagnostics["residual"] = rep.diagnostics["objective"]
    return rep


def fit_spectral_ml(
    exc: ExceedanceSet,
    locs: LocationSet,
    start: VariogramSpec | None = None,
    *,
    anisotropy: bool = False,
    n_beta_starts: int = 4,
    **nm_options,
) -> EstimateReport:
    """Full spectral likelihood of ``Lambda(theta)`` at all locations."""
    if exc.region != "sum" or exc.k_plus_1 != len(locs):
        raise ValueError("need sum exceedances over all locations")
    _check_locs(locs, anisotropy)
    if start is None:
        start = default_start(locs, anisotropy)
    lr = exc.log_ratios()

    def objective(spec):
        return spectral_objective(lambda_of_variogram(spec, locs, check=False), lr)

    rep = _minimise(objective, _starts(start, locs, n_beta_starts), "spec-ml", nm_options)
    rep.n_exceedances, rep.q = exc.count, exc.q
    return rep


def pairwise_sum_exceedances(data: SampleMatrix, q: float, **kwargs) -> dict:
    """Sum-type exceedances for every pair of columns, keyed by ``(i, j)``."""
    frechet = to_scale(data, "frechet")
    return {
        (i, j): select_exceedances_sum(frechet.columns([i, j]), q, **kwargs)
        for i, j in combinations(range(data.k_plus_1), 2)
    }


def fit_spectral_cl(
    exc_pairs: dict,
    locs: LocationSet,
    start: VariogramSpec | None = None,
    *,
    anisotropy: bool = False,
    n_beta_starts: int = 4,
    **nm_options,
) -> EstimateReport:
    """Composite likelihood: sum over pairs of bivariate spectral likelihoods."""
    k1 = len(locs)
    pairs = list(combinations(range(k1), 2))
    missing = [p for p in pairs if p not in exc_pairs]
    if missing:
        raise ValueError(f"missing exceedances for pairs {missing[:3]}")
    _check_locs(locs, anisotropy)
    if start is None:
        start = default_start(locs, anisotropy)
    ii = np.array([p[0] for p in pairs])
    jj = np.array([p[1] for p in pairs])
    stats_ = np.array([
        [e.count, np.sum(lr), np.sum(lr**2)]
        for e in (exc_pairs[p] for p in pairs)
        for lr in [e.log_ratios()[:, 0]]
    ])
    cnt, s1, s2 = stats_.T

    def objective(spec):
        lam_sq = lambda_of_variogram(spec, locs, check=False)[ii, jj]
        if np.any(lam_sq <= 0) or not np.all(np.isfinite(lam_sq)):
            return np.inf
        # sum over pairs of N/2 log(4 l) + sum (L + 2 l)^2 / (8 l)
        val = 0.5 * cnt * np.log(4.0 * lam_sq) + (s2 + 4.0 * lam_sq * s1 + 4.0 * lam_sq**2 * cnt) / (8.0 * lam_sq)
        return float(np.sum(val))

    rep = _minimise(objective, _starts(start, locs, n_beta_starts), "spec-cl", nm_options)
    rep.n_exceedances = int(cnt.sum())
    rep.q = next(iter(exc_pairs.values())).q
    return rep


def pairwise_mle1(data: SampleMatrix, q: float, **kwargs) -> np.ndarray:
    """Matrix of bivariate closed-form increment estimates (pivot = lower index)."""
    expo = to_scale(data, "exponential")
    k1 = data.k_plus_1
    out = np.zeros((k1, k1))
    for i, j in combinations(range(k1), 2):
        exc = select_exceedances_component(expo.columns([i, j]), 0, q, **kwargs)
        out[i, j] = out[j, i] = closed_form_lambda_sq(exc.increments[:, 0])
    return out


def fit_br(
    data: SampleMatrix,
    locs: LocationSet,
    method: str,
    q: float,
    *,
    anisotropy: bool = False,
    start: VariogramSpec | None = None,
    **kwargs,
) -> EstimateReport:
    """Standardise ``data`` and run one of ``proj-ls``, ``spec-ml``, ``spec-cl``."""
    if data.k_plus_1 != len(locs):
        raise ValueError("data columns must match the locations")
    if method == "proj-ls":
        return fit_projection_ls(pairwise_mle1(data, q), locs, start, anisotropy=anisotropy, **kwargs)
    if method == "spec-ml":
        exc = select_exceedances_sum(data, q)
        return fit_spectral_ml(exc, locs, start, anisotropy=anisotropy, **kwargs)
    if method == "spec-cl":
        return fit_spectral_cl(pairwise_sum_exceedances(data, q), locs, start, anisotropy=anisotropy, **kwargs)
    raise ValueError(f"unknown fitting method {method!r}")
