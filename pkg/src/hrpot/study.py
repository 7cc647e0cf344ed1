"""Simulation studies: bivariate estimator comparison, parametric recovery
and fit-plus-resimulation validation.

Every task draws its random numbers from
``SeedSequence(seed, spawn_key=(cell, rep))``, so results do not depend on
the number of workers or the order in which tasks finish.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from . import blockmax, hr_model, increments, spectral
from . import numerics as nx
from .core import SampleMatrix
from .errors import HRPotError
from .fit import fit_br
from .margins import (
    empirical_standardize,
    select_exceedances_component,
    select_exceedances_sum,
    select_exceedances_union,
    to_scale,
)
from .simulate import BrSampleConfig, br_sample, hr_sample_bivariate
from .variogram import LocationSet, VariogramSpec, ecf_curve

POT_ESTIMATORS = ("mle1", "mle2", "var", "mean", "spec")
BLOCK_ESTIMATORS = ("mado", "block-ml")
BIVARIATE_ESTIMATORS = POT_ESTIMATORS + BLOCK_ESTIMATORS
PARAMETRIC_ESTIMATORS = ("spec-ml", "spec-cl", "proj-ls")

# only (8000, 0.975) is fixed by the application; the other two are choices
DEFAULT_Q = {500: 0.96, 8000: 0.975, 100000: 0.99}


def default_q(n: int) -> float:
    if n in DEFAULT_Q:
        return DEFAULT_Q[n]
    raise KeyError(f"no default threshold quantile for n={n}; set q_per_n")


@dataclass
class StudyConfig:
    lambda_grid: list[float] = field(default_factory=lambda: [0.25, 0.5])
    n_grid: list[int] = field(default_factory=lambda: [500, 8000])
    q_per_n: dict[int, float] = field(default_factory=dict)
    block_size: int = 150
    repetitions: int = 50
    estimators: list[str] = field(default_factory=lambda: list(BIVARIATE_ESTIMATORS))
    seed: int = 0
    margins: str = "empirical"

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not self.lambda_grid or not self.n_grid:
            raise ValueError("parameter grids must be non-empty")
        unknown = set(self.estimators) - set(BIVARIATE_ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators {sorted(unknown)}")
        self.q_per_n = {int(k): float(v) for k, v in self.q_per_n.items()}
        for n in self.n_grid:
            if int(n) not in self.q_per_n:
                self.q_per_n[int(n)] = default_q(int(n))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["q_per_n"] = {str(k): v for k, v in sorted(self.q_per_n.items())}
        return d


@dataclass
class ParametricConfig:
    """1-D Brown-Resnick recovery: ``gamma(h) = ||h / s||^alpha`` on ``n_sites``
    equispaced sites of ``[0, length]``."""

    n: int = 8000
    q: float = 0.975
    repetitions: int = 30
    n_sites: int = 10
    length: float = 3.0
    alpha: float = 1.0
    s: float = 1.0
    estimators: list[str] = field(default_factory=lambda: list(PARAMETRIC_ESTIMATORS))
    seed: int = 0

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        unknown = set(self.estimators) - set(PARAMETRIC_ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators {sorted(unknown)}")

    def locations(self) -> LocationSet:
        return LocationSet(np.linspace(0.0, self.length, self.n_sites))

    def to_dict(self) -> dict:
        return asdict(self)


def worker_count() -> int:
    cap = os.environ.get("HRPOT_THREADS")
    avail = os.cpu_count() or 1
    if cap:
        return max(1, min(int(cap), avail))
    return avail


def _task_rng(seed: int, *key: int) -> np.random.Generator:
    return nx.make_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


def _run_tasks(fn, tasks: list, workers: int | None) -> list:
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# bivariate study ---------------------------------------------------------


def bivariate_estimates(sample: SampleMatrix, q: float, block_size: int, estimators, margins="empirical"):
    """Run the requested bivariate estimators on one sample.

    Returns ``{estimator: (lambda_sq_hat, N, note)}``; failures become
    ``(nan, N, reason)``.
    """
    if margins == "empirical":
        expo = empirical_standardize(sample, "exponential")
    else:
        expo = to_scale(sample, "exponential")
    out = {}
    runners = {
        "mle1": lambda: increments.est_biv_mle1(select_exceedances_component(expo, 0, q)),
        "mle2": lambda: increments.est_biv_mle2(select_exceedances_union(expo, q)),
        "var": lambda: increments.est_biv_var(select_exceedances_component(expo, 0, q)),
        "mean": lambda: increments.est_biv_mean(select_exceedances_component(expo, 0, q)),
        "spec": lambda: spectral.est_spec_biv(select_exceedances_sum(expo, q)),
        "mado": lambda: blockmax.est_madogram(blockmax.block_maxima(sample, block_size)),
        "block-ml": lambda: blockmax.est_hr_blockml(blockmax.block_maxima(sample, block_size)),
    }
    for name in estimators:
        try:
            rep = runners[name]()
            note = "; ".join(rep.notes)
            if rep.diagnostics.get("converged") is False:
                note = (note + "; " if note else "") + "optimizer did not converge"
            out[name] = (float(rep.estimate), rep.n_exceedances, note)
        except HRPotError as exc:
            out[name] = (np.nan, getattr(exc, "n_found", None), f"{type(exc).__name__}: {exc}")
    return out


def _bivariate_task(task):
    (il, lam_sq), (jn, n), rep, cfg = task
    q = cfg.q_per_n[int(n)]
    rng = _task_rng(cfg.seed, il, jn, rep)
    sample = hr_sample_bivariate(lam_sq, int(n), rng)
    est = bivariate_estimates(sample, q, cfg.block_size, cfg.estimators, cfg.margins)
    rows = []
    for name in cfg.estimators:
        lam_hat, count, note = est[name]
        theta_hat = np.nan if np.isnan(lam_hat) else hr_model.extremal_coefficient(lam_hat)
        rows.append({
            "lambda_sq_true": float(lam_sq),
            "n": int(n),
            "q": float(q),
            "estimator": name,
            "rep": int(rep),
            "lambda_sq_hat": lam_hat,
            "theta_hat": theta_hat,
            "theta_true": hr_model.extremal_coefficient(lam_sq),
            "N": "" if count is None else int(count),
            "note": note,
        })
    return rows


def run_bivariate_study(cfg: StudyConfig, workers: int | None = None) -> list[dict]:
    """One row per (lambda^2, n, estimator, repetition), in that order."""
    tasks = [
        (lam, nn, rep, cfg)
        for lam, nn in product(enumerate(cfg.lambda_grid), enumerate(cfg.n_grid))
        for rep in range(cfg.repetitions)
    ]
    chunks = _run_tasks(_bivariate_task, tasks, workers)
    rows = [r for chunk in chunks for r in chunk]
    order = {name: i for i, name in enumerate(cfg.estimators)}
    lam_idx = {v: i for i, v in enumerate(cfg.lambda_grid)}
    n_idx = {v: i for i, v in enumerate(cfg.n_grid)}
    rows.sort(key=lambda r: (lam_idx[r["lambda_sq_true"]], n_idx[r["n"]], order[r["estimator"]], r["rep"]))
    return rows


def summarize_bivariate(rows: list[dict]) -> list[dict]:
    """Pointwise mean, sd and empirical 2.5/97.5% quantiles of theta-hat per cell."""
    cells: dict = {}
    for r in rows:
        cells.setdefault((r["lambda_sq_true"], r["n"], r["estimator"]), []).append(r)
    out = []
    for (lam, n, name), rs in cells.items():
        th = np.array([r["theta_hat"] for r in rs], dtype=float)
        ok = th[np.isfinite(th)]
        out.append({
            "lambda_sq_true": lam,
            "n": n,
            "q": rs[0]["q"],
            "estimator": name,
            "theta_true": hr_model.extremal_coefficient(lam),
            "theta_mean": float(np.mean(ok)) if ok.size else np.nan,
            "theta_sd": float(np.std(ok, ddof=1)) if ok.size > 1 else np.nan,
            "theta_q025": float(np.quantile(ok, 0.025)) if ok.size else np.nan,
            "theta_q975": float(np.quantile(ok, 0.975)) if ok.size else np.nan,
            "failures": int(th.size - ok.size),
        })
    return out


# parametric study ---------------------------------------------------------


def _parametric_task(task):
    rep, cfg = task
    rng = _task_rng(cfg.seed, 1_000_003, rep)
    locs = cfg.locations()
    sample = br_sample(BrSampleConfig(locs, VariogramSpec(cfg.alpha, cfg.s), cfg.n, rng))
    rows = []
    for name in cfg.estimators:
        try:
            rep_ = fit_br(sample, locs, name, cfg.q)
            spec = rep_.model
            rows.append({"estimator": name, "rep": rep, "alpha_hat": spec.alpha, "s_hat": spec.s,
                         "converged": rep_.diagnostics.get("converged")})
        except HRPotError as exc:
            rows.append({"estimator": name, "rep": rep, "alpha_hat": np.nan, "s_hat": np.nan,
                         "converged": False, "note": str(exc)})
    return rows


def run_parametric_study(cfg: ParametricConfig, workers: int | None = None) -> list[dict]:
    chunks = _run_tasks(_parametric_task, [(rep, cfg) for rep in range(cfg.repetitions)], workers)
    rows = [r for chunk in chunks for r in chunk]
    order = {name: i for i, name in enumerate(cfg.estimators)}
    rows.sort(key=lambda r: (order[r["estimator"]], r["rep"]))
    return rows


def summarize_parametric(rows: list[dict], distances=None) -> dict:
    """Per estimator: mean, sd and 5/95% quantiles of the parameters, and ECF
    curves at the mean and quantile parameter values."""
    if distances is None:
        distances = np.linspace(0.0, 3.0, 50)
    out = {}
    for name in dict.fromkeys(r["estimator"] for r in rows):
        par = np.array([[r["alpha_hat"], r["s_hat"]] for r in rows if r["estimator"] == name], float)
        par = par[np.all(np.isfinite(par), axis=1)]
        stats_ = {
            "mean": par.mean(axis=0),
            "sd": par.std(axis=0, ddof=1) if len(par) > 1 else np.full(2, np.nan),
            "q05": np.quantile(par, 0.05, axis=0),
            "q95": np.quantile(par, 0.95, axis=0),
        }
        curves = {
            key: ecf_curve(VariogramSpec(float(np.clip(v[0], 1e-9, 2.0)), float(v[1])), distances).tolist()
            for key, v in stats_.items() if key != "sd"
        }
        out[name] = {k: v.tolist() for k, v in stats_.items()} | {"ecf": curves, "distances": list(distances)}
    return out


# fit and resimulate ---------------------------------------------------------


def circular_sd(beta, period: float = np.pi) -> float:
    """Sample SD of angles defined modulo ``period``.

    Deviations are taken from the circular mean and wrapped into
    ``[-period/2, period/2)``.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.size < 2:
        return float("nan")
    z = np.exp(2j * np.pi * beta / period)
    m = np.angle(z.mean()) * period / (2 * np.pi)
    dev = np.mod(beta - m + period / 2, period) - period / 2
    return float(np.sqrt(np.sum(dev**2) / (beta.size - 1)))


def _resim_task(task):
    r, spec, locs, n, q, method, anisotropy, seed, m_idx = task
    rng = _task_rng(seed, 2_000_003, m_idx, r)
    sample = br_sample(BrSampleConfig(locs, spec, n, rng))
    fit = fit_br(sample, locs, method, q, anisotropy=anisotropy)
    return fit.model


def run_fit_and_resimulate(
    data: SampleMatrix,
    locs: LocationSet,
    methods=("proj-ls", "spec-ml", "spec-cl"),
    q: float = 0.975,
    *,
    anisotropy: bool = False,
    resim: int = 100,
    seed: int = 0,
    distances=None,
    workers: int | None = None,
) -> dict:
    """Fit each method, then simulate ``resim`` datasets from the fit and refit.

    Simulating the anisotropic model at the original sites has the same law as
    the isotropic model at the transformed sites ``V(beta, c) T``.
    """
    if distances is None:
        d = np.linalg.norm(locs.points[:, None] - locs.points[None], axis=-1)
        distances = np.linspace(0.0, float(d.max()), 50)
    out = {}
    for m_idx, method in enumerate(methods):
        fit = fit_br(data, locs, method, q, anisotropy=anisotropy)
        spec = fit.model
        tasks = [(r, spec, locs, data.n, q, method, anisotropy, seed, m_idx) for r in range(resim)]
        refits = _run_tasks(_resim_task, tasks, workers)
        names = ["alpha", "s"] + (["beta", "c"] if anisotropy else [])
        table = [[getattr(s_, k) for k in names] for s_ in refits]
        arr = np.array(table, dtype=float).reshape(len(refits), len(names))
        sd = {}
        if len(refits) > 1:
            for i, k in enumerate(names):
                sd[k] = circular_sd(arr[:, i]) if k == "beta" else float(np.std(arr[:, i], ddof=1))
        iso = [VariogramSpec(s_.alpha, s_.s) for s_ in refits]
        out[method] = {
            "fit": fit,
            "params": spec.params(),
            "refits": [dict(zip(names, row)) for row in table],
            "sd": sd,
            "distances": list(map(float, distances)),
            "ecf_fit": ecf_curve(VariogramSpec(spec.alpha, spec.s), distances).tolist(),
            "ecf_refits": [ecf_curve(s_, distances).tolist() for s_ in iso],
        }
    return out
