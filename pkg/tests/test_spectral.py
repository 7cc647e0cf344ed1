import numpy as np
import pytest

from conftest import rejection_sample_parameter_matrix
from hrpot import numerics as nx
from hrpot.core import ExceedanceSet, SampleMatrix
from hrpot.increments import est_mv_var
from hrpot.margins import select_exceedances_component, select_exceedances_sum
from hrpot.simulate import BrSampleConfig, br_sample
from hrpot.spectral import (
    biv_spectral_objective,
    est_spec_biv,
    est_spec_mv,
    spectral_neg_loglik,
    spectral_objective,
    spectral_point_objective,
)
from hrpot.variogram import LocationSet, VariogramSpec


def sum_set(log_ratio):
    lr = np.atleast_2d(np.asarray(log_ratio, dtype=float))
    if lr.shape[0] == 1:
        lr = lr.T
    w = np.column_stack([np.ones(len(lr)), np.exp(lr)])
    w /= w.sum(axis=1, keepdims=True)
    return ExceedanceSet("sum", 10 * len(lr), w.shape[1], 0.9, 1.0, np.arange(len(lr)), omega=w, radii=np.ones(len(lr)))


def test_closed_form_examples(hr_quarter):
    y = np.full((30, 2), 5.0)
    y[:, :] += np.arange(30)[:, None]
    exc = select_exceedances_sum(SampleMatrix(y, "frechet"), 0.5)
    assert est_spec_biv(exc).estimate == pytest.approx(0.0, abs=1e-15)
    assert est_spec_biv(sum_set([np.sqrt(8), -np.sqrt(8)])).estimate == pytest.approx(1.0)
    rep = est_spec_biv(select_exceedances_sum(hr_quarter, 0.99))
    assert 0.15 <= rep.estimate <= 0.35


def test_closed_form_minimises_objective():
    lr = np.random.default_rng(0).normal(-1, 1.5, 250)
    r = nx.nelder_mead(lambda p: biv_spectral_objective(np.exp(p[0]), lr), [0.0], xatol=1e-12, fatol=1e-15)
    assert abs(np.exp(r.x[0]) - est_spec_biv(sum_set(lr)).estimate) < 1e-6


def test_mv_bivariate_reduction():
    lr = np.random.default_rng(1).normal(-0.8, 1.3, 300)
    exc = sum_set(lr)
    assert est_spec_mv(exc).estimate[0, 1] == pytest.approx(est_spec_biv(exc).estimate, abs=1e-6)


def test_objective_differs_from_loglik_by_constant():
    rng = np.random.default_rng(2)
    exc = sum_set(rng.normal(-0.5, 1.0, (80, 3)))
    offsets = []
    for _ in range(6):
        lam = rejection_sample_parameter_matrix(4, rng)
        offsets.append(spectral_neg_loglik(lam, exc) - spectral_objective(lam, exc.log_ratios()))
    assert np.ptp(offsets) < 1e-9
    lam = rejection_sample_parameter_matrix(4, rng)
    assert spectral_point_objective(lam, exc.omega) == pytest.approx(spectral_objective(lam, exc.log_ratios()))


def test_mv_brown_resnick_operating_point():
    locs = LocationSet(np.arange(5.0))
    sample = br_sample(BrSampleConfig(locs, VariogramSpec(1, 1), 8000, 21))
    start = est_mv_var(select_exceedances_component(sample, 0, 0.975)).estimate
    rep = est_spec_mv(select_exceedances_sum(sample, 0.975), start)
    truth = np.abs(locs.points - locs.points.T) / 4
    assert np.max(np.abs(rep.estimate - truth)) <= 0.2
    assert rep.diagnostics["objective"] <= rep.diagnostics["start_objective"]
    default = est_spec_mv(select_exceedances_sum(sample, 0.975))
    np.testing.assert_allclose(default.estimate, rep.estimate, atol=5e-3)


def test_requires_sum_exceedances(hr_quarter):
    with pytest.raises(ValueError):
        est_spec_biv(select_exceedances_component(hr_quarter, 0, 0.99))
