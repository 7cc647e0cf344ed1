import numpy as np
import pytest

from hrpot.fit import (
    fit_br,
    fit_projection_ls,
    fit_spectral_cl,
    fit_spectral_ml,
    from_free,
    pairwise_mle1,
    pairwise_sum_exceedances,
    to_free,
)
from hrpot.hr_model import extremal_coefficient
from hrpot.margins import select_exceedances_sum
from hrpot.simulate import BrSampleConfig, br_sample
from hrpot.study import ParametricConfig, circular_sd, run_parametric_study
from hrpot.variogram import LocationSet, VariogramSpec, lambda_of_variogram, pairwise_distances

LINE10 = LocationSet(np.linspace(0.0, 3.0, 10))


@pytest.fixture(scope="module")
def line10_sample():
    return br_sample(BrSampleConfig(LINE10, VariogramSpec(1.0, 1.0), 8000, 31))


@pytest.fixture(scope="module")
def replications():
    """100 replications of the 1-D parametric design (gamma(h) = |h|)."""
    return run_parametric_study(ParametricConfig(repetitions=100, seed=0))


def test_free_parametrisation_round_trip():
    for spec in (VariogramSpec(0.7, 2.0), VariogramSpec(1.9, 0.3, 1.2, 0.6, True)):
        back = from_free(to_free(spec), spec.anisotropy)
        for k, v in spec.params().items():
            assert back.params()[k] == pytest.approx(v, rel=1e-12)


def test_projection_exact_input_isotropic():
    truth = VariogramSpec(1.3, 0.8)
    rep = fit_projection_ls(lambda_of_variogram(truth, LINE10), LINE10)
    assert rep.diagnostics["residual"] <= 1e-8
    assert rep.estimate["alpha"] == pytest.approx(1.3, abs=1e-5)
    assert rep.estimate["s"] == pytest.approx(0.8, abs=1e-5)


def test_projection_exact_input_anisotropic():
    locs = LocationSet(np.random.default_rng(0).uniform(0, 2, (12, 2)))
    truth = VariogramSpec(1.0, 1.0, 0.4, 1.5, True)
    rep = fit_projection_ls(lambda_of_variogram(truth, locs), locs, anisotropy=True)
    assert rep.diagnostics["residual"] <= 1e-8
    got = rep.model
    for k in ("alpha", "s", "beta", "c"):
        assert getattr(got, k) == pytest.approx(getattr(truth, k), abs=1e-4)


def test_projection_perturbation():
    truth = VariogramSpec(1.0, 1.0)
    rng = np.random.default_rng(1)
    noise = np.triu(rng.uniform(-0.01, 0.01, (10, 10)), 1)
    noise = noise + noise.T
    pw = lambda_of_variogram(truth, LINE10) + noise
    rep = fit_projection_ls(pw, LINE10)
    assert rep.diagnostics["residual"] <= np.linalg.norm(noise)
    assert np.hypot(rep.estimate["alpha"] - 1, rep.estimate["s"] - 1) < 0.05
    two = fit_projection_ls(pw, LINE10, norm="2")
    assert two.diagnostics["residual"] <= np.linalg.norm(noise, 2)


def test_projection_input_validation():
    with pytest.raises(ValueError):
        fit_projection_ls(np.zeros((3, 3)), LINE10)
    with pytest.raises(ValueError):
        fit_projection_ls(lambda_of_variogram(VariogramSpec(), LINE10), LINE10, anisotropy=True)


def test_spectral_ml_operating_point(line10_sample):
    exc = select_exceedances_sum(line10_sample, 0.975)
    rep = fit_spectral_ml(exc, LINE10)
    assert 0.75 <= rep.estimate["alpha"] <= 1.25
    h = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(rep.model(h), h, rtol=0.25)
    assert rep.diagnostics["objective"] <= rep.diagnostics["start_objective"]
    assert rep.n_exceedances == exc.count


def test_spectral_ml_nested_anisotropy():
    locs = LocationSet(np.random.default_rng(2).uniform(0, 2, (10, 2)))
    alpha_iso, diffs = [], []
    for seed in range(6):
        s = br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1.0), 8000, 40 + seed))
        exc = select_exceedances_sum(s, 0.975)
        iso = fit_spectral_ml(exc, locs).model
        full = fit_spectral_ml(exc, locs, anisotropy=True).model
        # normalisation puts s on the long axis (c >= 1); s / sqrt(c) keeps the area
        alpha_iso.append([iso.alpha, iso.s])
        diffs.append([full.alpha - iso.alpha, full.s / np.sqrt(full.c) - iso.s])
    spread = np.std(alpha_iso, axis=0, ddof=1)
    assert np.all(np.mean(np.abs(diffs), axis=0) < spread)


def test_cl_two_locations_matches_ml():
    locs = LocationSet(np.array([0.0, 1.3]))
    s = br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1.0), 8000, 5))
    ml = fit_spectral_ml(select_exceedances_sum(s, 0.95), locs, VariogramSpec(1.0, 1.3))
    cl = fit_spectral_cl(pairwise_sum_exceedances(s, 0.95), locs, VariogramSpec(1.0, 1.3))
    # one pair identifies only gamma(1.3), so compare the fitted variogram there
    assert cl.model(1.3) == pytest.approx(ml.model(1.3), rel=1e-6)
    assert cl.diagnostics["objective"] == pytest.approx(ml.diagnostics["objective"], rel=1e-9)


def test_cl_objective_trace_decreases(line10_sample):
    rep = fit_spectral_cl(pairwise_sum_exceedances(line10_sample, 0.975), LINE10)
    assert np.all(np.diff(rep.trace) <= 1e-9)
    assert rep.trace[-1] == pytest.approx(rep.diagnostics["objective"])
    assert 0.7 <= rep.estimate["alpha"] <= 1.3


def test_cl_missing_pairs():
    with pytest.raises(ValueError):
        fit_spectral_cl({}, LINE10)


def test_pairwise_mle1_shape(line10_sample):
    pw = pairwise_mle1(line10_sample.columns([0, 3, 6]), 0.95)
    assert pw.shape == (3, 3) and np.all(np.diag(pw) == 0) and np.allclose(pw, pw.T)
    assert pw[0, 1] < pw[0, 2]


def test_fit_br_dispatch(line10_sample):
    pair = line10_sample.columns([0, 1])
    locs = LocationSet(LINE10.points[:2])
    with pytest.raises(ValueError):
        fit_br(pair, locs, "nope", 0.95)
    with pytest.raises(ValueError):
        fit_br(line10_sample, locs, "spec-ml", 0.95)


def test_projection_spread_exceeds_spectral(replications):
    a = {m: np.array([r["alpha_hat"] for r in replications if r["estimator"] == m]) for m in ("proj-ls", "spec-ml")}
    assert np.std(a["proj-ls"], ddof=1) > np.std(a["spec-ml"], ddof=1)


def test_cl_leans_towards_independence(replications):
    # average extremal coefficient over all site pairs, paired by replication
    d = pairwise_distances(LINE10.points)[np.triu_indices(10, 1)]

    def mean_theta(m):
        return np.array([np.mean(extremal_coefficient((d / r["s_hat"]) ** r["alpha_hat"] / 4))
                         for r in replications if r["estimator"] == m])

    assert np.mean(mean_theta("spec-cl") - mean_theta("spec-ml")) >= 0.0


def test_circular_sd():
    assert circular_sd(np.array([0.1, 0.1 + np.pi, 0.1 - np.pi])) == pytest.approx(0.0, abs=1e-12)
    assert circular_sd(np.array([np.pi - 0.05, 0.05])) == pytest.approx(np.std([-0.05, 0.05], ddof=1), rel=1e-6)
