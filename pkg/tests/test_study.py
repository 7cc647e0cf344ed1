import numpy as np
import pytest

from hrpot.hr_model import extremal_coefficient
from hrpot.simulate import BrSampleConfig, br_sample
from hrpot.study import (
    ParametricConfig,
    StudyConfig,
    run_bivariate_study,
    run_fit_and_resimulate,
    run_parametric_study,
    summarize_bivariate,
    summarize_parametric,
    worker_count,
)
from hrpot.variogram import LocationSet, VariogramSpec


def test_degenerate_bivariate_config():
    rows = run_bivariate_study(StudyConfig([0.5], [500], repetitions=1, estimators=["spec"]))
    assert len(rows) == 1
    r = rows[0]
    assert r["estimator"] == "spec" and r["n"] == 500 and r["q"] == 0.96
    assert r["theta_hat"] == pytest.approx(extremal_coefficient(r["lambda_sq_hat"]))
    assert r["theta_true"] == pytest.approx(extremal_coefficient(0.5))


def test_block_cells_populated():
    rows = run_bivariate_study(StudyConfig([0.25], [8000], repetitions=2, estimators=["mado", "block-ml"]))
    assert len(rows) == 4
    for r in rows:
        assert np.isfinite(r["lambda_sq_hat"]) and r["N"] == 8000 // 150


def test_results_independent_of_workers():
    cfg = StudyConfig([0.25, 0.5], [500], repetitions=2, estimators=["mle1", "mado"], seed=9)
    assert run_bivariate_study(cfg, workers=1) == run_bivariate_study(cfg, workers=2)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("HRPOT_THREADS", "1")
    assert worker_count() == 1
    monkeypatch.delenv("HRPOT_THREADS")
    assert worker_count() >= 1


def test_config_validation():
    with pytest.raises(ValueError):
        StudyConfig(repetitions=0)
    with pytest.raises(ValueError):
        StudyConfig(estimators=["nope"])
    with pytest.raises(KeyError):
        StudyConfig(n_grid=[1234])
    assert StudyConfig(n_grid=[1234], q_per_n={1234: 0.9}).q_per_n == {1234: 0.9}
    with pytest.raises(ValueError):
        ParametricConfig(estimators=["mle1"])


def test_summaries():
    rows = run_bivariate_study(StudyConfig([0.5], [500], repetitions=3, estimators=["var", "mean"]))
    summ = summarize_bivariate(rows)
    assert {s["estimator"] for s in summ} == {"var", "mean"}
    for s in summ:
        assert s["theta_q025"] <= s["theta_mean"] <= s["theta_q975"] and s["failures"] == 0


def test_single_parametric_repetition():
    rows = run_parametric_study(ParametricConfig(repetitions=1, n=2000, q=0.95))
    assert sorted(r["estimator"] for r in rows) == ["proj-ls", "spec-cl", "spec-ml"]
    summ = summarize_parametric(rows, distances=np.linspace(0, 3, 5))
    assert len(summ["spec-ml"]["ecf"]["mean"]) == 5


def test_resimulation_smoke_anisotropic():
    locs = LocationSet(np.random.default_rng(0).uniform(0, 2, (6, 2)))
    data = br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1.0, 0.4, 1.5, True), 2000, 1))
    out = run_fit_and_resimulate(data, locs, ["spec-ml", "proj-ls"], 0.95, anisotropy=True, resim=2, seed=3)
    for m in ("spec-ml", "proj-ls"):
        assert len(out[m]["refits"]) == 2
        assert set(out[m]["sd"]) == {"alpha", "s", "beta", "c"}
        assert len(out[m]["ecf_refits"]) == 2 and len(out[m]["distances"]) == 50


def test_resimulation_envelope_covers_generating_model():
    # the resimulations are drawn from the first fit, so that fit is the truth they should recover
    locs = LocationSet(np.linspace(0.0, 3.0, 10))
    data = br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1.0), 8000, 2))
    out = run_fit_and_resimulate(data, locs, ["spec-ml"], 0.975, resim=30, seed=4)["spec-ml"]
    refits = np.array(out["ecf_refits"])
    lo, hi = refits.min(axis=0), refits.max(axis=0)
    th = np.array(out["ecf_fit"])
    assert np.max(np.abs(refits.mean(axis=0) - th)) < 0.02
    assert np.all((lo - 1e-12 <= th) & (th <= hi + 1e-12))
    assert np.mean([r["alpha"] for r in out["refits"]]) == pytest.approx(out["params"]["alpha"], abs=0.05)
