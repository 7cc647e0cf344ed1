import numpy as np
import pytest
from scipy import stats

from hrpot.blockmax import madogram_theta
from hrpot.core import SampleMatrix
from hrpot.errors import AccuracyNotReached, NotPositiveDefinite
from hrpot.hr_model import extremal_coefficient
from hrpot.margins import select_exceedances_component
from hrpot.simulate import (
    BrSampleConfig,
    br_sample,
    covariance_from_variogram,
    hr_sample_bivariate,
    mvn_sample,
    require_accuracy,
)
from hrpot.variogram import LocationSet, VariogramSpec


def test_mvn_standard():
    x = mvn_sample(np.zeros(3), np.eye(3), 0, size=10_000)
    for j in range(3):
        assert stats.kstest(x[:, j], "norm").pvalue > 0.01
    assert mvn_sample(np.zeros(2), np.eye(2), 0).shape == (2,)


def test_mvn_correlation():
    x = mvn_sample([1.0, -1.0], np.array([[4.0, 2], [2, 4]]), 1, size=100_000)
    assert abs(np.corrcoef(x.T)[0, 1] - 0.5) < 0.02
    np.testing.assert_allclose(x.mean(axis=0), [1, -1], atol=0.03)


def test_mvn_rejects_singular():
    with pytest.raises(NotPositiveDefinite):
        mvn_sample(np.zeros(2), np.array([[1.0, 1], [1, 1]]), 0)


def test_covariance_examples():
    spec = VariogramSpec(1.0, 1.0)
    half, cov = covariance_from_variogram(spec, LocationSet(np.array([0.0, 2.5])))
    assert cov[1, 1] == pytest.approx(2.5) and np.all(cov[0] == 0)
    np.testing.assert_allclose(half, [0.0, 1.25])
    _, cov = covariance_from_variogram(spec, LocationSet(np.array([0.0, 1.0, 2.0])))
    np.testing.assert_allclose(cov, [[0, 0, 0], [0, 1, 1], [0, 1, 2]])


def test_anchor_invariance():
    # simulate directly from the anchored representation with two anchors
    locs = LocationSet(np.array([0.0, 0.7, 2.0]))
    spec = VariogramSpec(1.0, 1.0)
    rng = np.random.default_rng(2)
    thetas = []
    for anchor in (0, 2):
        half, cov = covariance_from_variogram(spec, locs, anchor)
        keep = [i for i in range(3) if i != anchor]
        n, npts = 4000, 400
        u = -np.log(np.cumsum(rng.standard_exponential((n, npts)), axis=1))
        y = np.zeros((n, npts, 3))
        y[:, :, keep] = mvn_sample(np.zeros(2), cov[np.ix_(keep, keep)], rng, size=n * npts).reshape(n, npts, 2)
        xi = np.max(u[:, :, None] + y - half, axis=1)
        thetas.append(madogram_theta(SampleMatrix(xi, "gumbel"), (0, 2)))
    assert abs(thetas[0] - thetas[1]) < 0.06
    assert abs(thetas[0] - extremal_coefficient(0.5)) < 0.06


def test_single_location_is_gumbel():
    s = br_sample(BrSampleConfig(LocationSet(np.array([1.0])), VariogramSpec(), 10_000, 3))
    assert s.values.shape == (10_000, 1)
    assert stats.kstest(s.values[:, 0], "gumbel_r").pvalue > 0.01


# the anchored representation needs about exp(accuracy * sigma_max) points per draw
@pytest.mark.parametrize("method,dist", [("normalized", 4.0), ("anchored", 0.5)])
def test_two_sites_extremal_coefficient(method, dist):
    locs = LocationSet(np.array([0.0, dist]))
    s = br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1.0), 20_000, 4, method=method))
    assert abs(madogram_theta(s) - extremal_coefficient(dist / 4)) < 0.05
    for j in range(2):
        assert stats.kstest(s.values[:, j], "gumbel_r").pvalue > 0.001


def test_huge_range_is_complete_dependence():
    locs = LocationSet(np.array([0.0, 1.0, 2.0]))
    s = br_sample(BrSampleConfig(locs, VariogramSpec(1.0, 1e300), 2000, 5))
    assert np.all(s.values == s.values[:, :1])


def test_deterministic_seed():
    cfg = BrSampleConfig(LocationSet(np.array([0.0, 1.0, 3.0])), VariogramSpec(1.5, 1.0), 50, 6)
    assert np.array_equal(br_sample(cfg).values, br_sample(cfg).values)


def test_point_cap_is_reported():
    locs = LocationSet(np.array([0.0, 50.0]))
    cfg = BrSampleConfig(locs, VariogramSpec(1.0, 1.0), 20, 7, method="anchored", max_points=5)
    with pytest.warns(RuntimeWarning):
        _, info = br_sample(cfg, return_info=True)
    with pytest.raises(AccuracyNotReached):
        require_accuracy(info)


def test_hr_bivariate_examples(hr_half):
    s = hr_sample_bivariate(0.0, 100, 8)
    assert np.array_equal(s.values[:, 0], s.values[:, 1])
    p = np.mean(np.all(hr_half.values <= 0.0, axis=1))
    assert abs(p - np.exp(-extremal_coefficient(0.5))) < 0.01
    d = select_exceedances_component(hr_half, 0, 0.99).increments[:, 0]
    assert abs(d.mean() + 1) <= 0.15 and abs(d.var() - 2) <= 0.3
