"""
Estimating a full parameter matrix
==================================

Five sites on a line with ``gamma(h) = |h|``. The true matrix is
``|t_i - t_j| / 4``.
"""
import numpy as np

from hrpot.increments import est_mv_mle, est_mv_var
from hrpot.margins import select_exceedances_component, select_exceedances_sum
from hrpot.simulate import BrSampleConfig, br_sample
from hrpot.spectral import est_spec_mv
from hrpot.variogram import LocationSet, VariogramSpec, lambda_of_variogram

np.set_printoptions(precision=3, suppress=True)
locs = LocationSet(np.linspace(0.0, 3.0, 5))
spec = VariogramSpec(alpha=1.0, s=1.0)
sample = br_sample(BrSampleConfig(locs, spec, n=8000, seed=2))
print("truth\n", lambda_of_variogram(spec, locs))

comp = select_exceedances_component(sample, pivot=0, spec=0.975)
var = est_mv_var(comp)
print("increment variance\n", var.estimate)
print("increment ML\n", est_mv_mle(comp, start=var.estimate).estimate)

# %%
# The spectral estimator uses points with a large L1 norm; start it from the
# moment estimate above.
exc = select_exceedances_sum(sample, 0.975)
rep = est_spec_mv(exc, start=var.estimate)
print("spectral ML\n", rep.estimate)
print("converged:", rep.diagnostics["converged"], " objective:", round(rep.diagnostics["objective"], 3))
