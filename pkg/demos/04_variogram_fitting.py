"""
Fitting a Brown-Resnick variogram
=================================

Ten sites on ``[0, 3]``, ``gamma(h) = |h|``. Three fitting methods: least
squares on pairwise estimates, full spectral likelihood, and its pairwise
composite version.
"""
import numpy as np

from hrpot.fit import fit_br
from hrpot.simulate import BrSampleConfig, br_sample
from hrpot.variogram import LocationSet, VariogramSpec, ecf_curve

locs = LocationSet(np.linspace(0.0, 3.0, 10))
truth = VariogramSpec(1.0, 1.0)
sample = br_sample(BrSampleConfig(locs, truth, 8000, seed=7))

h = np.array([0.5, 1.0, 2.0, 3.0])
print("distance      ", h)
print("true ECF      ", np.round(ecf_curve(truth, h), 4))
for method in ("proj-ls", "spec-ml", "spec-cl"):
    rep = fit_br(sample, locs, method, q=0.975)
    p = rep.estimate
    print(f"{method:<8} alpha={p['alpha']:.3f} s={p['s']:.3f}  ECF", np.round(ecf_curve(rep.model, h), 4))
