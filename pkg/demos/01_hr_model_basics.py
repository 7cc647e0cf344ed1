"""
Hüsler-Reiss parameter matrices
===============================

A Hüsler-Reiss law is indexed by a matrix of pairwise parameters
``lambda^2_ij``. Not every nonnegative symmetric matrix is allowed; the
check is that the increment covariance ``Psi`` is positive definite.
"""
import numpy as np

from hrpot import hr_model as hr
from hrpot.errors import NotPositiveDefinite

lam = np.array([[0.0, 0.25, 0.5],
                [0.25, 0.0, 0.25],
                [0.5, 0.25, 0.0]])
psi = hr.psi_submatrix(lam)
print("Psi =\n", psi)
print("back again:\n", hr.lambda_of_sigma(psi))

# breaking the triangle-like inequality makes Psi singular
bad = np.array([[0, 1, 1], [1, 0, 4], [1, 4, 0.0]])
try:
    hr.psi_submatrix(bad)
except NotPositiveDefinite as exc:
    print("rejected:", exc)

# %%
# Bivariate summaries: the extremal coefficient runs from 1 (complete
# dependence) to 2 (independence).
for l2 in (0.0, 0.25, 1.0, 4.0, np.inf):
    print(f"lambda^2 = {l2:>5}: theta = {hr.extremal_coefficient(l2):.4f}")

# %%
# The distribution function on the diagonal is ``exp(-theta e^{-u})``.
u = 1.0
print(hr.hr_cdf_bivariate(u, u, 0.5), np.exp(-hr.extremal_coefficient(0.25) * np.exp(-u)))

# %%
# The spectral density lives on the simplex; its first moments are one.
w = np.array([[0.2, 0.3, 0.5], [0.6, 0.2, 0.2]])
print("log h(omega) =", hr.spectral_logdensity(w, lam))
