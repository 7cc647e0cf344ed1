"""
Bivariate estimators on one sample
==================================

Draw a bivariate HR sample, then compare the five peaks-over-threshold
estimators with the two block-maxima baselines.
"""
from hrpot import blockmax, increments, margins, spectral
from hrpot.hr_model import extremal_coefficient
from hrpot.simulate import hr_sample_bivariate

truth = 0.5
sample = hr_sample_bivariate(truth, 8000, rng=4)
q = 0.975

# margins are unknown in practice, so standardise by ranks
expo = margins.empirical_standardize(sample, "exponential")
frechet = margins.empirical_standardize(sample, "frechet")

comp = margins.select_exceedances_component(expo, pivot=0, spec=q)
union = margins.select_exceedances_union(expo, q)
l1 = margins.select_exceedances_sum(frechet, q)

reports = [
    increments.est_biv_mle1(comp),
    increments.est_biv_mle2(union),
    increments.est_biv_var(comp),
    increments.est_biv_mean(comp),
    spectral.est_spec_biv(l1),
]
maxima = blockmax.block_maxima(sample, 150)
reports += [blockmax.est_madogram(maxima), blockmax.est_hr_blockml(maxima)]

print(f"true lambda^2 = {truth}, theta = {extremal_coefficient(truth):.4f}")
for r in reports:
    print(f"{r.estimator:>9}: lambda^2 = {r.estimate:.4f}  theta = {extremal_coefficient(r.estimate):.4f}"
          f"  (N = {r.n_exceedances})")
