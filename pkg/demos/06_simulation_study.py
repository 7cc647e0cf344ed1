"""
A small bivariate simulation study
==================================

Mean and spread of the estimated extremal coefficient for each estimator.
Set ``HRPOT_THREADS`` to cap the number of worker processes; results do not
depend on it.
"""
from hrpot.study import StudyConfig, run_bivariate_study, summarize_bivariate

cfg = StudyConfig(lambda_grid=[0.25, 0.5], n_grid=[500, 8000], repetitions=20, seed=0)
rows = run_bivariate_study(cfg)
print(f"{'lambda^2':>8} {'n':>5} {'estimator':>9} {'theta':>7} {'mean':>7} {'sd':>6}")
for s in sorted(summarize_bivariate(rows), key=lambda s: (s["lambda_sq_true"], s["n"], s["estimator"])):
    print(f"{s['lambda_sq_true']:>8} {s['n']:>5} {s['estimator']:>9} "
          f"{s['theta_true']:7.4f} {s['theta_mean']:7.4f} {s['theta_sd']:6.4f}")
