"""Peaks-over-threshold inference for Hüsler-Reiss and Brown-Resnick models."""

__version__ = "0.1.0"

from .core import EstimateReport, ExceedanceSet, SampleMatrix
from .errors import (
    AccuracyNotReached,
    BlockTooLarge,
    DegenerateColumn,
    HRPotError,
    MaxIterationsExceeded,
    NotPositiveDefinite,
    TooFewExceedances,
)
from .hr_model import (
    extremal_coefficient,
    hr_cdf_bivariate,
    hr_logdensity_bivariate,
    is_valid_parameter_matrix,
    lambda_of_sigma,
    psi_submatrix,
    spectral_logdensity,
)
from .margins import (
    ThresholdSpec,
    empirical_standardize,
    select_exceedances_component,
    select_exceedances_sum,
    select_exceedances_union,
    to_scale,
)
from .increments import est_biv_mean, est_biv_mle1, est_biv_mle2, est_biv_var, est_mv_mle, est_mv_var
from .spectral import est_spec_biv, est_spec_mv
from .blockmax import block_maxima, est_hr_blockml, est_madogram
from .variogram import LocationSet, VariogramSpec, ecf_curve, lambda_of_variogram
from .simulate import BrSampleConfig, br_sample, hr_sample_bivariate
from .fit import fit_br, fit_projection_ls, fit_spectral_cl, fit_spectral_ml
from .study import (
    ParametricConfig,
    StudyConfig,
    run_bivariate_study,
    run_fit_and_resimulate,
    run_parametric_study,
    summarize_bivariate,
    summarize_parametric,
)
