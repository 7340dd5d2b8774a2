"""f-moment tests for Brownian structure and a self-normalized CLT harness."""

from .charfunc import CharFn, FcondReport, psi, psi_inverse, g_shift, verify_fcond
from .criterion import (
    CriterionConfig,
    CriterionReport,
    default_config,
    gaussian_variance_check,
    increment_moment,
    negligibility_profile,
    run_criterion,
    subsequence_criterion,
)
from .distributions import Dist, constant, discrete, normal, uniform
from .levy import (
    ProcessSpec,
    RestrictedCounterexample,
    brownian,
    compound_poisson,
    counterexample,
    sample_increment,
    sample_path,
    small_jump_variance,
)
from .mc import (
    EmpiricalSample,
    EstimateWithError,
    SeedSpec,
    draw_sample,
    empirical_char_fn,
    estimate_expectation,
    ks_distance,
)

__all__ = [
    "CharFn", "FcondReport", "psi", "psi_inverse", "g_shift", "verify_fcond",
    "CriterionConfig", "CriterionReport", "default_config",
    "gaussian_variance_check", "increment_moment", "negligibility_profile",
    "run_criterion", "subsequence_criterion",
    "Dist", "constant", "discrete", "normal", "uniform",
    "ProcessSpec", "RestrictedCounterexample", "brownian", "compound_poisson",
    "counterexample", "sample_increment", "sample_path", "small_jump_variance",
    "EmpiricalSample", "EstimateWithError", "SeedSpec", "draw_sample",
    "empirical_char_fn", "estimate_expectation", "ks_distance",
]

__version__ = "0.1.0"
