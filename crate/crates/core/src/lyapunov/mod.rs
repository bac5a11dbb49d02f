//! Exact sums of Lyapunov exponents, pseudo-unitary spectrum checks and Monte-Carlo
//! estimation of individual exponents.

mod estimator;
mod formulas;

pub use estimator::{
    calibrate, estimate_exponents, neutral_isometry_probe, run_trial, trial_rng, Cocycle,
    EstimateParams, NeutralProbe, SpectrumReport, TrialOutcome, RESAMPLE_DIGITS, THREADS_ENV,
};
pub use formulas::{
    carea_from_orbit, carea_genus0, ekz_sum, local_term, rational_string, sum_lambda_cover,
    validate_pu_spectrum, PuVerdict, RationalSum, SumTag,
};
