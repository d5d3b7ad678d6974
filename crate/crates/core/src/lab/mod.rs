//! Numerical experiments built on the sieve and the expansion coefficients.

mod counterexample;
mod hankel;
mod hypothesis;
mod moments;
mod probes;
mod residual;

pub use counterexample::{
    counterexample_rule, optimality_scan, perturbation_g_check, OptimalityReport, PerturbationReport,
    ScanEntry, DEFAULT_EPS_SCAN, LAMBDA0_CUTOFF,
};
pub use hankel::{hankel_check, HankelParams, HankelReport};
pub use hypothesis::{hypothesis_deviation, theorem_sd0_check, Sd0Report};
pub use moments::tau_log_moment_check;
pub use probes::{averaged_condition_probes, ProbeReport};
pub use residual::{
    fit_error_exponent, ExponentFit, Normalization, ResidualGrid, BOUNDED_SLOPE, MIN_FIT_POINTS,
};
