//! Partial sums of complex-valued multiplicative functions and the
//! Landau–Selberg–Delange expansion of their mean values.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`] for truncated complex Taylor series in `t = s - 1`;
//! * [`sieve`] for prime-power rules, sieved tables, streamed partial sums,
//!   Dirichlet convolution, `Lambda_f` and the `tau_f * R_f` split;
//! * [`coefficients`] for the expansion coefficients `c_j` and `c~_j`;
//! * [`asymptotic`] for main terms, the comparison function `g` and `d = f - g`;
//! * [`lab`] for experiments: hypothesis deviations, exponent fits, the
//!   Hankel identity, the optimality construction and averaged conditions;
//! * [`preset`] for named rules loadable from a TOML file.

pub mod asymptotic;
pub mod coefficients;
pub mod error;
pub mod gamma;
pub mod lab;
pub mod preset;
pub mod quad;
pub mod series;
pub mod sieve;
pub mod sum;

pub use num_complex::Complex64;

/// All values handled by the laboratory are complex doubles.
pub type ComplexValue = Complex64;

pub use asymptotic::{
    comparison_g, d_partial_sums, main_term_integral, main_term_point, MainTermForm, MainTermSpec,
};
pub use coefficients::{
    c0_direct_product, compute_expansion, compute_expansion_tail_corrected,
    local_factor_log_series, ExpansionCoefficients,
};
pub use error::{LsdError, Result};
pub use gamma::reciprocal_gamma;
pub use series::{
    inverse_s_series, series_add, series_exp, series_log, series_mul, series_pow,
    zeta_shifted_series, TruncatedSeries,
};
pub use sieve::{
    dirichlet_convolve, evaluate_at, extract_lambda_f, geometric_grid, negated_tau_f_rule, primes_up_to,
    remainder_r_f, remainder_rule, sieve_multiplicative, sieve_window, streamed_partial_sums, streamed_sums_with,
    tau_f_rule, validate_grid, Budget, PartialSumCheckpoints, PrimeDeviationProfile, PrimePowerRule,
    RuleKind, SieveConfig, SievedTable,
};
