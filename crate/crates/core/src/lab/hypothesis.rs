use num_complex::Complex64;
use serde::Serialize;

use super::residual::{Normalization, ResidualGrid};
use crate::error::{LsdError, Result};
use crate::sieve::{primes_up_to, streamed_partial_sums, validate_grid, PrimePowerRule, SieveConfig};
use crate::sum::pairwise_sum;
use crate::ComplexValue;

/// `E_i = sum_{p <= x_i} f(p) log p - alpha x_i`, normalized by `x (log x)^{-A}`.
pub fn hypothesis_deviation(
    rule: &PrimePowerRule,
    alpha: ComplexValue,
    big_a: f64,
    grid: &[u64],
    cfg: &SieveConfig,
) -> Result<ResidualGrid> {
    validate_grid(grid)?;
    let x_max = *grid.last().unwrap();
    cfg.budget.check_stream(x_max)?;
    let primes = primes_up_to(x_max);
    let mut residuals = Vec::with_capacity(grid.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut start = 0usize;
    for &x in grid {
        let end = primes.partition_point(|&p| p <= x);
        let terms: Vec<ComplexValue> = primes[start..end]
            .iter()
            .map(|&p| rule.prime_value(p) * (p as f64).ln())
            .collect();
        acc += pairwise_sum(&terms);
        start = end;
        residuals.push(acc - alpha * x as f64);
    }
    ResidualGrid::new(grid.to_vec(), residuals, -big_a, Normalization::PerX)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sd0Report {
    /// Deviation of the prime sum from zero, normalized by `x (log x)^{-A}`.
    pub hypothesis: ResidualGrid,
    /// `sum_{n <= x_i} f(n)`, normalized by `x (log x)^{k-1-A}`.
    pub sums: ResidualGrid,
    pub bounded: bool,
    pub growth_slope: Option<f64>,
}

/// Checks `sum_{n <= x} f(n) << x (log x)^{k-1-A}` for a rule whose prime
/// values average to zero.
pub fn theorem_sd0_check(
    rule: &PrimePowerRule,
    alpha: ComplexValue,
    big_a: f64,
    k: f64,
    grid: &[u64],
    cfg: &SieveConfig,
) -> Result<Sd0Report> {
    if alpha.norm() != 0.0 {
        return Err(LsdError::AlphaNotZero(format!(
            "rule {} declared with alpha = {alpha}",
            rule.label
        )));
    }
    let hypothesis = hypothesis_deviation(rule, alpha, big_a, grid, cfg)?;
    if !hypothesis.is_bounded() {
        return Err(LsdError::HypothesisViolated(format!(
            "prime sums of {} do not vanish on average at rate (log x)^-{big_a} (growth slope {:.3})",
            rule.label,
            hypothesis.growth_slope().unwrap_or(f64::NAN)
        )));
    }
    let partial = streamed_partial_sums(rule, grid, cfg)?;
    let sums = ResidualGrid::new(grid.to_vec(), partial.sums, k - 1.0 - big_a, Normalization::PerX)?;
    let growth_slope = sums.growth_slope();
    Ok(Sd0Report {
        hypothesis,
        bounded: sums.is_bounded(),
        growth_slope,
        sums,
    })
}
