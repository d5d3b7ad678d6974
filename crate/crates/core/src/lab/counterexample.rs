use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::residual::{fit_error_exponent, ExponentFit, Normalization, ResidualGrid};
use crate::asymptotic::main_term_point;
use crate::coefficients::{compute_expansion_tail_corrected, ExpansionCoefficients};
use crate::error::{LsdError, Result};
use crate::sieve::{
    dirichlet_convolve, sieve_multiplicative, streamed_partial_sums, validate_grid,
    PrimeDeviationProfile, PrimePowerRule, SieveConfig, SievedTable,
};
use crate::sum::pairwise_sum;
use crate::ComplexValue;

/// Values of `eps` tried by [`optimality_scan`].
pub const DEFAULT_EPS_SCAN: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
/// Truncation point of the series `sum_m g(m) / m` defining `lambda_0`.
pub const LAMBDA0_CUTOFF: usize = 1_000_000;

fn unit_direction(alpha: ComplexValue) -> ComplexValue {
    if alpha.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        alpha / alpha.norm()
    }
}

/// The rule with `beta_2 = alpha - e^{i theta} (1 - eps)` and
/// `beta_p = alpha - e^{i theta} (log 2 / log p)^A` for odd `p`, where
/// `theta = arg alpha`.
pub fn counterexample_rule(alpha: ComplexValue, big_a: f64, eps: f64) -> Result<PrimePowerRule> {
    if !alpha.is_finite() || !big_a.is_finite() {
        return Err(LsdError::NonFinite("counterexample parameters"));
    }
    let threshold = alpha.norm() - alpha.re;
    if !(big_a > threshold) {
        return Err(LsdError::HypothesisViolated(format!(
            "A = {big_a} must exceed |alpha| - Re alpha = {threshold}"
        )));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(LsdError::HypothesisViolated(format!("eps = {eps} must lie in [0, 1]")));
    }
    let dir = unit_direction(alpha);
    let log2 = 2f64.ln();
    let beta = Arc::new(move |p: u64| {
        if p == 2 {
            alpha - dir * (1.0 - eps)
        } else {
            alpha - dir * (log2 / (p as f64).ln()).powf(big_a)
        }
    });
    let profile = PrimeDeviationProfile {
        alpha,
        amplitude: -dir * log2.powf(big_a),
        exponent: big_a,
        from_prime: 3,
    };
    Ok(PrimePowerRule::binomial_local(
        format!("counterexample(alpha={alpha}, A={big_a}, eps={eps})"),
        beta,
    )
    .with_k_bound(alpha.norm().max(1.0))
    .with_declared_a(big_a)
    .with_profile(profile))
}

/// Dense table of `g = tau_{-alpha} * f` for the counterexample rule `f`.
pub fn perturbation_g_table(
    alpha: ComplexValue,
    big_a: f64,
    eps: f64,
    x_max: usize,
    cfg: &SieveConfig,
) -> Result<SievedTable> {
    let f = sieve_multiplicative(&counterexample_rule(alpha, big_a, eps)?, x_max, cfg)?;
    let t = sieve_multiplicative(&PrimePowerRule::tau_alpha(-alpha), x_max, cfg)?;
    dirichlet_convolve(&t, &f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbationReport {
    /// `E_i = sum_{n <= x_i} g(n) - lambda_0 x_i / (log x_i)^{A+1}`.
    pub residuals: ResidualGrid,
    pub sums: Vec<ComplexValue>,
    pub lambda0: ComplexValue,
    /// Estimate of the part of `lambda_0` beyond the truncation point.
    pub lambda0_tail: f64,
    /// `sum_{n <= x_i} g(n) / (lambda_0 x_i / (log x_i)^{A+1})`.
    pub ratios: Vec<ComplexValue>,
}

/// Checks the leading term `lambda_0 x / (log x)^{A+1}` of the partial sums
/// of `g = tau_{-alpha} * f`.
pub fn perturbation_g_check(
    alpha: ComplexValue,
    big_a: f64,
    eps: f64,
    grid: &[u64],
    cfg: &SieveConfig,
) -> Result<PerturbationReport> {
    validate_grid(grid)?;
    if grid[0] < 2 {
        return Err(LsdError::InvalidParameter("grid must start at >= 2".into()));
    }
    let x_max = (*grid.last().unwrap() as usize).max(LAMBDA0_CUTOFF);
    cfg.budget.check_stream(x_max as u64)?;
    let g = perturbation_g_table(alpha, big_a, eps, x_max, cfg)?;
    let m_cut = LAMBDA0_CUTOFF;
    let weighted: Vec<ComplexValue> = (1..=m_cut).map(|m| g.get(m) / m as f64).collect();
    let series = pairwise_sum(&weighted);
    let dir = unit_direction(alpha);
    let scale = 2f64.ln().powf(big_a);
    let lambda0 = -dir * scale * series;

    // |g| summed to M, against the expected decay x / (log x)^{A+1}
    let abs: Vec<Complex64> = (1..=m_cut).map(|m| Complex64::new(g.get(m).norm(), 0.0)).collect();
    let abs_sum = pairwise_sum(&abs).re;
    let lm = (m_cut as f64).ln();
    let constant = abs_sum * lm.powf(big_a + 1.0) / m_cut as f64;
    let lambda0_tail = scale * constant * lm.powf(-big_a) / big_a;

    let sums = g.prefix_sums(grid)?.sums;
    let mut residuals = Vec::with_capacity(grid.len());
    let mut ratios = Vec::with_capacity(grid.len());
    for (&x, s) in grid.iter().zip(&sums) {
        let xf = x as f64;
        let lead = lambda0 * xf / xf.ln().powf(big_a + 1.0);
        residuals.push(s - lead);
        ratios.push(s / lead);
    }
    Ok(PerturbationReport {
        residuals: ResidualGrid::new(grid.to_vec(), residuals, -(big_a + 2.0), Normalization::PerX)?,
        sums,
        lambda0,
        lambda0_tail,
        ratios,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanEntry {
    pub eps: f64,
    /// Mean of `E(x) / (x (log x)^{Re alpha - 1 - A})` over the last grid points.
    pub plateau: ComplexValue,
    pub residuals: ResidualGrid,
    pub sums: Vec<ComplexValue>,
    pub main: Vec<ComplexValue>,
    pub c0: ComplexValue,
    pub tail_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimalityReport {
    pub alpha: ComplexValue,
    pub big_a: f64,
    pub order_j: usize,
    pub entries: Vec<ScanEntry>,
    /// Index into `entries` of the largest `|plateau|`.
    pub best: usize,
    pub fit: ExponentFit,
}

/// Number of trailing grid points averaged into a plateau.
const PLATEAU_POINTS: usize = 3;

/// Scans `eps`, comparing partial sums of the counterexample rule with the
/// `J`-term main term, and fits the residual exponent of the `eps` whose
/// normalized residual settles furthest from zero.
#[allow(clippy::too_many_arguments)]
pub fn optimality_scan(
    alpha: ComplexValue,
    big_a: f64,
    eps_values: &[f64],
    order_j: usize,
    prime_cutoff: u64,
    grid: &[u64],
    fit_window: (u64, u64),
    cfg: &SieveConfig,
) -> Result<OptimalityReport> {
    if eps_values.is_empty() {
        return Err(LsdError::InvalidParameter("empty eps scan".into()));
    }
    validate_grid(grid)?;
    let e_target = alpha.re - 1.0 - big_a;
    let mut entries = Vec::with_capacity(eps_values.len());
    for &eps in eps_values {
        let rule = counterexample_rule(alpha, big_a, eps)?;
        let coeffs: ExpansionCoefficients =
            compute_expansion_tail_corrected(&rule, alpha, order_j, prime_cutoff)?;
        let sums = streamed_partial_sums(&rule, grid, cfg)?.sums;
        let main = grid
            .iter()
            .map(|&x| main_term_point(&coeffs, x as f64))
            .collect::<Result<Vec<_>>>()?;
        let resid: Vec<ComplexValue> = sums.iter().zip(&main).map(|(s, m)| s - m).collect();
        let tail = grid.len().min(PLATEAU_POINTS);
        let plateau = grid[grid.len() - tail..]
            .iter()
            .zip(&resid[grid.len() - tail..])
            .map(|(&x, e)| {
                let xf = x as f64;
                e / (xf * xf.ln().powf(e_target))
            })
            .sum::<ComplexValue>()
            / tail as f64;
        log::info!("eps = {eps}: plateau {plateau}");
        entries.push(ScanEntry {
            eps,
            plateau,
            residuals: ResidualGrid::new(grid.to_vec(), resid, e_target, Normalization::PerX)?,
            sums,
            main,
            c0: coeffs.c[0],
            tail_estimate: coeffs.tail_estimate,
        });
    }
    let best = entries
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.plateau.norm().total_cmp(&b.1.plateau.norm()))
        .map(|(i, _)| i)
        .unwrap();
    let fit = fit_error_exponent(&entries[best].residuals.window(fit_window.0, fit_window.1)?)?;
    Ok(OptimalityReport {
        alpha,
        big_a,
        order_j,
        entries,
        best,
        fit,
    })
}
