use serde::Serialize;

use super::residual::least_squares;
use crate::error::Result;
use crate::sieve::{primes_up_to, remainder_rule, streamed_sums_with, validate_grid, PrimePowerRule, SieveConfig};
use crate::sum::pairwise_sum;
use crate::Complex64;

/// Slope of probe (i) against `log log x` above which `k` is reported as
/// not matching the rule.
pub const K_MISMATCH_SLOPE: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub grid: Vec<u64>,
    pub k: f64,
    /// `sum_{p^nu <= x} |f(p^nu)| / p^nu - k log log x`.
    pub probe_i: Vec<f64>,
    /// `sum_{p <= x} |f(p)| log p / p`, divided by `log x`.
    pub probe_ii_prime: Vec<f64>,
    /// `sum_{p^nu <= x} |f(p^nu)|^2 / p^nu`, divided by `log x`.
    pub probe_ii_square: Vec<f64>,
    /// `log(sum_{n <= x} |R_f(n)|) / log x`.
    pub probe_iii: Vec<f64>,
    /// Slope of probe (i) against `log log x`.
    pub probe_i_slope: f64,
    pub k_mismatch: bool,
    /// Fitted exponent `1 - delta` of `sum_{n <= x} |R_f(n)|`.
    pub one_minus_delta: f64,
}

/// Probes of the averaged conditions: the mean of `|f|` over prime powers,
/// the `o(log x)` growth of the weighted prime sums, and the power saving
/// of `R_f`.
pub fn averaged_condition_probes(
    rule: &PrimePowerRule,
    k: f64,
    grid: &[u64],
    cfg: &SieveConfig,
) -> Result<ProbeReport> {
    validate_grid(grid)?;
    let x_max = *grid.last().unwrap();
    cfg.budget.check_stream(x_max)?;
    let primes = primes_up_to(x_max);

    // (q, |f(q)| / q, |f(q)|^2 / q, |f(p)| log p / p or 0)
    let mut powers: Vec<(u64, f64, f64, f64)> = Vec::new();
    for &p in &primes {
        let pf = p as f64;
        let mut q = p;
        let mut nu = 1u32;
        loop {
            let a = rule.value(p, nu).norm();
            let qf = q as f64;
            let prime_term = if nu == 1 { a * pf.ln() / pf } else { 0.0 };
            powers.push((q, a / qf, a * a / qf, prime_term));
            match q.checked_mul(p) {
                Some(next) if next <= x_max => {
                    q = next;
                    nu += 1;
                }
                _ => break,
            }
        }
    }
    powers.sort_by_key(|t| t.0);

    let mut probe_i = Vec::with_capacity(grid.len());
    let mut probe_ii_prime = Vec::with_capacity(grid.len());
    let mut probe_ii_square = Vec::with_capacity(grid.len());
    let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
    let mut start = 0usize;
    for &x in grid {
        let end = powers.partition_point(|t| t.0 <= x);
        let block = &powers[start..end];
        let col = |f: fn(&(u64, f64, f64, f64)) -> f64| {
            let v: Vec<Complex64> = block.iter().map(|t| Complex64::new(f(t), 0.0)).collect();
            pairwise_sum(&v).re
        };
        s1 += col(|t| t.1);
        s2 += col(|t| t.2);
        s3 += col(|t| t.3);
        start = end;
        let lx = (x as f64).ln();
        probe_i.push(s1 - k * lx.max(f64::MIN_POSITIVE).ln());
        probe_ii_prime.push(s3 / lx);
        probe_ii_square.push(s2 / lx);
    }

    let r = remainder_rule(rule);
    let abs_sums = streamed_sums_with(&r, grid, cfg, |_, v| Complex64::new(v.norm(), 0.0))?;
    let probe_iii: Vec<f64> = grid
        .iter()
        .zip(&abs_sums.sums)
        .map(|(&x, s)| if x > 1 { s.re.ln() / (x as f64).ln() } else { 0.0 })
        .collect();

    let fit_pts = |ys: &dyn Fn(usize) -> f64, xs: &dyn Fn(u64) -> f64| -> Vec<(f64, f64)> {
        grid.iter()
            .enumerate()
            .filter(|(_, &x)| x >= 3)
            .map(|(i, &x)| (xs(x), ys(i)))
            .collect()
    };
    let probe_i_slope = least_squares(&fit_pts(&|i| probe_i[i], &|x| (x as f64).ln().ln()))
        .map_or(0.0, |f| f.0);
    let one_minus_delta = least_squares(&fit_pts(&|i| abs_sums.sums[i].re.ln(), &|x| (x as f64).ln()))
        .map_or(0.0, |f| f.0);

    Ok(ProbeReport {
        grid: grid.to_vec(),
        k,
        probe_i,
        probe_ii_prime,
        probe_ii_square,
        probe_iii,
        probe_i_slope,
        k_mismatch: probe_i_slope.abs() > K_MISMATCH_SLOPE,
        one_minus_delta,
    })
}
