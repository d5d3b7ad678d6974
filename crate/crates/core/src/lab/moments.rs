use num_complex::Complex64;

use super::residual::{Normalization, ResidualGrid};
use crate::error::{LsdError, Result};
use crate::gamma::{nonpositive_integer_near, reciprocal_gamma};
use crate::sieve::{streamed_sums_with, PrimePowerRule, SieveConfig};
use crate::ComplexValue;

/// `1 / ((alpha + j) Gamma(alpha))`, read as `(-1)^j j!` at `alpha = -j`.
pub(crate) fn moment_constant(alpha: ComplexValue, j: u32) -> ComplexValue {
    let shifted = alpha + j as f64;
    if nonpositive_integer_near(alpha) == Some(-(j as i64)) || shifted.norm() == 0.0 {
        let fact: f64 = (1..=j).map(f64::from).product();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        return Complex64::new(sign * fact, 0.0);
    }
    reciprocal_gamma(alpha) / shifted
}

/// `E_i = sum_{m <= x_i} tau_alpha(m) (log m)^j / m - (log x_i)^{alpha+j} / ((alpha+j) Gamma(alpha))`,
/// normalized by `(log x)^{Re alpha + j - 1}`.
pub fn tau_log_moment_check(
    alpha: ComplexValue,
    j: u32,
    grid: &[u64],
    cfg: &SieveConfig,
) -> Result<ResidualGrid> {
    if grid.first().is_some_and(|&x| x < 2) {
        return Err(LsdError::InvalidParameter("moment grid must start at >= 2".into()));
    }
    let rule = PrimePowerRule::tau_alpha(alpha);
    let sums = streamed_sums_with(&rule, grid, cfg, |m, v| {
        let mf = m as f64;
        v * mf.ln().powi(j as i32) / mf
    })?;
    let k = moment_constant(alpha, j);
    let residuals = grid
        .iter()
        .zip(&sums.sums)
        .map(|(&x, s)| {
            let main = ((alpha + j as f64) * (x as f64).ln().ln()).exp() * k;
            s - main
        })
        .collect();
    ResidualGrid::new(grid.to_vec(), residuals, alpha.re + j as f64 - 1.0, Normalization::LogOnly)
}
