//! Multiplicative functions: prime-power rules, sieved value tables,
//! streamed partial sums and Dirichlet convolution.

mod convolution;
mod primes;
mod rule;
mod table;

pub use convolution::{
    dirichlet_convolve, extract_lambda_f, negated_tau_f_rule, remainder_r_f, remainder_rule,
    tau_f_rule,
};
pub use primes::{isqrt, primes_up_to};
pub use rule::{
    binomial_local_values, tau_k_local, ExponentFn, LocalFn, PrimeDeviationProfile,
    PrimePowerRule, RuleKind,
};
pub use table::{
    evaluate_at, sieve_window,
    sieve_multiplicative, streamed_partial_sums, streamed_sums_with, PartialSumCheckpoints,
    SievedTable,
};

use crate::error::{LsdError, Result};

/// Resource ceilings. Both are expressed as sizes so that exceeding them is
/// detected up front and deterministically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest dense table (number of entries).
    pub max_table_len: u64,
    /// Largest argument accepted by the streamed summations.
    pub max_stream_x: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_table_len: 1 << 26,
            max_stream_x: 1_000_000_000,
        }
    }
}

impl Budget {
    pub fn check_table(&self, len: u64) -> Result<()> {
        if len > self.max_table_len {
            return Err(LsdError::MemoryBudgetExceeded {
                requested: len,
                limit: self.max_table_len,
            });
        }
        Ok(())
    }

    pub fn check_stream(&self, x: u64) -> Result<()> {
        if x > self.max_stream_x {
            return Err(LsdError::TimeBudgetExceeded {
                requested: x,
                limit: self.max_stream_x,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Segment length for the factorization sieve; results never depend on it
    /// for dense tables, and streamed sums depend on it only through rounding.
    pub segment_len: usize,
    pub budget: Budget,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: 1 << 22,
            budget: Budget::default(),
        }
    }
}

/// Checks that a checkpoint grid is nonempty, positive and strictly increasing.
pub fn validate_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(LsdError::InvalidParameter("grid is empty".into()));
    }
    if grid[0] == 0 {
        return Err(LsdError::InvalidParameter("grid points must be >= 1".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LsdError::InvalidParameter(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Geometric grid `round(start * ratio^i)`, `i < count`, with duplicates rejected.
pub fn geometric_grid(start: f64, ratio: f64, count: usize) -> Result<Vec<u64>> {
    if !(start >= 1.0) || !(ratio > 1.0) || count == 0 {
        return Err(LsdError::InvalidParameter(format!(
            "geometric grid needs start >= 1, ratio > 1, count > 0 (got {start}, {ratio}, {count})"
        )));
    }
    let grid: Vec<u64> = (0..count)
        .map(|i| (start * ratio.powi(i as i32)).round() as u64)
        .collect();
    validate_grid(&grid)?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_rounds() {
        let g = geometric_grid(1e4, 10f64.powf(0.25), 13).unwrap();
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], 10_000);
        assert_eq!(g[4], 100_000);
        assert_eq!(*g.last().unwrap(), 10_000_000);
        assert!(geometric_grid(1.0, 1.01, 5).is_err());
    }

    #[test]
    fn budgets() {
        let b = Budget { max_table_len: 10, max_stream_x: 20 };
        assert!(b.check_table(10).is_ok());
        assert!(matches!(b.check_table(11), Err(LsdError::MemoryBudgetExceeded { .. })));
        assert!(matches!(b.check_stream(21), Err(LsdError::TimeBudgetExceeded { .. })));
    }
}
