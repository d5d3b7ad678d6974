//! Fixed-order summation helpers shared by the streaming reducers.

use num_complex::Complex64;

use crate::ComplexValue;

const PAIRWISE_BASE: usize = 64;

/// Pairwise (cascade) summation with a fixed split pattern, so the rounding
/// depends only on the slice length.
pub fn pairwise_sum(values: &[ComplexValue]) -> ComplexValue {
    if values.len() <= PAIRWISE_BASE {
        return values.iter().fold(Complex64::new(0.0, 0.0), |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<_> = (1..=10_000).map(|n| Complex64::new(n as f64, -1.0)).collect();
        assert_eq!(pairwise_sum(&v), Complex64::new(50_005_000.0, -10_000.0));
        assert_eq!(pairwise_sum(&[]), Complex64::new(0.0, 0.0));
    }
}
