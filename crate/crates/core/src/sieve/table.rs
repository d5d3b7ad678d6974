use num_complex::Complex64;
use rayon::prelude::*;

use super::primes::{isqrt, primes_up_to};
use super::{validate_grid, PrimePowerRule, SieveConfig};
use crate::error::{LsdError, Result};
use crate::sum::pairwise_sum;
use crate::ComplexValue;

/// Dense table of `f(n)` for `1 <= n <= x_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct SievedTable {
    // values[0] is an unused zero so that values[n] = f(n)
    values: Vec<ComplexValue>,
}

/// `sums[i] = sum_{n <= grid[i]} f(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSumCheckpoints {
    pub grid: Vec<u64>,
    pub sums: Vec<ComplexValue>,
}

impl SievedTable {
    /// Builds a table from `f(1), f(2), ...`.
    pub fn from_values(values: Vec<ComplexValue>) -> Result<Self> {
        if values.is_empty() {
            return Err(LsdError::InvalidParameter("empty table".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LsdError::NonFinite("table values"));
        }
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(Complex64::new(0.0, 0.0));
        v.extend(values);
        Ok(SievedTable { values: v })
    }

    pub(crate) fn from_padded(values: Vec<ComplexValue>) -> Self {
        debug_assert!(values.len() >= 2);
        SievedTable { values }
    }

    /// The identity `epsilon` of Dirichlet convolution.
    pub fn point_mass(x_max: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); x_max + 1];
        values[1] = Complex64::new(1.0, 0.0);
        SievedTable { values }
    }

    pub fn x_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> ComplexValue {
        self.values[n]
    }

    /// Values indexed by `n`; entry 0 is a placeholder zero.
    pub fn values(&self) -> &[ComplexValue] {
        &self.values
    }

    pub fn prefix_sums(&self, grid: &[u64]) -> Result<PartialSumCheckpoints> {
        validate_grid(grid)?;
        let last = *grid.last().unwrap();
        if last as usize > self.x_max() {
            return Err(LsdError::InvalidParameter(format!(
                "grid point {last} beyond table length {}",
                self.x_max()
            )));
        }
        let mut sums = Vec::with_capacity(grid.len());
        let mut acc = Complex64::new(0.0, 0.0);
        let mut start = 1usize;
        for &x in grid {
            acc += pairwise_sum(&self.values[start..=x as usize]);
            start = x as usize + 1;
            sums.push(acc);
        }
        Ok(PartialSumCheckpoints {
            grid: grid.to_vec(),
            sums,
        })
    }
}

/// Factorizes a contiguous segment by trial division with the primes up to
/// the square root of its upper end, writing `f(n)` for each entry.
pub(crate) struct SegmentFactorizer<'r> {
    rule: &'r PrimePowerRule,
    small: Vec<(u64, Vec<ComplexValue>)>,
}

impl<'r> SegmentFactorizer<'r> {
    pub(crate) fn new(rule: &'r PrimePowerRule, x_max: u64) -> Self {
        let small = primes_up_to(isqrt(x_max))
            .into_iter()
            .map(|p| {
                let mut max_nu = 0u32;
                let mut q = 1u64;
                while q <= x_max / p {
                    q *= p;
                    max_nu += 1;
                }
                (p, rule.local_values(p, max_nu))
            })
            .collect();
        SegmentFactorizer { rule, small }
    }

    /// Fills `out[i] = f(lo + i)`.
    pub(crate) fn fill(&self, lo: u64, out: &mut [ComplexValue]) {
        let hi = lo + out.len() as u64;
        let mut rem: Vec<u64> = (lo..hi).collect();
        out.fill(Complex64::new(1.0, 0.0));
        for (p, powers) in &self.small {
            let p = *p;
            if p * p > hi - 1 {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m < hi {
                let i = (m - lo) as usize;
                let mut r = rem[i] / p;
                let mut nu = 1usize;
                while r % p == 0 {
                    r /= p;
                    nu += 1;
                }
                rem[i] = r;
                out[i] *= powers[nu];
                m += p;
            }
        }
        for (v, &r) in out.iter_mut().zip(&rem) {
            if r > 1 {
                *v *= self.rule.prime_value(r);
            }
        }
    }
}

/// `f(n)` for `lo <= n <= hi` through the segment sieve, without a table
/// from 1.
pub fn sieve_window(rule: &PrimePowerRule, lo: u64, hi: u64) -> Result<Vec<ComplexValue>> {
    if lo == 0 || hi < lo {
        return Err(LsdError::InvalidParameter(format!("bad window [{lo}, {hi}]")));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    SegmentFactorizer::new(rule, hi).fill(lo, &mut out);
    Ok(out)
}

/// `f(n)` by factorizing `n` on its own with trial division.
pub fn evaluate_at(rule: &PrimePowerRule, n: u64) -> ComplexValue {
    let mut value = Complex64::new(1.0, 0.0);
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut nu = 0;
            while m % d == 0 {
                m /= d;
                nu += 1;
            }
            value *= rule.value(d, nu);
        }
        d += 1;
    }
    if m > 1 {
        value *= rule.value(m, 1);
    }
    value
}

/// Dense table of `f(n)`, `n <= x_max`.
pub fn sieve_multiplicative(
    rule: &PrimePowerRule,
    x_max: usize,
    cfg: &SieveConfig,
) -> Result<SievedTable> {
    if x_max == 0 {
        return Err(LsdError::InvalidParameter("x_max must be >= 1".into()));
    }
    cfg.budget.check_table(x_max as u64)?;
    let factorizer = SegmentFactorizer::new(rule, x_max as u64);
    let mut values = vec![Complex64::new(0.0, 0.0); x_max + 1];
    values[1..]
        .par_chunks_mut(cfg.segment_len.max(1))
        .enumerate()
        .for_each(|(s, chunk)| {
            let lo = 1 + (s * cfg.segment_len.max(1)) as u64;
            factorizer.fill(lo, chunk);
        });
    if values.iter().any(|v| !v.is_finite()) {
        return Err(LsdError::NonFinite("sieved values"));
    }
    Ok(SievedTable { values })
}

/// `sum_{n <= x_i} f(n)` without retaining a full table.
pub fn streamed_partial_sums(
    rule: &PrimePowerRule,
    grid: &[u64],
    cfg: &SieveConfig,
) -> Result<PartialSumCheckpoints> {
    streamed_sums_with(rule, grid, cfg, |_, v| v)
}

/// `sum_{n <= x_i} weight(n, f(n))`.
///
/// Segments are reduced independently (pairwise within each piece) and then
/// combined in segment order, so the result does not depend on the number of
/// worker threads.
pub fn streamed_sums_with<W>(
    rule: &PrimePowerRule,
    grid: &[u64],
    cfg: &SieveConfig,
    weight: W,
) -> Result<PartialSumCheckpoints>
where
    W: Fn(u64, ComplexValue) -> ComplexValue + Sync,
{
    validate_grid(grid)?;
    let x = *grid.last().unwrap();
    cfg.budget.check_stream(x)?;
    let seg = cfg.segment_len.max(1) as u64;
    let factorizer = SegmentFactorizer::new(rule, x);
    let n_segments = x.div_ceil(seg);

    let pieces: Vec<Vec<ComplexValue>> = (0..n_segments)
        .into_par_iter()
        .map(|s| {
            let lo = 1 + s * seg;
            let hi = (lo + seg).min(x + 1);
            let mut buf = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize];
            factorizer.fill(lo, &mut buf);
            for (i, v) in buf.iter_mut().enumerate() {
                *v = weight(lo + i as u64, *v);
            }
            // split after every checkpoint falling inside [lo, hi)
            let mut out = Vec::new();
            let mut start = 0usize;
            let first = grid.partition_point(|&g| g < lo);
            for &g in grid[first..].iter().take_while(|&&g| g < hi) {
                let end = (g - lo + 1) as usize;
                out.push(pairwise_sum(&buf[start..end]));
                start = end;
            }
            out.push(pairwise_sum(&buf[start..]));
            out
        })
        .collect();

    let mut sums = Vec::with_capacity(grid.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for seg_pieces in pieces {
        let last = seg_pieces.len() - 1;
        for (j, piece) in seg_pieces.into_iter().enumerate() {
            acc += piece;
            if j < last {
                sums.push(acc);
            }
        }
    }
    // the final grid point closes the last segment exactly
    if sums.len() < grid.len() {
        sums.push(acc);
    }
    debug_assert_eq!(sums.len(), grid.len());
    if sums.iter().any(|s| !s.is_finite()) {
        return Err(LsdError::NonFinite("streamed sums"));
    }
    Ok(PartialSumCheckpoints {
        grid: grid.to_vec(),
        sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::Budget;

    fn small_cfg(seg: usize) -> SieveConfig {
        SieveConfig { segment_len: seg, budget: Budget::default() }
    }

    fn divisor_count(n: usize) -> usize {
        (1..=n).filter(|d| n % d == 0).count()
    }

    #[test]
    fn tau_one_is_all_ones() {
        let t = sieve_multiplicative(&PrimePowerRule::tau_alpha(Complex64::new(1.0, 0.0)), 10, &SieveConfig::default()).unwrap();
        assert!(t.values()[1..].iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn tau_two_at_twelve() {
        let t = sieve_multiplicative(&PrimePowerRule::tau_alpha(Complex64::new(2.0, 0.0)), 100, &small_cfg(7)).unwrap();
        assert_eq!(t.get(12), Complex64::new(6.0, 0.0));
        for n in 1..=100 {
            assert_eq!(t.get(n).re as usize, divisor_count(n));
        }
    }

    #[test]
    fn tau_half_small_values() {
        let t = sieve_multiplicative(&PrimePowerRule::tau_alpha(Complex64::new(0.5, 0.0)), 16, &SieveConfig::default()).unwrap();
        assert_eq!(t.get(2).re, 0.5);
        assert_eq!(t.get(4).re, 0.375);
        assert_eq!(t.get(6).re, 0.25);
    }

    #[test]
    fn segment_length_does_not_change_tables() {
        let rule = PrimePowerRule::tau_alpha(Complex64::new(0.3, 0.7));
        let a = sieve_multiplicative(&rule, 5000, &small_cfg(5000)).unwrap();
        let b = sieve_multiplicative(&rule, 5000, &small_cfg(97)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn streamed_examples() {
        let one = PrimePowerRule::tau_alpha(Complex64::new(1.0, 0.0));
        let s = streamed_partial_sums(&one, &[10, 100], &small_cfg(16)).unwrap();
        assert_eq!(s.sums, vec![Complex64::new(10.0, 0.0), Complex64::new(100.0, 0.0)]);

        let sq = streamed_partial_sums(&PrimePowerRule::squarefree(), &[100], &SieveConfig::default()).unwrap();
        let oracle = (1..=100u64)
            .filter(|n| (2..=10u64).all(|d| n % (d * d) != 0))
            .count();
        assert_eq!(oracle, 61);
        assert_eq!(sq.sums[0].re, 61.0);

        let two = PrimePowerRule::tau_alpha(Complex64::new(2.0, 0.0));
        let s = streamed_partial_sums(&two, &[1000], &small_cfg(33)).unwrap();
        let harmonic: u64 = (1..=1000u64).map(|d| 1000 / d).sum();
        assert_eq!(s.sums[0].re, harmonic as f64);
    }

    #[test]
    fn grid_point_on_segment_boundary() {
        let one = PrimePowerRule::tau_alpha(Complex64::new(1.0, 0.0));
        let s = streamed_partial_sums(&one, &[1, 8, 9, 16, 17], &small_cfg(8)).unwrap();
        let got: Vec<f64> = s.sums.iter().map(|c| c.re).collect();
        assert_eq!(got, vec![1.0, 8.0, 9.0, 16.0, 17.0]);
    }

    #[test]
    fn budget_errors() {
        let cfg = SieveConfig { segment_len: 16, budget: Budget { max_table_len: 100, max_stream_x: 200 } };
        let one = PrimePowerRule::tau_alpha(Complex64::new(1.0, 0.0));
        assert!(matches!(sieve_multiplicative(&one, 101, &cfg), Err(LsdError::MemoryBudgetExceeded { .. })));
        assert!(matches!(streamed_partial_sums(&one, &[201], &cfg), Err(LsdError::TimeBudgetExceeded { .. })));
        assert!(streamed_partial_sums(&one, &[5, 5], &cfg).is_err());
    }

    #[test]
    fn window_matches_single_point_factorization() {
        let rule = PrimePowerRule::tau_alpha(Complex64::new(0.5, -0.25));
        let lo = 999_000_000_000u64;
        let w = sieve_window(&rule, lo, lo + 200).unwrap();
        for (i, v) in w.iter().enumerate() {
            assert!((v - evaluate_at(&rule, lo + i as u64)).norm() < 1e-13);
        }
        assert!(sieve_window(&rule, 0, 3).is_err());
    }
}
