//! Taylor coefficients of `(s-1)^alpha F(s)` and `(s-1)^alpha F(s) / s` at
//! `s = 1`, computed from the Euler product through the factorisation
//!
//! ```text
//! (s-1)^alpha F(s) = [ prod_p F_p(s) (1 - p^{-s})^alpha ] * [ (s-1) zeta(s) ]^alpha
//! ```
//!
//! The first factor is handled prime by prime as a sum of logarithms; the
//! second comes from the stored Laurent data of zeta. `(s-1)^alpha` is never
//! formed on its own.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{LsdError, Result};
use crate::series::{
    complex_log1p, inverse_s_series, series_add, series_exp, series_log1p, series_mul, series_pow,
    zeta_shifted_series, TruncatedSeries,
};
use crate::sieve::{primes_up_to, PrimePowerRule, RuleKind};
use crate::ComplexValue;

/// Largest `J` accepted by [`compute_expansion`].
pub const MAX_J: usize = 10;
/// Smallest prime cutoff accepted by [`compute_expansion`].
pub const MIN_PRIME_CUTOFF: u64 = 100;
/// Local factors drop prime powers with `p^{-nu}` below this.
pub const LOCAL_TERM_FLOOR: f64 = 1e-17;

const PRIME_BLOCK: usize = 2048;
const ROUNDING_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCoefficients {
    pub alpha: ComplexValue,
    /// Highest coefficient index `J`.
    pub order_j: usize,
    pub c: Vec<ComplexValue>,
    pub c_tilde: Vec<ComplexValue>,
    pub prime_cutoff: u64,
    /// Bound on the effect of the primes beyond the cutoff, over all `c_j`
    /// and `c~_j`.
    pub tail_estimate: f64,
    /// Per-index bound for `c_j`.
    pub tail_bounds: Vec<f64>,
    /// Whether the large-prime contribution was added analytically.
    pub tail_corrected: bool,
}

impl ExpansionCoefficients {
    /// Assembles coefficients from a given `c`, deriving `c~` by
    /// `c~_j = sum_a (-1)^a c_{j-a}`.
    pub fn from_c(alpha: ComplexValue, c: Vec<ComplexValue>) -> Result<Self> {
        let q = TruncatedSeries::new(c)?;
        let c_tilde = series_mul(&q, &inverse_s_series(q.order())).into_coeffs();
        let order_j = q.order();
        Ok(ExpansionCoefficients {
            alpha,
            order_j,
            c: q.into_coeffs(),
            c_tilde,
            prime_cutoff: 0,
            tail_estimate: 0.0,
            tail_bounds: vec![0.0; order_j + 1],
            tail_corrected: false,
        })
    }

    /// Largest violation of the two linkage identities between `c` and `c~`.
    pub fn linkage_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..=self.order_j {
            let alt: ComplexValue = (0..=j)
                .map(|a| if a % 2 == 0 { self.c[j - a] } else { -self.c[j - a] })
                .sum();
            worst = worst.max((alt - self.c_tilde[j]).norm());
            let prev = if j == 0 { Complex64::new(0.0, 0.0) } else { self.c_tilde[j - 1] };
            worst = worst.max((self.c[j] - (self.c_tilde[j] + prev)).norm());
        }
        worst
    }
}

fn nu_max_for(p: u64) -> u32 {
    ((1.0 / LOCAL_TERM_FLOOR).ln() / (p as f64).ln()).floor().max(1.0) as u32
}

fn factorials(order: usize) -> Vec<f64> {
    let mut f = vec![1.0; order + 1];
    for j in 1..=order {
        f[j] = f[j - 1] * j as f64;
    }
    f
}

/// Taylor series in `t` of `log[F_p(1+t) (1 - p^{-(1+t)})^alpha]`.
pub fn local_factor_log_series(
    rule: &PrimePowerRule,
    p: u64,
    alpha: ComplexValue,
    order: usize,
) -> Result<TruncatedSeries> {
    let fact = factorials(order);
    local_log_with(rule, p, alpha, order, &fact)
}

fn local_log_with(
    rule: &PrimePowerRule,
    p: u64,
    alpha: ComplexValue,
    order: usize,
    fact: &[f64],
) -> Result<TruncatedSeries> {
    let lp = (p as f64).ln();
    let inv_p = 1.0 / p as f64;

    // 1 - p^{-(1+t)} - 1 = -p^{-1} exp(-t log p)
    let mut z = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut power = 1.0;
    for j in 0..=order {
        z[j] = Complex64::new(-inv_p * power / fact[j], 0.0);
        power *= -lp;
    }
    let log_z = series_log1p(&TruncatedSeries::from_vec_unchecked(z))?;

    if rule.is_binomial() {
        // F_p(s) = (1 - p^{-s})^{-beta_p}: the logarithm is (alpha - beta_p) log(1 - p^{-s})
        return Ok(log_z.scale(alpha - rule.prime_value(p)));
    }

    let nu_max = nu_max_for(p);
    let values = rule.local_values(p, nu_max);

    // F_p(1+t) - 1 = sum_{nu>=1} f(p^nu) p^{-nu} exp(-nu t log p)
    let mut w = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut p_pow = 1.0;
    for (nu, v) in values.iter().enumerate().skip(1) {
        p_pow *= inv_p;
        let base = v * p_pow;
        let step = -(nu as f64) * lp;
        let mut power = 1.0;
        for j in 0..=order {
            w[j] += base * (power / fact[j]);
            power *= step;
        }
    }
    let zeta_factor = (alpha * complex_log1p(Complex64::new(-inv_p, 0.0))).exp();
    let at_one = Complex64::new(1.0 + w[0].re, w[0].im) * zeta_factor;
    let distance = (at_one - 1.0).norm();
    if !(distance < 1.0) {
        return Err(LsdError::LocalFactorOutOfRange { p, distance });
    }

    let log_f = series_log1p(&TruncatedSeries::from_vec_unchecked(w))?;
    Ok(series_add(&log_f, &log_z.scale(alpha)))
}

/// `sum_{p <= P}` of the local log series, reduced block by block in prime order.
fn prime_log_sum(
    rule: &PrimePowerRule,
    primes: &[u64],
    alpha: ComplexValue,
    order: usize,
) -> Result<TruncatedSeries> {
    let fact = factorials(order);
    let blocks: Vec<Result<TruncatedSeries>> = primes
        .par_chunks(PRIME_BLOCK)
        .map(|block| {
            let mut acc = TruncatedSeries::zero(order);
            for &p in block {
                let l = local_log_with(rule, p, alpha, order, &fact)?;
                acc = series_add(&acc, &l);
            }
            Ok(acc)
        })
        .collect();
    let mut total = TruncatedSeries::zero(order);
    for b in blocks {
        total = series_add(&total, &b?);
    }
    Ok(total)
}

fn check_inputs(order_j: usize, prime_cutoff: u64) -> Result<()> {
    if order_j > MAX_J {
        return Err(LsdError::OrderTooLarge { order: order_j, max: MAX_J });
    }
    if prime_cutoff < MIN_PRIME_CUTOFF {
        return Err(LsdError::InvalidParameter(format!(
            "prime cutoff {prime_cutoff} is below {MIN_PRIME_CUTOFF}"
        )));
    }
    Ok(())
}

/// Coefficients `c_0..c_J`, `c~_0..c~_J` from the primes up to `prime_cutoff`,
/// with a bound on what the omitted primes could change.
pub fn compute_expansion(
    rule: &PrimePowerRule,
    alpha: ComplexValue,
    order_j: usize,
    prime_cutoff: u64,
) -> Result<ExpansionCoefficients> {
    check_inputs(order_j, prime_cutoff)?;
    let primes = primes_up_to(prime_cutoff);
    let log_sum = prime_log_sum(rule, &primes, alpha, order_j)?;
    let log_bounds = omitted_log_bounds(rule, &primes, alpha, order_j, prime_cutoff);
    assemble(alpha, order_j, prime_cutoff, log_sum, &log_bounds, false)
}

/// As [`compute_expansion`], but adds the primes beyond the cutoff through the
/// prime number theorem when the rule declares its large-prime behaviour
/// (`f(p) - alpha = amplitude (log p)^{-A}`). Rules without such a profile
/// fall back to the plain truncation.
pub fn compute_expansion_tail_corrected(
    rule: &PrimePowerRule,
    alpha: ComplexValue,
    order_j: usize,
    prime_cutoff: u64,
) -> Result<ExpansionCoefficients> {
    let profile = match rule.profile {
        Some(pr)
            if rule.is_binomial()
                && (pr.alpha - alpha).norm() <= 1e-15
                && prime_cutoff >= pr.from_prime =>
        {
            pr
        }
        _ => return compute_expansion(rule, alpha, order_j, prime_cutoff),
    };
    check_inputs(order_j, prime_cutoff)?;
    let a = profile.exponent;
    if order_j as f64 >= a && profile.amplitude.norm() > 0.0 {
        return Err(LsdError::InvalidParameter(format!(
            "J = {order_j} must be below A = {a}: higher coefficients do not exist"
        )));
    }
    let primes = primes_up_to(prime_cutoff);
    let mut log_sum = prime_log_sum(rule, &primes, alpha, order_j)?.into_coeffs();
    let lp = (prime_cutoff as f64).ln();
    let fact = factorials(order_j);
    let mut bounds = vec![0.0; order_j + 1];
    for j in 0..=order_j {
        let jf = j as f64;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        // sum_{p > P} amplitude (log p)^{-A} (-log p)^j / (p j!)
        //   ~ amplitude (-1)^j / j! * int_{log P}^inf u^{j-A-1} du
        log_sum[j] += profile.amplitude * (sign * lp.powf(jf - a) / (fact[j] * (a - jf)));
        // prime number theorem error, |theta(x) - x| <= sqrt(x) log^2 x / (8 pi)
        let pnt = profile.amplitude.norm() * 3.0 * lp.powf(jf - a + 1.0)
            / (8.0 * PI * (prime_cutoff as f64).sqrt() * fact[j]);
        bounds[j] = pnt + higher_power_bound(rule, alpha, j, prime_cutoff, &fact) + ROUNDING_FLOOR;
    }
    let log_sum = TruncatedSeries::from_vec_unchecked(log_sum);
    assemble(alpha, order_j, prime_cutoff, log_sum, &bounds, true)
}

fn assemble(
    alpha: ComplexValue,
    order_j: usize,
    prime_cutoff: u64,
    log_sum: TruncatedSeries,
    log_bounds: &[f64],
    tail_corrected: bool,
) -> Result<ExpansionCoefficients> {
    let euler = series_exp(&log_sum)?;
    let zeta_part = series_pow(&zeta_shifted_series(order_j)?, alpha)?;
    let q = series_mul(&euler, &zeta_part);
    let q_tilde = series_mul(&q, &inverse_s_series(order_j));
    let tail_bounds = propagate_bounds(q.coeffs(), log_bounds);
    let mut cumulative = 0.0;
    let mut tail_estimate: f64 = 0.0;
    for &b in &tail_bounds {
        cumulative += b;
        tail_estimate = tail_estimate.max(b).max(cumulative);
    }
    Ok(ExpansionCoefficients {
        alpha,
        order_j,
        c: q.into_coeffs(),
        c_tilde: q_tilde.into_coeffs(),
        prime_cutoff,
        tail_estimate,
        tail_bounds,
        tail_corrected,
    })
}

/// Majorant of `Q (exp(delta) - 1)` when every `|delta_j| <= bounds[j]`.
fn propagate_bounds(q: &[ComplexValue], bounds: &[f64]) -> Vec<f64> {
    let n = q.len();
    if bounds.iter().any(|b| !b.is_finite()) {
        return vec![f64::INFINITY; n];
    }
    // real exp recurrence on the majorant series
    let mut e = vec![0.0; n];
    e[0] = bounds[0].exp();
    for m in 1..n {
        e[m] = (1..=m).map(|k| k as f64 * bounds[k] * e[m - k]).sum::<f64>() / m as f64;
    }
    e[0] -= 1.0;
    (0..n)
        .map(|j| (0..=j).map(|i| q[j - i].norm() * e[i]).sum())
        .collect()
}

/// Bounds on the `t^j` coefficients of `sum_{p > P}` of the local log series.
fn omitted_log_bounds(
    rule: &PrimePowerRule,
    primes: &[u64],
    alpha: ComplexValue,
    order_j: usize,
    prime_cutoff: u64,
) -> Vec<f64> {
    let lp = (prime_cutoff as f64).ln();
    let fact = factorials(order_j);
    let k = rule.k_bound.unwrap_or_else(|| alpha.norm().max(1.0));
    let exact_on_primes = match &rule.kind {
        RuleKind::TauAlpha(b) => *b == alpha,
        RuleKind::SquarefreeIndicator => alpha == Complex64::new(1.0, 0.0),
        _ => false,
    };
    let prime_part: Vec<f64> = match rule.declared_a {
        _ if exact_on_primes => vec![0.0; order_j + 1],
        Some(a) => {
            // empirical hypothesis constant: |f(p) - alpha| <= C (log p)^{-A}
            let c = primes
                .iter()
                .map(|&p| (rule.prime_value(p) - alpha).norm() * (p as f64).ln().powf(a))
                .fold(0.0, f64::max);
            (0..=order_j)
                .map(|j| {
                    let jf = j as f64;
                    if c == 0.0 {
                        0.0
                    } else if jf >= a {
                        f64::INFINITY
                    } else {
                        // partial summation against Mertens' density 1/(p log p)
                        1.1 * c * lp.powf(jf - a) / ((a - jf) * fact[j])
                    }
                })
                .collect()
        }
        None => (0..=order_j)
            .map(|j| 2.0 * k * lp.powi(j as i32 - 1) / fact[j])
            .collect(),
    };
    prime_part
        .into_iter()
        .enumerate()
        .map(|(j, b)| b + higher_power_bound(rule, alpha, j, prime_cutoff, &fact) + ROUNDING_FLOOR)
        .collect()
}

/// Contribution of `p^{-nu s}`, `nu >= 2`, over `p > P`; the local log is
/// `O(K / p^2)` there with `K` depending on `k` and `|alpha|`.
fn higher_power_bound(
    rule: &PrimePowerRule,
    alpha: ComplexValue,
    j: usize,
    prime_cutoff: u64,
    fact: &[f64],
) -> f64 {
    let k = rule.k_bound.unwrap_or_else(|| alpha.norm().max(1.0));
    let big_k = 2.0 * ((k + 1.0).powi(2) + (alpha.norm() + 1.0).powi(2));
    let p = prime_cutoff as f64;
    let lp = p.ln();
    big_k * (2.0 * lp).powi(j as i32) / (fact[j] * p * lp)
}

/// `prod_{p <= P} (sum_nu f(p^nu) p^{-nu}) (1 - 1/p)^alpha`, multiplied out
/// directly.
pub fn c0_direct_product(rule: &PrimePowerRule, alpha: ComplexValue, prime_cutoff: u64) -> ComplexValue {
    let mut product = Complex64::new(1.0, 0.0);
    for p in primes_up_to(prime_cutoff) {
        let inv_p = 1.0 / p as f64;
        let values = rule.local_values(p, nu_max_for(p));
        let mut local = Complex64::new(0.0, 0.0);
        let mut weight = 1.0;
        for v in &values {
            local += v * weight;
            weight *= inv_p;
        }
        product *= local * (alpha * (-inv_p).ln_1p()).exp();
    }
    product
}
