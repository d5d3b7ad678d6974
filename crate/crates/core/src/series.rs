//! Truncated complex power series in `t = s - 1`.
//!
//! All arithmetic is closed at a fixed order: combining two series yields a
//! series whose order is the smaller of the operand orders. Logarithms and
//! powers use the principal branch.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{LsdError, Result};
use crate::ComplexValue;

/// Largest order accepted by the constructors.
pub const MAX_ORDER: usize = 12;

/// Stieltjes constants `gamma_0 .. gamma_9` from the Laurent expansion of the
/// Riemann zeta function at `s = 1`.
pub const STIELTJES: [f64; 10] = [
    0.577_215_664_901_532_9,
    -0.072_815_845_483_676_72,
    -0.009_690_363_192_872_318,
    0.002_053_834_420_303_346,
    0.002_325_370_065_467_300,
    0.000_793_323_817_301_062_7,
    -0.000_238_769_345_430_199_6,
    -0.000_527_289_567_057_751_0,
    -0.000_352_123_353_803_039_5,
    -0.000_034_394_774_418_088_05,
];

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<ComplexValue>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<ComplexValue>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LsdError::InvalidParameter(
                "a series needs at least one coefficient".into(),
            ));
        }
        if coeffs.len() > MAX_ORDER + 1 {
            return Err(LsdError::OrderTooLarge {
                order: coeffs.len() - 1,
                max: MAX_ORDER,
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(LsdError::NonFinite("series coefficients"));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(value: ComplexValue, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(Complex64::new(0.0, 0.0), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// Builds a series without validation; callers guarantee the invariants.
    pub(crate) fn from_vec_unchecked(coeffs: Vec<ComplexValue>) -> Self {
        debug_assert!(!coeffs.is_empty());
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ComplexValue> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> ComplexValue {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        TruncatedSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn scale(&self, w: ComplexValue) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * w).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Largest coefficient-wise distance to `other` over the shared order.
    pub fn max_abs_diff(&self, other: &TruncatedSeries) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn checked(self, what: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(LsdError::NonFinite(what))
        }
    }
}

pub fn series_add(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let n = a.order().min(b.order()) + 1;
    TruncatedSeries {
        coeffs: (0..n).map(|j| a.coeffs[j] + b.coeffs[j]).collect(),
    }
}

/// Cauchy product truncated at the smaller order.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let n = a.order().min(b.order()) + 1;
    let coeffs = (0..n)
        .map(|j| (0..=j).map(|i| a.coeffs[i] * b.coeffs[j - i]).sum())
        .collect();
    TruncatedSeries { coeffs }
}

/// Principal-branch logarithm.
pub fn series_log(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    let a0 = a.coeffs[0];
    if a0.norm() == 0.0 {
        return Err(LsdError::ZeroConstantTerm);
    }
    if a0.im == 0.0 && a0.re < 0.0 {
        log::warn!("series_log: constant term {a0} lies on the branch cut; using the principal branch");
    }
    log_with_constant(a, a0.ln())
}

/// `log(1 + w)` with the constant term evaluated without cancellation, for
/// series whose constant term is close to zero.
pub(crate) fn series_log1p(w: &TruncatedSeries) -> Result<TruncatedSeries> {
    let w0 = w.coeffs[0];
    let one_plus = Complex64::new(1.0 + w0.re, w0.im);
    if one_plus.norm() == 0.0 {
        return Err(LsdError::ZeroConstantTerm);
    }
    let mut a = w.clone();
    a.coeffs[0] = one_plus;
    log_with_constant(&a, complex_log1p(w0))
}

fn log_with_constant(a: &TruncatedSeries, b0: ComplexValue) -> Result<TruncatedSeries> {
    // a * b' = a'  =>  n a_0 b_n = n a_n - sum_{k=1}^{n-1} k b_k a_{n-k}
    let n = a.coeffs.len();
    let a0 = a.coeffs[0];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    b[0] = b0;
    for m in 1..n {
        let mut acc = a.coeffs[m] * m as f64;
        for k in 1..m {
            acc -= b[k] * a.coeffs[m - k] * k as f64;
        }
        b[m] = acc / (a0 * m as f64);
    }
    TruncatedSeries { coeffs: b }.checked("series_log")
}

/// Formal exponential.
pub fn series_exp(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    // b' = a' b  =>  n b_n = sum_{k=1}^{n} k a_k b_{n-k}
    let n = a.coeffs.len();
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    b[0] = a.coeffs[0].exp();
    for m in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=m {
            acc += a.coeffs[k] * b[m - k] * k as f64;
        }
        b[m] = acc / m as f64;
    }
    TruncatedSeries { coeffs: b }.checked("series_exp")
}

/// `a^w = exp(w log a)` on the principal branch.
pub fn series_pow(a: &TruncatedSeries, w: ComplexValue) -> Result<TruncatedSeries> {
    let log_a = series_log(a)?;
    series_exp(&log_a.scale(w))
}

/// Taylor series of `(s - 1) zeta(s)` about `s = 1`.
pub fn zeta_shifted_series(order: usize) -> Result<TruncatedSeries> {
    if order > STIELTJES.len() {
        return Err(LsdError::OrderTooLarge {
            order,
            max: STIELTJES.len(),
        });
    }
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut factorial = 1.0;
    for (n, &gamma) in STIELTJES.iter().enumerate().take(order) {
        if n > 0 {
            factorial *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(Complex64::new(sign * gamma / factorial, 0.0));
    }
    Ok(TruncatedSeries { coeffs })
}

/// Taylor series of `1/s` about `s = 1`: `1 - t + t^2 - ...`.
pub fn inverse_s_series(order: usize) -> TruncatedSeries {
    TruncatedSeries {
        coeffs: (0..=order)
            .map(|j| Complex64::new(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect(),
    }
}

/// Principal `log(1 + w)` accurate for small `w`.
pub(crate) fn complex_log1p(w: ComplexValue) -> ComplexValue {
    let re = 0.5 * (w.re * (2.0 + w.re) + w.im * w.im).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        series_add(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        series_mul(self, rhs)
    }
}
