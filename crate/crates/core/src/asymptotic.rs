//! Main terms of the mean-value expansion and the comparison function `g`.

use num_complex::Complex64;

use crate::coefficients::ExpansionCoefficients;
use crate::error::{LsdError, Result};
use crate::gamma::reciprocal_gamma;
use crate::quad::{integrate, QuadOptions};
use crate::sieve::{streamed_sums_with, PartialSumCheckpoints, PrimePowerRule, SieveConfig};
use crate::ComplexValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MainTermForm {
    /// `x sum_j c~_j (log x)^{alpha-j-1} / Gamma(alpha-j)`
    Point,
    /// `int_2^x sum_j c_j (log y)^{alpha-j-1} / Gamma(alpha-j) dy`
    Integral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MainTermSpec {
    pub coeffs: ExpansionCoefficients,
    pub form: MainTermForm,
}

impl MainTermSpec {
    pub fn evaluate(&self, x: f64) -> Result<ComplexValue> {
        match self.form {
            MainTermForm::Point => main_term_point(&self.coeffs, x),
            MainTermForm::Integral => main_term_integral(&self.coeffs, x),
        }
    }
}

impl ExpansionCoefficients {
    /// Keeps `c_0..c_J`, `c~_0..c~_J` only.
    pub fn truncated(&self, order_j: usize) -> ExpansionCoefficients {
        let keep = order_j.min(self.order_j) + 1;
        ExpansionCoefficients {
            order_j: keep - 1,
            c: self.c[..keep].to_vec(),
            c_tilde: self.c_tilde[..keep].to_vec(),
            tail_bounds: self.tail_bounds[..keep].to_vec(),
            ..self.clone()
        }
    }
}

/// `1/Gamma(alpha - j)` for `j = 0..=order_j`; zero where `alpha - j` is a pole.
fn reciprocal_gammas(alpha: ComplexValue, order_j: usize) -> Vec<ComplexValue> {
    (0..=order_j).map(|j| reciprocal_gamma(alpha - j as f64)).collect()
}

pub fn main_term_point(coeffs: &ExpansionCoefficients, x: f64) -> Result<ComplexValue> {
    if !(x > std::f64::consts::E) {
        return Err(LsdError::DomainTooSmall { x });
    }
    let log_x = x.ln();
    let log_log = log_x.ln();
    let alpha = coeffs.alpha;
    let rg = reciprocal_gammas(alpha, coeffs.order_j);
    let mut total = Complex64::new(0.0, 0.0);
    for (j, (ct, g)) in coeffs.c_tilde.iter().zip(&rg).enumerate() {
        if g.norm() == 0.0 {
            continue;
        }
        let power = ((alpha - (j as f64 + 1.0)) * log_log).exp();
        total += ct * power * g;
    }
    Ok(total * x)
}

/// The integral form, after substituting `u = log y`.
pub fn main_term_integral(coeffs: &ExpansionCoefficients, x: f64) -> Result<ComplexValue> {
    if !(x >= 2.0) {
        return Err(LsdError::InvalidParameter(format!(
            "integral main term needs x >= 2, got {x}"
        )));
    }
    let alpha = coeffs.alpha;
    let weights: Vec<(f64, ComplexValue)> = reciprocal_gammas(alpha, coeffs.order_j)
        .into_iter()
        .zip(&coeffs.c)
        .enumerate()
        .filter(|(_, (g, _))| g.norm() > 0.0)
        .map(|(j, (g, c))| (j as f64, c * g))
        .collect();
    let integrand = |u: f64| {
        let log_u = u.ln();
        let mut s = Complex64::new(0.0, 0.0);
        for &(j, w) in &weights {
            s += w * ((alpha - (j + 1.0)) * log_u).exp();
        }
        s * u.exp()
    };
    let opts = QuadOptions {
        rel_tol: 1e-10,
        abs_tol: 0.0,
        max_intervals: 2000,
    };
    Ok(integrate(integrand, 2f64.ln(), x.ln(), opts)?.value)
}

/// Precomputed evaluator for `g(y) = 1_{y>1} sum_j c_j (log y)^{alpha-1-j} / Gamma(alpha-j)`.
#[derive(Clone, Debug)]
pub struct ComparisonFunction {
    alpha: ComplexValue,
    weights: Vec<ComplexValue>,
}

impl ComparisonFunction {
    pub fn new(coeffs: &ExpansionCoefficients) -> Self {
        let weights = reciprocal_gammas(coeffs.alpha, coeffs.order_j)
            .into_iter()
            .zip(&coeffs.c)
            .map(|(g, c)| g * c)
            .collect();
        ComparisonFunction {
            alpha: coeffs.alpha,
            weights,
        }
    }

    pub fn eval(&self, y: f64) -> ComplexValue {
        if !(y > 1.0) {
            return Complex64::new(0.0, 0.0);
        }
        let log_y = y.ln();
        let base = ((self.alpha - 1.0) * log_y.ln()).exp();
        let inv = 1.0 / log_y;
        let mut scale = 1.0;
        let mut total = Complex64::new(0.0, 0.0);
        for w in &self.weights {
            total += w * scale;
            scale *= inv;
        }
        total * base
    }
}

pub fn comparison_g(coeffs: &ExpansionCoefficients, y: f64) -> ComplexValue {
    ComparisonFunction::new(coeffs).eval(y)
}

/// `sum_{n <= x_i} (f(n) - g(n))` at each checkpoint.
pub fn d_partial_sums(
    rule: &PrimePowerRule,
    coeffs: &ExpansionCoefficients,
    grid: &[u64],
    cfg: &SieveConfig,
) -> Result<PartialSumCheckpoints> {
    let g = ComparisonFunction::new(coeffs);
    streamed_sums_with(rule, grid, cfg, |n, f| f - g.eval(n as f64))
}
