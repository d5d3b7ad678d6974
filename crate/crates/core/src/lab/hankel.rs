use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LsdError, Result};
use crate::gamma::reciprocal_gamma;
use crate::quad::{integrate, integrate_panels, QuadOptions, QuadResult};
use crate::ComplexValue;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HankelParams {
    /// Abscissa of the vertical line, `c > 1`.
    pub c: f64,
    /// Truncation height; derived from `tail_target` when absent.
    pub t_max: Option<f64>,
    pub tail_target: f64,
}

impl Default for HankelParams {
    fn default() -> Self {
        HankelParams {
            c: 1.1,
            t_max: None,
            tail_target: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HankelReport {
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    /// Bound on the part of the line integral beyond `|t| > t_max`.
    pub tail_bound: f64,
    pub t_max: f64,
    pub quadrature_error: f64,
    /// Set when `Re z <= 1`, outside the range where the identity is stated.
    pub warned: bool,
}

/// Bound on both tails `|t| > T` of the line integral, after one integration
/// by parts against `x^{it}`:
/// `M T^{-(2 + Re z)} (1 + (2 + |z|) / (2 + Re z)) / (pi log x)` with
/// `M = x^{c+1} e^{pi |Im z| / 2}`, using `|A'(t)| <= (2 + |z|) |A(t)| / t`
/// for the amplitude `A(t) = x^{c+1} / (s (s+1) (s-1)^z)`.
fn tail_bound(z: ComplexValue, x: f64, c: f64, t: f64) -> f64 {
    let decay = 2.0 + z.re;
    tail_constant(z, x, c) * t.powf(-decay)
}

fn tail_constant(z: ComplexValue, x: f64, c: f64) -> f64 {
    let decay = 2.0 + z.re;
    let m = x.powf(c + 1.0) * (PI * z.im.abs() / 2.0).exp();
    m * (1.0 + (2.0 + z.norm()) / decay) / (PI * x.ln())
}

/// Compares the line integral
/// `(1/2 pi) int_{-T}^{T} x^{s+1} / (s (s+1) (s-1)^z) dt`, `s = c + it`,
/// with `(1/Gamma(z)) int_1^x (x - y) (log y)^{z-1} dy`.
pub fn hankel_check(z: ComplexValue, x: f64, params: &HankelParams) -> Result<HankelReport> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(LsdError::InvalidParameter(format!("hankel check needs x > 1, got {x}")));
    }
    if !(params.c > 1.0) {
        return Err(LsdError::InvalidParameter(format!("line abscissa c = {} must exceed 1", params.c)));
    }
    if !(z.re > 0.0) || !z.is_finite() {
        return Err(LsdError::InvalidParameter(format!("hankel check needs Re z > 0, got {z}")));
    }
    let warned = z.re <= 1.0;
    if warned {
        log::warn!("Re z = {} <= 1: the smoothed identity is only stated for Re z > 1", z.re);
    }
    let c = params.c;
    let log_x = x.ln();
    let t_max = match params.t_max {
        Some(t) if t > 0.0 => t,
        Some(t) => return Err(LsdError::InvalidParameter(format!("T = {t} must be positive"))),
        None => (tail_constant(z, x, c) / params.tail_target)
            .powf(1.0 / (2.0 + z.re))
            .max(10.0),
    };

    let integrand = |t: f64| {
        let s = Complex64::new(c, t);
        let num = ((s + 1.0) * log_x - z * (s - 1.0).ln()).exp();
        num / (s * (s + 1.0))
    };
    // fold t and -t onto [0, T]
    let folded = |t: f64| integrand(t) + integrand(-t);
    let opts = QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        max_intervals: 400,
    };
    let panel = (PI / log_x).min(2.0);
    let near = integrate(folded, 0.0, panel.min(t_max), opts)?;
    let far = if t_max > panel {
        integrate_panels(folded, panel, t_max, panel, opts)?
    } else {
        QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, intervals: 0 }
    };
    let lhs = (near.value + far.value) / (2.0 * PI);

    // v = w^2 in int_0^{log x} (x - e^v) v^{z-1} e^v dv
    let rhs_integrand = |w: f64| {
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let v = w * w;
        let ev = v.exp();
        ((2.0 * z - 1.0) * w.ln()).exp() * (2.0 * (x - ev) * ev)
    };
    let rhs_q = integrate(
        rhs_integrand,
        0.0,
        log_x.sqrt(),
        QuadOptions {
            rel_tol: 1e-14,
            abs_tol: 1e-16,
            max_intervals: 4000,
        },
    )?;
    let rhs = rhs_q.value * reciprocal_gamma(z);

    Ok(HankelReport {
        lhs,
        rhs,
        tail_bound: tail_bound(z, x, c, t_max),
        t_max,
        quadrature_error: (near.error + far.error) / (2.0 * PI) + rhs_q.error,
        warned,
    })
}
