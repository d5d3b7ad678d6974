//! Globally adaptive Gauss–Kronrod (7/15 point) quadrature for complex-valued
//! integrands of one real variable.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{LsdError, Result};
use crate::ComplexValue;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: ComplexValue,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: ComplexValue,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> ComplexValue>(f: &F, a: f64, b: f64) -> (ComplexValue, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).norm();
    (value, error)
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> ComplexValue,
{
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            intervals: 0,
        });
    }
    let (value, error) = kronrod(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= tol {
            break;
        }
        if heap.len() >= opts.max_intervals {
            if !total.is_finite() || total_err > 1e3 * tol.max(f64::MIN_POSITIVE) {
                return Err(LsdError::QuadratureNonConvergence {
                    error: total_err,
                    intervals: heap.len(),
                });
            }
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod(&f, worst.a, mid);
        let (v2, e2) = kronrod(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum in position order to shed the running-update rounding
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: ComplexValue = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum();
    if !value.is_finite() {
        return Err(LsdError::NonFinite("quadrature"));
    }
    Ok(QuadResult {
        value,
        error,
        intervals: segments.len(),
    })
}

/// Integrates over consecutive panels of `[a, b]` of width at most `panel`,
/// each adaptively. Suited to long oscillatory ranges.
pub fn integrate_panels<F>(f: F, a: f64, b: f64, panel: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> ComplexValue,
{
    let n = ((b - a) / panel).ceil().max(1.0) as usize;
    let width = (b - a) / n as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut intervals = 0;
    for i in 0..n {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n { b } else { a + width * (i + 1) as f64 };
        let r = integrate(&f, lo, hi, opts)?;
        value += r.value;
        error += r.error;
        intervals += r.intervals;
    }
    Ok(QuadResult { value, error, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| Complex64::new(x * x, 1.0), 0.0, 3.0, QuadOptions::default()).unwrap();
        assert!((r.value - Complex64::new(9.0, 3.0)).norm() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // int_0^1 x^{-1/2} dx = 2
        let opts = QuadOptions { rel_tol: 1e-10, abs_tol: 0.0, max_intervals: 10_000 };
        let r = integrate(|x| Complex64::new(x.powf(-0.5), 0.0), 0.0, 1.0, opts).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-8, "{:?}", r);
    }

    #[test]
    fn empty_interval_is_zero() {
        let r = integrate(|_| Complex64::new(1.0, 0.0), 2.0, 2.0, QuadOptions::default()).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn panels_handle_oscillation() {
        let r = integrate_panels(
            |t| Complex64::new(0.0, 5.0 * t).exp(),
            0.0,
            100.0,
            1.0,
            QuadOptions::default(),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, 500.0).exp() - 1.0) / Complex64::new(0.0, 5.0);
        assert!((r.value - exact).norm() < 1e-10);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let opts = QuadOptions { rel_tol: 1e-14, abs_tol: 0.0, max_intervals: 3 };
        let r = integrate(|x| Complex64::new((1.0 / x).sin() / x, 0.0), 1e-6, 1.0, opts);
        assert!(matches!(r, Err(LsdError::QuadratureNonConvergence { .. })));
    }
}
