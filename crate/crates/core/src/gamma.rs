//! The reciprocal Gamma function on the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::ComplexValue;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance from a nonpositive integer below which `1/Gamma` is snapped to zero.
pub const POLE_SNAP: f64 = 1e-13;

/// `log Gamma(z)` for `Re z >= 1/2` (Lanczos, principal branch of the pieces).
fn ln_gamma_right(z: ComplexValue) -> ComplexValue {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Returns the nonpositive integer `z` is within [`POLE_SNAP`] of, if any.
pub fn nonpositive_integer_near(z: ComplexValue) -> Option<i64> {
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() < POLE_SNAP && z.im.abs() < POLE_SNAP {
        Some(r as i64)
    } else {
        None
    }
}

/// The entire function `1/Gamma(z)`, exactly zero at `0, -1, -2, ...`.
pub fn reciprocal_gamma(z: ComplexValue) -> ComplexValue {
    if nonpositive_integer_near(z).is_some() {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    }
}

/// `Gamma(z)`; infinite at the poles.
pub fn gamma(z: ComplexValue) -> ComplexValue {
    let r = reciprocal_gamma(z);
    if r.norm() == 0.0 {
        Complex64::new(f64::INFINITY, 0.0)
    } else {
        1.0 / r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn special_values() {
        assert!((reciprocal_gamma(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((reciprocal_gamma(c(5.0, 0.0)) - c(1.0 / 24.0, 0.0)).norm() < 1e-16);
        assert_eq!(reciprocal_gamma(c(0.0, 0.0)), c(0.0, 0.0));
        for n in 1..20 {
            assert_eq!(reciprocal_gamma(c(-(n as f64), 0.0)), c(0.0, 0.0));
        }
        assert_eq!(reciprocal_gamma(c(-3.0 + 1e-14, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn half_integer_values() {
        let inv_sqrt_pi = 1.0 / PI.sqrt();
        assert!((reciprocal_gamma(c(0.5, 0.0)).re - inv_sqrt_pi).abs() < 1e-15);
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!((reciprocal_gamma(c(-0.5, 0.0)).re + 0.5 * inv_sqrt_pi).abs() < 1e-15);
    }

    #[test]
    fn near_pole_is_small_but_nonzero() {
        let r = reciprocal_gamma(c(-2.0 + 1e-6, 0.0));
        // residue of Gamma at -2 is 1/2, so 1/Gamma ~ 2 * 1e-6
        assert!((r.re - 2e-6).abs() < 1e-11, "{r}");
    }

    #[test]
    fn gamma_of_i_matches_reference() {
        // Gamma(i) = -0.15494982830181069 - 0.49801566811835604 i
        let g = gamma(c(0.0, 1.0));
        assert!((g - c(-0.154_949_828_301_810_7, -0.498_015_668_118_356)).norm() < 1e-14);
    }
}
