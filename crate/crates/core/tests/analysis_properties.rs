use std::f64::consts::{E, PI};

use lsdlab_core::lab::{
    counterexample_rule, fit_error_exponent, hankel_check, hypothesis_deviation, HankelParams,
    Normalization, ResidualGrid,
};
use lsdlab_core::quad::{integrate, QuadOptions};
use lsdlab_core::{
    c0_direct_product, compute_expansion, geometric_grid, reciprocal_gamma, Complex64,
    PrimePowerRule, SieveConfig,
};
use proptest::prelude::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

proptest! {
    #[test]
    fn reciprocal_gamma_functional_equation(re in -6.0f64..6.0, im in -4.0f64..4.0) {
        let z = Complex64::new(re, im);
        // 1/Gamma(z) = z / Gamma(z + 1)
        let lhs = reciprocal_gamma(z);
        let rhs = z * reciprocal_gamma(z + 1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn fit_recovers_planted_exponent(e in -4.0f64..1.0, scale in 0.01f64..100.0) {
        let grid: Vec<u64> = (0..12).map(|i| 1000u64 << i).collect();
        let res: Vec<Complex64> = grid
            .iter()
            .map(|&x| { let x = x as f64; c(scale * x * x.ln().powf(e)) })
            .collect();
        let r = ResidualGrid::new(grid, res, e, Normalization::PerX).unwrap();
        let fit = fit_error_exponent(&r).unwrap();
        prop_assert!((fit.slope - e).abs() <= 1e-9);
        prop_assert!((fit.intercept - scale.ln()).abs() <= 1e-8);
    }

    #[test]
    fn linkage_identities(re in 0.1f64..2.5, im in -1.0f64..1.0) {
        let alpha = Complex64::new(re, im);
        let e = compute_expansion(&PrimePowerRule::tau_alpha(alpha), alpha, 6, 1000).unwrap();
        prop_assert!(e.linkage_defect() <= 1e-12);
    }
}

#[test]
fn gamma_half_against_quadrature() {
    // Gamma(1/2) = 2 int_0^inf exp(-u^2) du
    let q = integrate(|u: f64| c(2.0 * (-u * u).exp()), 0.0, 40.0, QuadOptions { rel_tol: 1e-14, ..QuadOptions::default() })
        .unwrap();
    assert!((q.value.re - PI.sqrt()).abs() < 1e-13);
    assert!((reciprocal_gamma(c(0.5)) * q.value - c(1.0)).norm() < 1e-13);
}

#[test]
fn c0_routes_agree() {
    for (rule, alpha) in [
        (PrimePowerRule::tau_alpha(c(0.5)), c(0.5)),
        (PrimePowerRule::squarefree(), c(1.0)),
        (PrimePowerRule::squarefree(), c(0.7)),
        (counterexample_rule(c(1.0), 1.5, 0.25).unwrap(), c(1.0)),
    ] {
        let e = compute_expansion(&rule, alpha, 2, 100_000).unwrap();
        let direct = c0_direct_product(&rule, alpha, 100_000);
        assert!((e.c[0] - direct).norm() <= 1e-10_f64.max(1e-10 * direct.norm()), "{rule:?}");
    }
}

#[test]
fn tail_estimate_covers_cutoff_change() {
    let rule = PrimePowerRule::squarefree();
    let coarse = compute_expansion(&rule, c(0.9), 3, 10_000).unwrap();
    let fine = compute_expansion(&rule, c(0.9), 3, 1_000_000).unwrap();
    for j in 0..=3 {
        assert!((coarse.c[j] - fine.c[j]).norm() <= coarse.tail_bounds[j], "j={j}");
    }
}

#[test]
fn hankel_identity_on_the_documented_grid() {
    let p = HankelParams::default();
    for z in [c(0.5), c(2.0), Complex64::new(1.0, 1.0)] {
        for x in [2.0, E, 10.0] {
            let r = hankel_check(z, x, &p).unwrap();
            assert!((r.lhs - r.rhs).norm() <= 1e-6 + r.tail_bound, "z={z} x={x}: {r:?}");
            assert_eq!(r.warned, z.re <= 1.0);
        }
    }
}

#[test]
fn counterexample_satisfies_prime_hypothesis() {
    let grid = geometric_grid(1000.0, 2.0, 14).unwrap();
    let rule = counterexample_rule(c(1.0), 1.5, 0.5).unwrap();
    let r = hypothesis_deviation(&rule, c(1.0), 1.5, &grid, &SieveConfig::default()).unwrap();
    assert!(r.is_bounded(), "{:?}", r.normalized);
    assert!(r.normalized.iter().all(|&n| n < 5.0), "{:?}", r.normalized);
}
