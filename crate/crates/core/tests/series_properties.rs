use lsdlab_core::series::STIELTJES;
use lsdlab_core::{
    series_exp, series_log, series_mul, series_pow, zeta_shifted_series, Complex64, TruncatedSeries,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Series with constant term in a disc around 1 and bounded higher terms.
fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    (
        (0.5f64..1.5, -0.5f64..0.5),
        proptest::collection::vec(complex(), order),
    )
        .prop_map(|((re, im), rest)| {
            let mut c = vec![Complex64::new(re, im)];
            c.extend(rest);
            TruncatedSeries::new(c).unwrap()
        })
}

proptest! {
    #[test]
    fn exp_log_round_trip(a in series(10)) {
        let back = series_exp(&series_log(&a).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-12, "{}", back.max_abs_diff(&a));
    }

    #[test]
    fn pow_matches_repeated_product(a in series(8), n in 1u32..5) {
        let mut prod = TruncatedSeries::one(8);
        for _ in 0..n {
            prod = series_mul(&prod, &a);
        }
        let p = series_pow(&a, Complex64::new(n as f64, 0.0)).unwrap();
        prop_assert!(p.max_abs_diff(&prod) <= 1e-12 * (1.0 + prod.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)));
    }

    #[test]
    fn pow_matches_binomial_recurrence(w in complex(), x in complex()) {
        // (1 + x t)^w = sum_j binom(w, j) x^j t^j
        let mut c = vec![Complex64::new(0.0, 0.0); 9];
        c[0] = Complex64::new(1.0, 0.0);
        c[1] = x * 0.5;
        let a = TruncatedSeries::new(c).unwrap();
        let p = series_pow(&a, w).unwrap();
        let mut b = Complex64::new(1.0, 0.0);
        for j in 0..=8 {
            prop_assert!((p.coeff(j) - b).norm() <= 1e-12, "j={} {} vs {}", j, p.coeff(j), b);
            b = b * (w - j as f64) / (j as f64 + 1.0) * (x * 0.5);
        }
    }

    #[test]
    fn multiplication_commutes_and_associates(a in series(6), b in series(6), c in series(6)) {
        prop_assert!(series_mul(&a, &b).max_abs_diff(&series_mul(&b, &a)) <= 1e-14);
        let left = series_mul(&series_mul(&a, &b), &c);
        let right = series_mul(&a, &series_mul(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }
}

const BERNOULLI_2M: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `gamma_n` from Euler-Maclaurin applied to `(log x)^n / x` at a small cutoff.
fn stieltjes_oracle(n: usize) -> f64 {
    let cut = 10u32;
    let big_n = cut as f64;
    let l = big_n.ln();
    let mut total: f64 = (1..cut).map(|k| (k as f64).ln().powi(n as i32) / k as f64).sum();
    total += l.powi(n as i32) / big_n / 2.0;
    total -= l.powi(n as i32 + 1) / (n as f64 + 1.0);
    // r-th derivative is P_r(log x) / x^{r+1}, P_{r+1} = P_r' - (r+1) P_r
    let mut poly = vec![0.0; n + 1];
    poly[n] = 1.0;
    let eval = |p: &[f64]| p.iter().rev().fold(0.0, |acc, c| acc * l + c);
    for r in 0..(2 * BERNOULLI_2M.len()) {
        if r % 2 == 1 {
            let m = (r + 1) / 2;
            let deriv = eval(&poly) / big_n.powi(r as i32 + 1);
            total -= BERNOULLI_2M[m - 1] / factorial(2 * m) * deriv;
        }
        let mut next = vec![0.0; n + 1];
        for i in 0..=n {
            if i + 1 <= n {
                next[i] += (i + 1) as f64 * poly[i + 1];
            }
            next[i] -= (r + 1) as f64 * poly[i];
        }
        poly = next;
    }
    total
}

#[test]
fn stored_stieltjes_constants_match_euler_maclaurin() {
    for (n, &g) in STIELTJES.iter().enumerate() {
        let oracle = stieltjes_oracle(n);
        assert!((oracle - g).abs() <= 1e-12, "n={n}: {oracle} vs {g}");
    }
}

/// `zeta(s)` by Euler-Maclaurin with cutoff 20.
fn zeta(s: Complex64) -> Complex64 {
    let n = 20.0f64;
    let mut total: Complex64 = (1..20).map(|k| (-s * (k as f64).ln()).exp()).sum();
    let n_pow = (-s * n.ln()).exp();
    total += n_pow * n / (s - 1.0) + n_pow / 2.0;
    let mut rising = s;
    let mut n_term = n_pow / n;
    for m in 1..=BERNOULLI_2M.len() {
        total += rising * n_term * (BERNOULLI_2M[m - 1] / factorial(2 * m));
        rising = rising * (s + (2 * m - 1) as f64) * (s + (2 * m) as f64);
        n_term /= n * n;
    }
    total
}

#[test]
fn shifted_zeta_series_matches_contour_coefficients() {
    let z = zeta_shifted_series(10).unwrap();
    let radius = 0.5;
    let points = 128;
    for j in 0..=10 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..points {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / points as f64;
            let t = Complex64::from_polar(radius, theta);
            acc += t * zeta(t + 1.0) / t.powi(j as i32);
        }
        let oracle = acc / points as f64;
        assert!((oracle - z.coeff(j)).norm() <= 1e-8, "j={j}: {oracle} vs {}", z.coeff(j));
    }
}
