use lsdlab_core::lab::counterexample_rule;
use lsdlab_core::sieve::{tau_k_local, SieveConfig};
use lsdlab_core::{
    dirichlet_convolve, extract_lambda_f, primes_up_to, sieve_multiplicative,
    streamed_partial_sums, Complex64, PrimePowerRule, SievedTable,
};
use proptest::prelude::*;

fn cfg() -> SieveConfig {
    SieveConfig::default()
}

fn small_segments() -> SieveConfig {
    SieveConfig {
        segment_len: 997,
        ..SieveConfig::default()
    }
}

/// `f(n)` from the factorization of `n` found by trial division.
fn by_factorization(rule: &PrimePowerRule, mut n: u64) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    let mut p = 2;
    while n > 1 {
        let mut nu = 0;
        while n % p == 0 {
            n /= p;
            nu += 1;
        }
        if nu > 0 {
            v *= rule.value(p, nu);
        }
        p += 1;
    }
    v
}

fn alpha() -> impl Strategy<Value = Complex64> {
    (-2.0f64..3.0, -1.5f64..1.5).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sieve_matches_factorization(a in alpha()) {
        let rule = PrimePowerRule::tau_alpha(a);
        let table = sieve_multiplicative(&rule, 10_000, &small_segments()).unwrap();
        for n in 1..=10_000u64 {
            let v = by_factorization(&rule, n);
            prop_assert!((table.get(n as usize) - v).norm() <= 1e-12 * (1.0 + v.norm()), "n={}", n);
        }
    }

    #[test]
    fn streamed_sums_match_table(a in alpha(), cut in 2u64..5000) {
        let rule = PrimePowerRule::tau_alpha(a);
        let grid = [cut, cut + 1, 2 * cut + 7, 10_000];
        let table = sieve_multiplicative(&rule, 10_000, &cfg()).unwrap();
        let from_table = table.prefix_sums(&grid).unwrap();
        let streamed = streamed_partial_sums(&rule, &grid, &small_segments()).unwrap();
        for (s, t) in streamed.sums.iter().zip(&from_table.sums) {
            prop_assert!((s - t).norm() <= 1e-10 * (1.0 + t.norm()));
        }
    }

    #[test]
    fn convolution_commutes_and_associates(a in alpha(), b in alpha(), c in alpha()) {
        let x = 600;
        let t = |z| sieve_multiplicative(&PrimePowerRule::tau_alpha(z), x, &cfg()).unwrap();
        let (ta, tb, tc) = (t(a), t(b), t(c));
        let ab = dirichlet_convolve(&ta, &tb).unwrap();
        let ba = dirichlet_convolve(&tb, &ta).unwrap();
        let left = dirichlet_convolve(&ab, &tc).unwrap();
        let right = dirichlet_convolve(&ta, &dirichlet_convolve(&tb, &tc).unwrap()).unwrap();
        // tau_a * tau_b = tau_{a+b}
        let sum = t(a + b);
        for n in 1..=x {
            prop_assert!((ab.get(n) - ba.get(n)).norm() <= 1e-9 * (1.0 + ab.get(n).norm()));
            prop_assert!((left.get(n) - right.get(n)).norm() <= 1e-9 * (1.0 + left.get(n).norm()));
            prop_assert!((ab.get(n) - sum.get(n)).norm() <= 1e-9 * (1.0 + sum.get(n).norm()));
        }
    }

    #[test]
    fn lambda_inverts_log_derivative(a in alpha()) {
        let x = 2000;
        let f = sieve_multiplicative(&PrimePowerRule::tau_alpha(a), x, &cfg()).unwrap();
        let lambda = extract_lambda_f(&f).unwrap();
        let back = dirichlet_convolve(&f, &lambda).unwrap();
        for n in 2..=x {
            let target = f.get(n) * (n as f64).ln();
            prop_assert!((back.get(n) - target).norm() <= 1e-9 * (1.0 + target.norm()), "n={}", n);
        }
        // for a binomial rule Lambda_f lives on prime powers with value alpha log p
        for p in primes_up_to(40) {
            let mut q = p as usize;
            while q <= x {
                prop_assert!((lambda.get(q) - a * (p as f64).ln()).norm() <= 1e-10);
                q *= p as usize;
            }
        }
    }

    #[test]
    fn divisor_bound_holds(a in alpha()) {
        let rule = PrimePowerRule::tau_alpha(a);
        let k = a.norm();
        let table = sieve_multiplicative(&rule, 5000, &cfg()).unwrap();
        let tau_k = PrimePowerRule::custom("tau_k", std::sync::Arc::new(move |_, nu| Complex64::new(tau_k_local(k, nu), 0.0)));
        let bound = sieve_multiplicative(&tau_k, 5000, &cfg()).unwrap();
        for n in 1..=5000 {
            prop_assert!(table.get(n).norm() <= bound.get(n).re * (1.0 + 1e-12) + 1e-12, "n={}", n);
        }
        prop_assert!(rule.divisor_bound_violation(&primes_up_to(1000), 5000).is_none());
    }

    #[test]
    fn counterexample_prime_values_are_bounded(re in -1.0f64..2.0, im in -1.0f64..1.0, eps in 0.0f64..=1.0) {
        let alpha = Complex64::new(re, im);
        let big_a = alpha.norm() - alpha.re + 0.5;
        let rule = counterexample_rule(alpha, big_a, eps).unwrap();
        let k = alpha.norm().max(1.0);
        for p in primes_up_to(100_000) {
            prop_assert!(rule.prime_value(p).norm() <= k * (1.0 + 1e-12));
        }
    }
}

#[test]
fn point_mass_is_the_convolution_identity() {
    let f = sieve_multiplicative(&PrimePowerRule::squarefree(), 3000, &cfg()).unwrap();
    let e = SievedTable::point_mass(3000);
    assert_eq!(dirichlet_convolve(&e, &f).unwrap(), f);
}

#[test]
fn dense_table_does_not_depend_on_segment_length() {
    let rule = PrimePowerRule::tau_alpha(Complex64::new(0.3, 0.9));
    let a = sieve_multiplicative(&rule, 50_000, &cfg()).unwrap();
    let b = sieve_multiplicative(&rule, 50_000, &small_segments()).unwrap();
    assert_eq!(a, b);
}
