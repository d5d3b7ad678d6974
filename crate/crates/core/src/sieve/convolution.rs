use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::rule::binomial_local_values;
use super::{sieve_multiplicative, PrimePowerRule, RuleKind, SieveConfig, SievedTable};
use crate::error::{LsdError, Result};

/// `(a * b)(n) = sum_{d | n} a(d) b(n/d)` for every `n <= x_max`.
///
/// Each output accumulates its terms in increasing `d`, whatever the
/// partition of the output range across threads.
pub fn dirichlet_convolve(a: &SievedTable, b: &SievedTable) -> Result<SievedTable> {
    if a.x_max() != b.x_max() {
        return Err(LsdError::LengthMismatch {
            left: a.x_max(),
            right: b.x_max(),
        });
    }
    let x = a.x_max();
    let av = a.values();
    let bv = b.values();
    let mut out = vec![Complex64::new(0.0, 0.0); x + 1];
    let chunk = (x / (4 * rayon::current_num_threads())).max(1 << 14);
    out[1..]
        .par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(c, block)| {
            let lo = 1 + c * chunk;
            let hi = lo + block.len() - 1;
            for d in 1..=hi {
                let ad = av[d];
                if ad.re == 0.0 && ad.im == 0.0 {
                    continue;
                }
                let k_lo = lo.div_ceil(d).max(1);
                let k_hi = hi / d;
                for k in k_lo..=k_hi {
                    block[d * k - lo] += ad * bv[k];
                }
            }
        });
    Ok(SievedTable::from_padded(out))
}

/// Solves `f log = f * Lambda_f` for `Lambda_f`, in increasing `n`.
pub fn extract_lambda_f(a: &SievedTable) -> Result<SievedTable> {
    let f = a.values();
    if (f[1] - Complex64::new(1.0, 0.0)).norm() != 0.0 {
        return Err(LsdError::NotNormalized(f[1].to_string()));
    }
    let x = a.x_max();
    // acc[n] collects sum over proper divisors 1 < d < n of Lambda_f(d) f(n/d)
    let mut acc = vec![Complex64::new(0.0, 0.0); x + 1];
    let mut lambda = vec![Complex64::new(0.0, 0.0); x + 1];
    for d in 2..=x {
        let l = f[d] * (d as f64).ln() - acc[d];
        lambda[d] = l;
        if l.re == 0.0 && l.im == 0.0 {
            continue;
        }
        let mut m = 2 * d;
        let mut k = 2;
        while m <= x {
            acc[m] += l * f[k];
            m += d;
            k += 1;
        }
    }
    Ok(SievedTable::from_padded(lambda))
}

/// `tau_f`: the function with Euler product `prod_p (1 - p^{-s})^{-f(p)}`.
pub fn tau_f_rule(rule: &PrimePowerRule) -> PrimePowerRule {
    if rule.is_binomial() {
        return rule.clone();
    }
    let base = rule.clone();
    let mut out = PrimePowerRule::binomial_local(
        format!("tau_f[{}]", rule.label),
        Arc::new(move |p| base.prime_value(p)),
    );
    out.k_bound = rule.k_bound;
    out.declared_a = rule.declared_a;
    out
}

/// `tau_{-f}`: the function with Euler product `prod_p (1 - p^{-s})^{f(p)}`.
pub fn negated_tau_f_rule(rule: &PrimePowerRule) -> PrimePowerRule {
    match &rule.kind {
        RuleKind::TauAlpha(alpha) => PrimePowerRule::tau_alpha(-alpha),
        _ => {
            let base = rule.clone();
            let mut out = PrimePowerRule::binomial_local(
                format!("tau_-f[{}]", rule.label),
                Arc::new(move |p| -base.prime_value(p)),
            );
            out.k_bound = rule.k_bound;
            out
        }
    }
}

/// `R_f = f * tau_{-f}` as a multiplicative rule, from its local factors
/// `R_f(p^nu) = sum_i f(p^i) tau_{-f}(p^{nu-i})`.
pub fn remainder_rule(rule: &PrimePowerRule) -> PrimePowerRule {
    let base = rule.clone();
    let mut out = PrimePowerRule::custom(
        format!("R_f[{}]", rule.label),
        Arc::new(move |p, nu| {
            let f = base.local_values(p, nu);
            let inv = binomial_local_values(-base.prime_value(p), nu);
            (0..=nu as usize).map(|i| f[i] * inv[nu as usize - i]).sum()
        }),
    );
    out.k_bound = rule.k_bound.map(|k| 2.0 * k);
    out
}

/// `R_f = f * tau_{-f}` as a table, by direct convolution.
pub fn remainder_r_f(rule: &PrimePowerRule, x_max: usize, cfg: &SieveConfig) -> Result<SievedTable> {
    cfg.budget.check_table(x_max as u64)?;
    let f = sieve_multiplicative(rule, x_max, cfg)?;
    let inv = sieve_multiplicative(&negated_tau_f_rule(rule), x_max, cfg)?;
    dirichlet_convolve(&f, &inv)
}

/// `Lambda_f(n)` values for the classical von Mangoldt function, for tests.
#[cfg(test)]
pub(crate) fn von_mangoldt(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    if m == 1 {
        (p as f64).ln()
    } else {
        0.0
    }
}
