use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::ComplexValue;

/// Prime-indexed exponent `p -> beta_p` of a binomial local rule.
pub type ExponentFn = Arc<dyn Fn(u64) -> ComplexValue + Send + Sync>;

/// Arbitrary local rule `(p, nu) -> f(p^nu)` for `nu >= 1`.
pub type LocalFn = Arc<dyn Fn(u64, u32) -> ComplexValue + Send + Sync>;

#[derive(Clone)]
pub enum RuleKind {
    /// `f = tau_alpha`, the function with Dirichlet series `zeta(s)^alpha`.
    TauAlpha(ComplexValue),
    /// `f(p^nu) = binom(beta_p + nu - 1, nu)`.
    BinomialLocal(ExponentFn),
    /// Values listed per `(p, nu)`; every unlisted prime power maps to `default`.
    Explicit {
        values: BTreeMap<(u64, u32), ComplexValue>,
        default: ComplexValue,
    },
    /// `mu^2`: one on squarefree integers, zero elsewhere.
    SquarefreeIndicator,
    /// Any other multiplicative function given by its prime-power values.
    Custom(LocalFn),
}

/// Large-prime behaviour `f(p) - alpha = amplitude * (log p)^(-exponent)` of a
/// binomial local rule, valid for every prime `p >= from_prime`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimeDeviationProfile {
    pub alpha: ComplexValue,
    pub amplitude: ComplexValue,
    pub exponent: f64,
    pub from_prime: u64,
}

/// The defining data of a multiplicative function.
#[derive(Clone)]
pub struct PrimePowerRule {
    pub kind: RuleKind,
    /// Divisor-bound parameter `k` in `|f| <= tau_k`, when declared.
    pub k_bound: Option<f64>,
    /// Exponent `A` of the prime-sum hypothesis, when declared.
    pub declared_a: Option<f64>,
    pub profile: Option<PrimeDeviationProfile>,
    pub label: String,
}

impl fmt::Debug for PrimePowerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            RuleKind::TauAlpha(a) => format!("TauAlpha({a})"),
            RuleKind::BinomialLocal(_) => "BinomialLocal".to_string(),
            RuleKind::Explicit { values, default } => {
                format!("Explicit({} entries, default {default})", values.len())
            }
            RuleKind::SquarefreeIndicator => "SquarefreeIndicator".to_string(),
            RuleKind::Custom(_) => "Custom".to_string(),
        };
        f.debug_struct("PrimePowerRule")
            .field("label", &self.label)
            .field("kind", &kind)
            .field("k_bound", &self.k_bound)
            .field("declared_a", &self.declared_a)
            .finish()
    }
}

/// `binom(beta + nu - 1, nu)` for `nu = 0..=max_nu` by the product recurrence.
pub fn binomial_local_values(beta: ComplexValue, max_nu: u32) -> Vec<ComplexValue> {
    let mut out = Vec::with_capacity(max_nu as usize + 1);
    let mut b = Complex64::new(1.0, 0.0);
    out.push(b);
    for nu in 1..=max_nu {
        b = b * (beta + (nu - 1) as f64) / nu as f64;
        out.push(b);
    }
    out
}

/// `tau_k(p^nu) = binom(k + nu - 1, nu)` for real `k`.
pub fn tau_k_local(k: f64, nu: u32) -> f64 {
    (1..=nu).fold(1.0, |b, i| b * (k + (i - 1) as f64) / i as f64)
}

impl PrimePowerRule {
    fn with_kind(kind: RuleKind, label: impl Into<String>) -> Self {
        PrimePowerRule {
            kind,
            k_bound: None,
            declared_a: None,
            profile: None,
            label: label.into(),
        }
    }

    pub fn tau_alpha(alpha: ComplexValue) -> Self {
        let mut r = Self::with_kind(RuleKind::TauAlpha(alpha), format!("tau_alpha({alpha})"));
        r.k_bound = Some(alpha.norm());
        r
    }

    pub fn squarefree() -> Self {
        let mut r = Self::with_kind(RuleKind::SquarefreeIndicator, "squarefree");
        r.k_bound = Some(1.0);
        r
    }

    pub fn binomial_local(label: impl Into<String>, beta: ExponentFn) -> Self {
        Self::with_kind(RuleKind::BinomialLocal(beta), label)
    }

    pub fn explicit(
        label: impl Into<String>,
        values: BTreeMap<(u64, u32), ComplexValue>,
        default: ComplexValue,
    ) -> Self {
        Self::with_kind(RuleKind::Explicit { values, default }, label)
    }

    pub fn custom(label: impl Into<String>, local: LocalFn) -> Self {
        Self::with_kind(RuleKind::Custom(local), label)
    }

    pub fn with_k_bound(mut self, k: f64) -> Self {
        self.k_bound = Some(k);
        self
    }

    pub fn with_declared_a(mut self, a: f64) -> Self {
        self.declared_a = Some(a);
        self
    }

    pub fn with_profile(mut self, profile: PrimeDeviationProfile) -> Self {
        self.profile = Some(profile);
        self
    }

    /// `f(p^nu)`; `f(p^0) = 1`.
    pub fn value(&self, p: u64, nu: u32) -> ComplexValue {
        if nu == 0 {
            return Complex64::new(1.0, 0.0);
        }
        match &self.kind {
            RuleKind::TauAlpha(alpha) => binomial_local_values(*alpha, nu)[nu as usize],
            RuleKind::BinomialLocal(beta) => binomial_local_values(beta(p), nu)[nu as usize],
            RuleKind::Explicit { values, default } => {
                values.get(&(p, nu)).copied().unwrap_or(*default)
            }
            RuleKind::SquarefreeIndicator => {
                Complex64::new(if nu == 1 { 1.0 } else { 0.0 }, 0.0)
            }
            RuleKind::Custom(local) => local(p, nu),
        }
    }

    pub fn prime_value(&self, p: u64) -> ComplexValue {
        match &self.kind {
            RuleKind::TauAlpha(alpha) => *alpha,
            RuleKind::BinomialLocal(beta) => beta(p),
            _ => self.value(p, 1),
        }
    }

    /// `f(p^nu)` for `nu = 0..=max_nu`.
    pub fn local_values(&self, p: u64, max_nu: u32) -> Vec<ComplexValue> {
        match &self.kind {
            RuleKind::TauAlpha(alpha) => binomial_local_values(*alpha, max_nu),
            RuleKind::BinomialLocal(beta) => binomial_local_values(beta(p), max_nu),
            _ => (0..=max_nu).map(|nu| self.value(p, nu)).collect(),
        }
    }

    /// Whether `f = tau_f`, i.e. the prime-power values are binomial in `f(p)`.
    pub fn is_binomial(&self) -> bool {
        matches!(self.kind, RuleKind::TauAlpha(_) | RuleKind::BinomialLocal(_))
    }

    /// First prime power `(p, nu)` with `p <= p_max`, `p^nu <= n_max` where
    /// `|f(p^nu)| > tau_k(p^nu)`, for the declared `k`.
    pub fn divisor_bound_violation(
        &self,
        primes: &[u64],
        n_max: u64,
    ) -> Option<(u64, u32, f64, f64)> {
        let k = self.k_bound?;
        for &p in primes {
            if p > n_max {
                break;
            }
            let mut max_nu = 0u32;
            let mut q = 1u64;
            while q.saturating_mul(p) <= n_max {
                q *= p;
                max_nu += 1;
            }
            let vals = self.local_values(p, max_nu);
            for nu in 1..=max_nu {
                let bound = tau_k_local(k, nu);
                let v = vals[nu as usize].norm();
                if v > bound * (1.0 + 1e-12) {
                    return Some((p, nu, v, bound));
                }
            }
        }
        None
    }
}
