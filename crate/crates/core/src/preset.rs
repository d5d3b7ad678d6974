//! Named rules, built in or read from a TOML file of the form
//!
//! ```toml
//! [presets.half]
//! kind = "tau_alpha"        # tau_alpha | squarefree | counterexample | explicit | zero_on_primes
//! alpha = [0.5, 0.0]        # [re, im]
//!
//! [presets.wiggle]
//! kind = "counterexample"
//! alpha = [1.0, 0.0]
//! big_a = 1.5
//! eps = 0.5
//!
//! [presets.table]
//! kind = "explicit"
//! alpha = [1.0, 0.0]
//! default = [1.0, 0.0]      # value at every unlisted prime power
//! values = [{ p = 2, nu = 1, value = [0.0, 0.0] }]
//! ```
//!
//! Every field except `kind` is optional and may be overridden before the
//! rule is built.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LsdError, Result};
use crate::lab::counterexample_rule;
use crate::sieve::PrimePowerRule;
use crate::ComplexValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    TauAlpha,
    Squarefree,
    Counterexample,
    Explicit,
    ZeroOnPrimes,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitEntry {
    pub p: u64,
    pub nu: u32,
    pub value: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub kind: PresetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<ExplicitEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PresetFile {
    #[serde(default)]
    pub presets: BTreeMap<String, PresetSpec>,
}

/// A rule together with the parameters the experiments need.
#[derive(Clone, Debug)]
pub struct ResolvedRule {
    pub rule: PrimePowerRule,
    pub alpha: ComplexValue,
    pub big_a: Option<f64>,
    pub k: f64,
    pub eps: Option<f64>,
}

pub const BUILTIN_NAMES: [&str; 5] = ["tau_alpha", "squarefree", "counterexample", "sd0", "zero_on_primes"];

fn pair(v: [f64; 2]) -> ComplexValue {
    Complex64::new(v[0], v[1])
}

impl PresetSpec {
    pub fn new(kind: PresetKind) -> Self {
        PresetSpec {
            kind,
            alpha: None,
            big_a: None,
            k: None,
            eps: None,
            default: None,
            values: Vec::new(),
        }
    }

    /// Built-in presets: `tau_alpha` (alpha = 1), `squarefree`,
    /// `counterexample` (alpha = 1, A = 1.5, eps = 0.5), `sd0` (the same
    /// family at alpha = 0) and `zero_on_primes`.
    pub fn builtin(name: &str) -> Option<Self> {
        let mut spec = match name {
            "tau_alpha" => PresetSpec::new(PresetKind::TauAlpha),
            "squarefree" => PresetSpec::new(PresetKind::Squarefree),
            "counterexample" => PresetSpec::new(PresetKind::Counterexample),
            "sd0" => {
                let mut s = PresetSpec::new(PresetKind::Counterexample);
                s.alpha = Some([0.0, 0.0]);
                s
            }
            "zero_on_primes" => PresetSpec::new(PresetKind::ZeroOnPrimes),
            _ => return None,
        };
        if spec.kind == PresetKind::Counterexample {
            spec.big_a = Some(1.5);
            spec.eps = Some(0.5);
        }
        Some(spec)
    }

    pub fn build(&self) -> Result<ResolvedRule> {
        let finite = |name: &'static str, v: Option<f64>| match v {
            Some(x) if !x.is_finite() => Err(LsdError::NonFinite(name)),
            _ => Ok(()),
        };
        finite("big_a", self.big_a)?;
        finite("k", self.k)?;
        finite("eps", self.eps)?;
        let (rule, alpha) = match self.kind {
            PresetKind::TauAlpha => {
                let alpha = pair(self.alpha.unwrap_or([1.0, 0.0]));
                (PrimePowerRule::tau_alpha(alpha), alpha)
            }
            PresetKind::Squarefree => (PrimePowerRule::squarefree(), pair(self.alpha.unwrap_or([1.0, 0.0]))),
            PresetKind::Counterexample => {
                let alpha = pair(self.alpha.unwrap_or([1.0, 0.0]));
                let big_a = self.big_a.ok_or_else(|| {
                    LsdError::Config("counterexample preset needs big_a".into())
                })?;
                (counterexample_rule(alpha, big_a, self.eps.unwrap_or(0.5))?, alpha)
            }
            PresetKind::Explicit => {
                let default = pair(self.default.unwrap_or([0.0, 0.0]));
                let mut values = BTreeMap::new();
                for e in &self.values {
                    if e.nu == 0 || e.p < 2 {
                        return Err(LsdError::Config(format!(
                            "explicit entry p = {}, nu = {} is not a prime power",
                            e.p, e.nu
                        )));
                    }
                    values.insert((e.p, e.nu), pair(e.value));
                }
                (
                    PrimePowerRule::explicit("explicit", values, default),
                    pair(self.alpha.unwrap_or(self.default.unwrap_or([0.0, 0.0]))),
                )
            }
            PresetKind::ZeroOnPrimes => (
                PrimePowerRule::explicit("zero_on_primes", BTreeMap::new(), Complex64::new(0.0, 0.0)),
                pair(self.alpha.unwrap_or([0.0, 0.0])),
            ),
        };
        if !alpha.is_finite() {
            return Err(LsdError::NonFinite("alpha"));
        }
        let k = self.k.or(rule.k_bound).unwrap_or_else(|| alpha.norm().max(1.0));
        let mut rule = rule.with_k_bound(k);
        if let Some(a) = self.big_a {
            rule = rule.with_declared_a(a);
        }
        Ok(ResolvedRule {
            rule,
            alpha,
            big_a: self.big_a,
            k,
            eps: self.eps,
        })
    }
}

impl PresetFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LsdError::Config(e.to_string()))
    }

    /// A preset from this file, falling back to the built-ins.
    pub fn lookup(&self, name: &str) -> Result<PresetSpec> {
        self.presets
            .get(name)
            .cloned()
            .or_else(|| PresetSpec::builtin(name))
            .ok_or_else(|| LsdError::Config(format!("unknown preset {name:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_build() {
        for name in BUILTIN_NAMES {
            let r = PresetSpec::builtin(name).unwrap().build().unwrap();
            assert!(r.k > 0.0, "{name}");
        }
        let sd0 = PresetSpec::builtin("sd0").unwrap().build().unwrap();
        assert_eq!(sd0.alpha, Complex64::new(0.0, 0.0));
        let expected = -(2f64.ln() / 5f64.ln()).powf(1.5);
        assert!((sd0.rule.prime_value(5).re - expected).abs() < 1e-15);
    }

    #[test]
    fn parse_file() {
        let text = r#"
            [presets.half]
            kind = "tau_alpha"
            alpha = [0.5, 0.0]

            [presets.table]
            kind = "explicit"
            default = [1.0, 0.0]
            values = [{ p = 2, nu = 1, value = [0.0, 0.0] }]
        "#;
        let file = PresetFile::parse(text).unwrap();
        let half = file.lookup("half").unwrap().build().unwrap();
        assert_eq!(half.alpha, Complex64::new(0.5, 0.0));
        let table = file.lookup("table").unwrap().build().unwrap();
        assert_eq!(table.rule.value(2, 1), Complex64::new(0.0, 0.0));
        assert_eq!(table.rule.value(3, 1), Complex64::new(1.0, 0.0));
        assert!(file.lookup("squarefree").is_ok());
        assert!(matches!(file.lookup("nope"), Err(LsdError::Config(_))));
    }

    #[test]
    fn rejects_malformed() {
        assert!(PresetFile::parse("[presets.x]\nkind = \"bogus\"").is_err());
        assert!(PresetFile::parse("[presets.x]\nkind = \"tau_alpha\"\nalpah = [1.0, 0.0]").is_err());
        let mut s = PresetSpec::new(PresetKind::Counterexample);
        assert!(s.build().is_err());
        s.big_a = Some(0.0);
        assert!(matches!(s.build(), Err(LsdError::HypothesisViolated(_))));
    }
}
