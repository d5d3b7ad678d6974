//! Shared fixtures for the criterion benchmarks.

use lsdlab_core::lab::counterexample_rule;
use lsdlab_core::{PrimePowerRule, SieveConfig};
use num_complex::Complex64;

/// Rules exercised by the benchmarks, with a short name for the report.
pub fn bench_rules() -> Vec<(&'static str, PrimePowerRule)> {
    vec![
        ("tau_2", PrimePowerRule::tau_alpha(Complex64::new(2.0, 0.0))),
        ("tau_half", PrimePowerRule::tau_alpha(Complex64::new(0.5, 0.0))),
        ("squarefree", PrimePowerRule::squarefree()),
        (
            "counterexample",
            counterexample_rule(Complex64::new(1.0, 0.0), 1.5, 0.5).expect("valid parameters"),
        ),
    ]
}

pub fn config() -> SieveConfig {
    SieveConfig::default()
}
