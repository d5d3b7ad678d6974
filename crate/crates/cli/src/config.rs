use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use lsdlab_core::preset::{PresetFile, PresetSpec, ResolvedRule};
use lsdlab_core::{geometric_grid, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_PRESET: &str = "tau_alpha";
pub const DEFAULT_GRID_START: f64 = 1000.0;
pub const DEFAULT_GRID_RATIO: f64 = 2.0;
pub const DEFAULT_GRID_COUNT: usize = 12;
pub const DEFAULT_ORDER_J: usize = 1;
pub const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

/// Rule, grid and output settings shared by the experiment commands.
/// Every flag overrides the `[run]` section of `--config`.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunArgs {
    /// Built-in preset (tau_alpha, squarefree, counterexample, sd0,
    /// zero_on_primes) or a name from the config file.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_im: Option<f64>,
    /// Exponent A of the prime-sum hypothesis.
    #[arg(long)]
    pub big_a: Option<f64>,
    /// Divisor-bound parameter k.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub grid_start: Option<f64>,
    #[arg(long)]
    pub grid_ratio: Option<f64>,
    #[arg(long)]
    pub grid_count: Option<usize>,
    /// Number of expansion terms minus one.
    #[arg(long)]
    pub order_j: Option<usize>,
    /// Largest prime in the Euler product.
    #[arg(long)]
    pub prime_cutoff: Option<u64>,
    /// Seed for the randomized sieve spot-checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// `self` with unset fields taken from `base`.
    fn over(&self, base: &RunArgs) -> RunArgs {
        RunArgs {
            preset: self.preset.clone().or_else(|| base.preset.clone()),
            alpha_re: self.alpha_re.or(base.alpha_re),
            alpha_im: self.alpha_im.or(base.alpha_im),
            big_a: self.big_a.or(base.big_a),
            k: self.k.or(base.k),
            eps: self.eps.or(base.eps),
            grid_start: self.grid_start.or(base.grid_start),
            grid_ratio: self.grid_ratio.or(base.grid_ratio),
            grid_count: self.grid_count.or(base.grid_count),
            order_j: self.order_j.or(base.order_j),
            prime_cutoff: self.prime_cutoff.or(base.prime_cutoff),
            seed: self.seed.or(base.seed),
            out: self.out.clone().or_else(|| base.out.clone()),
        }
    }
}

/// Contents of a `--config` file: a `[run]` section with the same keys as
/// the flags (underscored) and any number of `[presets.<name>]` tables.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub run: RunArgs,
    #[serde(default)]
    pub presets: BTreeMap<String, PresetSpec>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// The fully resolved configuration, echoed into every output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub preset: String,
    pub grid_start: f64,
    pub grid_ratio: f64,
    pub grid_count: usize,
    pub order_j: usize,
    pub prime_cutoff: u64,
    pub seed: u64,
    /// Not echoed: the destination does not affect the result, and two
    /// runs written to different files must compare byte for byte.
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub rule: PresetSpec,
}

pub struct Resolved {
    pub config: RunConfig,
    pub rule: ResolvedRule,
}

impl Resolved {
    pub fn grid(&self) -> Result<Vec<u64>, CliError> {
        let c = &self.config;
        Ok(geometric_grid(c.grid_start, c.grid_ratio, c.grid_count)?)
    }

    pub fn alpha(&self) -> Complex64 {
        self.rule.alpha
    }
}

pub fn resolve(flags: &RunArgs, file: Option<&ConfigFile>) -> Result<Resolved, CliError> {
    let empty = ConfigFile::default();
    let file = file.unwrap_or(&empty);
    let args = flags.over(&file.run);
    let name = args.preset.clone().unwrap_or_else(|| DEFAULT_PRESET.to_string());
    let presets = PresetFile {
        presets: file.presets.clone(),
    };
    let mut spec = presets.lookup(&name)?;
    if args.alpha_re.is_some() || args.alpha_im.is_some() {
        let base = spec.alpha.unwrap_or([0.0, 0.0]);
        spec.alpha = Some([args.alpha_re.unwrap_or(base[0]), args.alpha_im.unwrap_or(base[1])]);
    }
    if args.big_a.is_some() {
        spec.big_a = args.big_a;
    }
    if args.k.is_some() {
        spec.k = args.k;
    }
    if args.eps.is_some() {
        spec.eps = args.eps;
    }
    let rule = spec.build()?;
    // echo the values actually used, including preset defaults
    spec.alpha = Some([rule.alpha.re, rule.alpha.im]);
    spec.k = Some(rule.k);
    let config = RunConfig {
        preset: name,
        grid_start: args.grid_start.unwrap_or(DEFAULT_GRID_START),
        grid_ratio: args.grid_ratio.unwrap_or(DEFAULT_GRID_RATIO),
        grid_count: args.grid_count.unwrap_or(DEFAULT_GRID_COUNT),
        order_j: args.order_j.unwrap_or(DEFAULT_ORDER_J),
        prime_cutoff: args.prime_cutoff.unwrap_or(DEFAULT_PRIME_CUTOFF),
        seed: args.seed.unwrap_or(0),
        out: args.out,
        rule: spec,
    };
    Ok(Resolved { config, rule })
}
