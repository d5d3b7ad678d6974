//! `lsdlab`: command-line front-end for the mean-value experiments.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lsdlab_core::SieveConfig;

use crate::commands::{Context, FitArgs, HankelArgs, MomentArgs, OptimalityArgs};
use crate::config::{ConfigFile, RunArgs};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "lsdlab", version, about = "Mean values of multiplicative functions: sieving, expansions and checks")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "LSDLAB_THREADS")]
    threads: Option<usize>,
    /// TOML file with a [run] section and [presets.<name>] tables.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expansion coefficients c_j and c~_j with their tail bounds.
    Expand(RunArgs),
    /// Partial sums against both main-term forms on the grid.
    Compare(RunArgs),
    /// Error-exponent regression, from a CSV or a fresh comparison.
    Fit(FitArgs),
    /// Line integral against the double integral of (log y)^(z-1) / Gamma(z).
    Hankel(HankelArgs),
    /// Averaged-condition probes.
    Probe(RunArgs),
    /// Deviation of the prime sum of f(p) log p from alpha x.
    Hypothesis(RunArgs),
    /// Epsilon scan and exponent fit for the optimality construction.
    Optimality(OptimalityArgs),
    /// Leading term of the partial sums of tau_{-alpha} * f.
    Perturbation(RunArgs),
    /// Logarithmic moments of tau_alpha(m) / m.
    Moment(MomentArgs),
    /// Partial-sum bound for rules with alpha = 0.
    Sd0(RunArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let ctx = Context {
        file,
        sieve: SieveConfig::default(),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Expand(a) => commands::expand(&ctx, a),
        Command::Compare(a) => commands::compare(&ctx, a),
        Command::Fit(a) => commands::fit(&ctx, a),
        Command::Hankel(a) => commands::hankel(a),
        Command::Probe(a) => commands::probe(&ctx, a),
        Command::Hypothesis(a) => commands::hypothesis(&ctx, a),
        Command::Optimality(a) => commands::optimality(&ctx, a),
        Command::Perturbation(a) => commands::perturbation(&ctx, a),
        Command::Moment(a) => commands::moment(&ctx, a),
        Command::Sd0(a) => commands::sd0(&ctx, a),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsdlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
