use std::path::PathBuf;

use clap::Args;
use lsdlab_core::lab::{
    averaged_condition_probes, fit_error_exponent, hankel_check, hypothesis_deviation,
    optimality_scan, perturbation_g_check, tau_log_moment_check, theorem_sd0_check, ExponentFit,
    HankelParams, Normalization, ResidualGrid, DEFAULT_EPS_SCAN,
};
use lsdlab_core::{
    compute_expansion_tail_corrected, evaluate_at, main_term_integral, main_term_point,
    sieve_window, streamed_partial_sums, Complex64, ExpansionCoefficients, SieveConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{resolve, ConfigFile, Resolved, RunArgs};
use crate::error::CliError;
use crate::output::{complex_cells, emit, fmt_float, read_csv, Cell, Report};

/// Number of random points checked against single-point factorization.
const SPOT_CHECKS: usize = 8;
/// Assumed hypothesis exponent when none is declared.
const DEFAULT_BIG_A: f64 = 1.0;

pub struct Context {
    pub file: Option<ConfigFile>,
    pub sieve: SieveConfig,
}

impl Context {
    fn resolve(&self, args: &RunArgs) -> Result<Resolved, CliError> {
        resolve(args, self.file.as_ref())
    }
}

fn expansion(r: &Resolved) -> Result<ExpansionCoefficients, CliError> {
    let c = &r.config;
    Ok(compute_expansion_tail_corrected(&r.rule.rule, r.alpha(), c.order_j, c.prime_cutoff)?)
}

fn new_report(command: &str, r: &Resolved) -> Result<Report, CliError> {
    let mut report = Report::new(command);
    report.section("config", &r.config)?;
    Ok(report)
}

fn residual_columns(report: &mut Report, res: &ResidualGrid) {
    report.columns(&["x", "re_residual", "im_residual", "normalized"]);
    for ((&x, e), &n) in res.grid.iter().zip(&res.residuals).zip(&res.normalized) {
        let [re, im] = complex_cells(*e);
        report.push_row(vec![Cell::Int(x), re, im, Cell::Float(n)]);
    }
}

#[derive(Serialize)]
struct ExpansionSummary {
    alpha: [f64; 2],
    prime_cutoff: u64,
    tail_estimate: f64,
    tail_corrected: bool,
}

pub fn expand(ctx: &Context, args: &RunArgs) -> Result<(), CliError> {
    let r = ctx.resolve(args)?;
    let e = expansion(&r)?;
    let mut report = new_report("expand", &r)?;
    report.section(
        "expansion",
        &ExpansionSummary {
            alpha: [e.alpha.re, e.alpha.im],
            prime_cutoff: e.prime_cutoff,
            tail_estimate: e.tail_estimate,
            tail_corrected: e.tail_corrected,
        },
    )?;
    report.columns(&["j", "re_c", "im_c", "re_c_tilde", "im_c_tilde", "tail_bound"]);
    for j in 0..=e.order_j {
        let [a, b] = complex_cells(e.c[j]);
        let [c, d] = complex_cells(e.c_tilde[j]);
        report.push_row(vec![Cell::Int(j as u64), a, b, c, d, Cell::Float(e.tail_bounds[j])]);
    }
    emit(&report.render(), r.config.out.as_deref())
}

#[derive(Serialize)]
struct CompareSummary {
    e_target: f64,
    tail_estimate: f64,
    spot_checks: usize,
    spot_check_max_deviation: f64,
}

/// Target exponent of the normalized column: `k - 1 - A` when `A` is
/// declared, otherwise the exponent `Re alpha - J - 2` of the first omitted term.
fn compare_e_target(r: &Resolved) -> f64 {
    match r.rule.big_a {
        Some(a) => r.rule.k - 1.0 - a,
        None => r.alpha().re - r.config.order_j as f64 - 2.0,
    }
}

/// Sieve values at random points against factorizing each point alone.
fn spot_check(r: &Resolved, x_max: u64) -> Result<f64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(r.config.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..SPOT_CHECKS {
        let n = rng.random_range(1..=x_max);
        let sieved = sieve_window(&r.rule.rule, n, n)?[0];
        worst = worst.max((sieved - evaluate_at(&r.rule.rule, n)).norm());
    }
    Ok(worst)
}

pub struct Comparison {
    pub grid: Vec<u64>,
    pub sums: Vec<Complex64>,
    pub point: Vec<Complex64>,
    pub integral: Vec<Complex64>,
    pub residuals: ResidualGrid,
}

fn run_comparison(ctx: &Context, r: &Resolved) -> Result<(Comparison, f64), CliError> {
    let grid = r.grid()?;
    let e = expansion(r)?;
    let sums = streamed_partial_sums(&r.rule.rule, &grid, &ctx.sieve)?.sums;
    let mut point = Vec::with_capacity(grid.len());
    let mut integral = Vec::with_capacity(grid.len());
    for &x in &grid {
        point.push(main_term_point(&e, x as f64)?);
        integral.push(main_term_integral(&e, x as f64)?);
    }
    let resid = sums.iter().zip(&point).map(|(s, m)| s - m).collect();
    let residuals = ResidualGrid::new(grid.clone(), resid, compare_e_target(r), Normalization::PerX)?;
    Ok((
        Comparison {
            grid,
            sums,
            point,
            integral,
            residuals,
        },
        e.tail_estimate,
    ))
}

pub fn compare(ctx: &Context, args: &RunArgs) -> Result<(), CliError> {
    let r = ctx.resolve(args)?;
    let (cmp, tail_estimate) = run_comparison(ctx, &r)?;
    let deviation = spot_check(&r, *cmp.grid.last().unwrap())?;
    let mut report = new_report("compare", &r)?;
    report.section(
        "summary",
        &CompareSummary {
            e_target: cmp.residuals.e_target,
            tail_estimate,
            spot_checks: SPOT_CHECKS,
            spot_check_max_deviation: deviation,
        },
    )?;
    report.columns(&[
        "x",
        "re_sum",
        "im_sum",
        "re_main_point",
        "im_main_point",
        "re_main_integral",
        "im_main_integral",
        "re_residual",
        "im_residual",
        "normalized",
    ]);
    for i in 0..cmp.grid.len() {
        let mut row = vec![Cell::Int(cmp.grid[i])];
        row.extend(complex_cells(cmp.sums[i]));
        row.extend(complex_cells(cmp.point[i]));
        row.extend(complex_cells(cmp.integral[i]));
        row.extend(complex_cells(cmp.residuals.residuals[i]));
        row.push(Cell::Float(cmp.residuals.normalized[i]));
        report.push_row(row);
    }
    emit(&report.render(), r.config.out.as_deref())
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    /// CSV with an `x` column and `re_<column>`, `im_<column>` (or a plain
    /// `<column>`); without it the comparison is computed from the config.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "residual")]
    pub column: String,
    #[arg(long)]
    pub window_lo: Option<u64>,
    #[arg(long)]
    pub window_hi: Option<u64>,
    /// Fit `log |E|` instead of `log |E / x|`.
    #[arg(long)]
    pub log_only: bool,
}

#[derive(Serialize)]
struct FitOutput<'a, C: Serialize> {
    command: &'static str,
    config: &'a C,
    fit: ExponentFit,
}

fn residuals_from_csv(args: &FitArgs, text: &str) -> Result<ResidualGrid, CliError> {
    let (header, rows) = read_csv(text)?;
    let col = |name: &str| header.iter().position(|h| h == name);
    let xi = col("x").ok_or_else(|| CliError::Usage("input has no x column".into()))?;
    let [re_name, im_name] = Report::complex_columns(&args.column);
    let (re, im) = match (col(&re_name), col(&im_name), col(&args.column)) {
        (Some(a), b, _) => (a, b),
        (None, _, Some(a)) => (a, None),
        _ => return Err(CliError::Usage(format!("input has no {} column", args.column))),
    };
    let mut grid = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for row in &rows {
        let x = row[xi];
        if !(x >= 2.0 && x.fract() == 0.0 && x <= u64::MAX as f64) {
            return Err(CliError::Usage(format!("x = {x} is not an integer >= 2")));
        }
        grid.push(x as u64);
        values.push(Complex64::new(row[re], im.map_or(0.0, |i| row[i])));
    }
    let norm = if args.log_only { Normalization::LogOnly } else { Normalization::PerX };
    Ok(ResidualGrid::new(grid, values, 0.0, norm)?)
}

pub fn fit(ctx: &Context, args: &FitArgs) -> Result<(), CliError> {
    let (res, config_json, out) = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let out = args.run.out.clone();
            (residuals_from_csv(args, &text)?, serde_json::to_value(args).ok(), out)
        }
        None => {
            let r = ctx.resolve(&args.run)?;
            let (cmp, _) = run_comparison(ctx, &r)?;
            let mut res = cmp.residuals;
            if args.log_only {
                res = ResidualGrid::new(res.grid, res.residuals, res.e_target, Normalization::LogOnly)?;
            }
            (res, serde_json::to_value(&r.config).ok(), r.config.out.clone())
        }
    };
    let lo = args.window_lo.unwrap_or(0);
    let hi = args.window_hi.unwrap_or(u64::MAX);
    let res = res.window(lo, hi)?;
    let fit = fit_error_exponent(&res)?;
    let json = serde_json::to_string_pretty(&FitOutput {
        command: "fit",
        config: &config_json,
        fit,
    })
    .map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&(json + "\n"), out.as_deref())
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct HankelArgs {
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub z_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub z_im: f64,
    #[arg(long)]
    pub x: f64,
    /// Abscissa of the integration line.
    #[arg(long, default_value_t = 1.1)]
    pub c: f64,
    /// Truncation height; chosen from --tail-target when absent.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tail_target: f64,
    #[serde(skip)]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct HankelOutput<'a> {
    command: &'static str,
    config: &'a HankelArgs,
    lhs: [f64; 2],
    rhs: [f64; 2],
    difference: f64,
    tail_bound: f64,
    t_max: f64,
    quadrature_error: f64,
    warned: bool,
}

pub fn hankel(args: &HankelArgs) -> Result<(), CliError> {
    let params = HankelParams {
        c: args.c,
        t_max: args.t_max,
        tail_target: args.tail_target,
    };
    let rep = hankel_check(Complex64::new(args.z_re, args.z_im), args.x, &params)?;
    let json = serde_json::to_string_pretty(&HankelOutput {
        command: "hankel",
        config: args,
        lhs: [rep.lhs.re, rep.lhs.im],
        rhs: [rep.rhs.re, rep.rhs.im],
        difference: (rep.lhs - rep.rhs).norm(),
        tail_bound: rep.tail_bound,
        t_max: rep.t_max,
        quadrature_error: rep.quadrature_error,
        warned: rep.warned,
    })
    .map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&(json + "\n"), args.out.as_deref())
}

#[derive(Serialize)]
struct ProbeSummary {
    k: f64,
    probe_i_slope: f64,
    k_mismatch: bool,
    one_minus_delta: f64,
}

pub fn probe(ctx: &Context, args: &RunArgs) -> Result<(), CliError> {
    let r = ctx.resolve(args)?;
    let grid = r.grid()?;
    let p = averaged_condition_probes(&r.rule.rule, r.rule.k, &grid, &ctx.sieve)?;
    if p.k_mismatch {
        log::warn!("probe (i) drifts with slope {:.3}: k = {} does not match the rule", p.probe_i_slope, p.k);
    }
    let mut report = new_report("probe", &r)?;
    report.section(
        "summary",
        &ProbeSummary {
            k: p.k,
            probe_i_slope: p.probe_i_slope,
            k_mismatch: p.k_mismatch,
            one_minus_delta: p.one_minus_delta,
        },
    )?;
    report.columns(&["x", "probe_i", "probe_ii_prime", "probe_ii_square", "probe_iii"]);
    for i in 0..grid.len() {
        report.push_row(vec![
            Cell::Int(grid[i]),
            Cell::Float(p.probe_i[i]),
            Cell::Float(p.probe_ii_prime[i]),
            Cell::Float(p.probe_ii_square[i]),
            Cell::Float(p.probe_iii[i]),
        ]);
    }
    emit(&report.render(), r.config.out.as_deref())
}

#[derive(Serialize)]
struct BoundednessSummary {
    big_a: f64,
    e_target: f64,
    growth_slope: Option<f64>,
    bounded: bool,
}

pub fn hypothesis(ctx: &Context, args: &RunArgs) -> Result<(), CliError> {
    let r = ctx.resolve(args)?;
    let big_a = r.rule.big_a.unwrap_or(DEFAULT_BIG_A);
    let res = hypothesis_deviation(&r.rule.rule, r.alpha(), big_a, &r.grid()?, &ctx.sieve)?;
    let mut report = new_report("hypothesis", &r)?;
    report.section(
        "summary",
        &BoundednessSummary {
            big_a,
            e_target: res.e_target,
            growth_slope: res.growth_slope(),
            bounded: res.is_bounded(),
        },
    )?;
    residual_columns(&mut report, &res);
    emit(&report.render(), r.config.out.as_deref())
}

pub fn sd0(ctx: &Context, args: &RunArgs) -> Result<(), CliError> {
    let r = ctx.resolve(args)?;
    let big_a = r.rule.big_a.unwrap_or(DEFAULT_BIG_A);
    let rep = theorem_sd0_check(&r.rule.rule, r.alpha(), big_a, r.rule.k, &r.grid()?, &ctx.sieve)?;
    let mut report = new_report("sd0", &r)?;
    report.section(
        "summary",
        &BoundednessSummary {
            big_a,
            e_target: rep.sums.e_target,
            growth_slope: rep.growth_slope,
            bounded: rep.bounded,
        },
    )?;
    report.columns(&["x", "re_sum", "im_sum", "normalized"]);
    for ((&x, s), &n) in rep.sums.grid.iter().zip(&rep.sums.residuals).zip(&rep.sums.normalized) {
        let [re, im] = complex_cells(*s);
        report.push_row(vec![Cell::Int(x), re, im, Cell::Float(n)]);
    }
    emit(&report.render(), r.config.out.as_deref())
}

#[derive(Args, Clone, Debug)]
pub struct OptimalityArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Values of eps to scan.
    #[arg(long, value_delimiter = ',')]
    pub eps_scan: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10_000)]
    pub window_lo: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub window_hi: u64,
}

#[derive(Serialize)]
struct OptimalitySummary {
    eps_scan: Vec<f64>,
    plateaus: Vec<String>,
    best_eps: f64,
    e_target: f64,
    window: [u64; 2],
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

pub fn optimality(ctx: &Context, args: &OptimalityArgs) -> Result<(), CliError> {
    let r = ctx.resolve(&args.run)?;
    let big_a = r
        .rule
        .big_a
        .ok_or_else(|| CliError::Usage("optimality needs --big-a (or a preset declaring it)".into()))?;
    let eps = args.eps_scan.clone().unwrap_or_else(|| DEFAULT_EPS_SCAN.to_vec());
    let grid = r.grid()?;
    let rep = optimality_scan(
        r.alpha(),
        big_a,
        &eps,
        r.config.order_j,
        r.config.prime_cutoff,
        &grid,
        (args.window_lo, args.window_hi),
        &ctx.sieve,
    )?;
    let best = &rep.entries[rep.best];
    let mut report = new_report("optimality", &r)?;
    report.section(
        "summary",
        &OptimalitySummary {
            eps_scan: eps,
            plateaus: rep
                .entries
                .iter()
                .map(|e| format!("{} {}", fmt_float(e.plateau.re), fmt_float(e.plateau.im)))
                .collect(),
            best_eps: best.eps,
            e_target: best.residuals.e_target,
            window: [args.window_lo, args.window_hi],
            slope: rep.fit.slope,
            intercept: rep.fit.intercept,
            r_squared: rep.fit.r_squared,
        },
    )?;
    report.columns(&["eps", "x", "re_sum", "im_sum", "re_main_point", "im_main_point", "re_residual", "im_residual", "normalized"]);
    for e in &rep.entries {
        for i in 0..grid.len() {
            let mut row = vec![Cell::Float(e.eps), Cell::Int(grid[i])];
            row.extend(complex_cells(e.sums[i]));
            row.extend(complex_cells(e.main[i]));
            row.extend(complex_cells(e.residuals.residuals[i]));
            row.push(Cell::Float(e.residuals.normalized[i]));
            report.push_row(row);
        }
    }
    emit(&report.render(), r.config.out.as_deref())
}

#[derive(Serialize)]
struct PerturbationSummary {
    big_a: f64,
    eps: f64,
    lambda0: [f64; 2],
    lambda0_tail: f64,
}

pub fn perturbation(ctx: &Context, args: &RunArgs) -> Result<(), CliError> {
    let r = ctx.resolve(args)?;
    let big_a = r
        .rule
        .big_a
        .ok_or_else(|| CliError::Usage("perturbation needs --big-a (or a preset declaring it)".into()))?;
    let eps = r.rule.eps.unwrap_or(0.5);
    let rep = perturbation_g_check(r.alpha(), big_a, eps, &r.grid()?, &ctx.sieve)?;
    let mut report = new_report("perturbation", &r)?;
    report.section(
        "summary",
        &PerturbationSummary {
            big_a,
            eps,
            lambda0: [rep.lambda0.re, rep.lambda0.im],
            lambda0_tail: rep.lambda0_tail,
        },
    )?;
    report.columns(&["x", "re_sum", "im_sum", "re_ratio", "im_ratio", "re_residual", "im_residual", "normalized"]);
    let res = &rep.residuals;
    for i in 0..res.grid.len() {
        let mut row = vec![Cell::Int(res.grid[i])];
        row.extend(complex_cells(rep.sums[i]));
        row.extend(complex_cells(rep.ratios[i]));
        row.extend(complex_cells(res.residuals[i]));
        row.push(Cell::Float(res.normalized[i]));
        report.push_row(row);
    }
    emit(&report.render(), r.config.out.as_deref())
}

#[derive(Args, Clone, Debug)]
pub struct MomentArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Power of `log m` in the weight.
    #[arg(long, default_value_t = 0)]
    pub j: u32,
}

#[derive(Serialize)]
struct MomentSummary {
    j: u32,
    e_target: f64,
}

pub fn moment(ctx: &Context, args: &MomentArgs) -> Result<(), CliError> {
    let r = ctx.resolve(&args.run)?;
    let res = tau_log_moment_check(r.alpha(), args.j, &r.grid()?, &ctx.sieve)?;
    let mut report = new_report("moment", &r)?;
    report.section(
        "summary",
        &MomentSummary {
            j: args.j,
            e_target: res.e_target,
        },
    )?;
    residual_columns(&mut report, &res);
    emit(&report.render(), r.config.out.as_deref())
}
