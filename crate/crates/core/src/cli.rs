//! Command-line front end.
//!
//! Exit codes: `0` success or the checked claim holds, `1` a check failed,
//! `2` usage or spec error (reported as `error: <kind>: <detail>`).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::figures::{write_figure, FigureName};
use crate::mc_oracle::{validate, DEFAULT_TIMES};
use crate::orders::{
    check_orders, compared_lifetimes, evaluate_proposition, implication_audit, AuditResult, Grid,
    Order, OrderReport, PropositionId, PropositionInput, DEFAULT_CLIP, DEFAULT_POINTS,
    DEFAULT_SLACK,
};
use crate::residual::{compare_residuals, residual_survival, ResidualKind, ResidualSpec};
use crate::spec::ModelSpec;
use crate::tte::{Lifetime, Target, TteModel};

pub const SEED_ENV: &str = "TTEREL_SEED";
pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Parser)]
#[command(
    name = "tterel",
    version,
    about = "Reliability and stochastic orders of coherent systems under TTE dependence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate survival, cdf, density or hazard of a target on a grid (CSV `t,value`).
    Eval(EvalArgs),
    /// Check ST/HR/RHR/LR orders between two lifetimes (JSON).
    Compare(CompareArgs),
    /// Evaluate the sufficient conditions of a named proposition (JSON).
    Check(CheckArgs),
    /// Compare usual and system-level residual lifetimes at time t (JSON).
    Residual(ResidualArgs),
    /// Write the CSV curves of a reference figure.
    #[command(after_help = figure_help())]
    Figure(FigureArgs),
    /// Compare analytic survival with the Monte Carlo frailty oracle (JSON).
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Number of grid points [default: spec grid, else 1024].
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Right end of the grid [default: spec grid, else survival 1e-12].
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Relative slack of monotonicity checks [default: spec grid, else 1e-9].
    #[arg(long)]
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Survival,
    Cdf,
    Density,
    Hazard,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSON model spec.
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value = "survival")]
    pub what: Quantity,
    /// system | component:i | series:i,j,.. | parallel[:i,j,..]
    #[arg(long, default_value = "system")]
    pub target: String,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the canonical form of the spec instead of evaluating.
    #[arg(long)]
    pub dump_spec: bool,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Spec of the first lifetime `A` in `A <= B`.
    pub spec_a: PathBuf,
    /// Spec of `B` [default: same as A].
    pub spec_b: Option<PathBuf>,
    /// Target used for both sides unless overridden.
    #[arg(long, default_value = "system")]
    pub target: String,
    #[arg(long)]
    pub target_a: Option<String>,
    #[arg(long)]
    pub target_b: Option<String>,
    /// Comma separated subset of st,hr,rhr,lr.
    #[arg(long, default_value = "st,hr,rhr,lr")]
    pub orders: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Proposition id, e.g. COHERENT_COMMON_R or RESIDUAL_TP2.
    pub proposition: String,
    pub spec: PathBuf,
    /// Second model, for propositions that compare two systems.
    pub spec_b: Option<PathBuf>,
    /// Component index (1-based) for COMPONENT_VS_SERIES.
    #[arg(long)]
    pub component: Option<usize>,
    /// Series set, e.g. `1,2`, for RESIDUAL_TP2.
    #[arg(long)]
    pub subset: Option<String>,
    /// Inspection time for RESIDUAL_TP2.
    #[arg(long)]
    pub t: Option<f64>,
    /// Comma separated parts to evaluate (st, hr, rhr, lr, st_reverse).
    #[arg(long)]
    pub parts: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    pub spec: PathBuf,
    #[arg(long, default_value = "system")]
    pub target: String,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig1_left | fig1_right | fig2 | fig3 | fig4
    pub name: String,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub spec: PathBuf,
    #[arg(long, default_value = "system")]
    pub target: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Seed [default: $TTEREL_SEED, else 20240917].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma separated inspection times [default: 0.25,0.5,1,2].
    #[arg(long)]
    pub times: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn figure_help() -> String {
    let mut s = String::from("Figures:\n");
    for f in FigureName::ALL {
        s.push_str(&format!("  {:<11} {}\n", f.name(), f.description()));
    }
    s
}

/// Writes rows as CSV with 17 significant digits.
pub fn write_csv<W: Write>(w: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(header)?;
    for r in rows {
        wr.write_record(r.iter().map(|v| format!("{v:.16e}")))?;
    }
    wr.flush()?;
    Ok(())
}

fn load(path: &PathBuf, stderr: &mut dyn Write) -> Result<(ModelSpec, TteModel)> {
    let spec = ModelSpec::load(path)?;
    let model = spec.to_model()?;
    if !model.is_proper() {
        writeln!(
            stderr,
            "warning: {}: `{}` is not guaranteed to give a proper joint law for n = {}; non-series curves may be clamped",
            path.display(),
            model.generator().family(),
            model.n()
        )?;
    }
    Ok((spec, model))
}

/// Grid from flags, then the spec's `grid`, then an automatic range over
/// `lifetimes`.
fn resolve_grid(flags: &GridArgs, spec: &ModelSpec, lifetimes: &[&dyn Lifetime]) -> Result<Grid> {
    let from_spec = spec.grid.clone().unwrap_or_default();
    let points = flags
        .grid_points
        .or(from_spec.points)
        .unwrap_or(DEFAULT_POINTS);
    let slack = flags.slack.or(from_spec.slack).unwrap_or(DEFAULT_SLACK);
    let grid = Grid::auto_for_to(lifetimes, flags.t_max.or(from_spec.t_max), points)?;
    grid.with_slack(slack)?.with_clip(DEFAULT_CLIP)
}

fn emit_json<T: Serialize>(value: &T, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => writeln!(stdout, "{text}")?,
    }
    Ok(())
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Spec(format!("bad index `{x}` in `{s}`")))
        })
        .collect()
}

fn parse_times(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Spec(format!("bad time `{x}` in `{s}`")))
        })
        .collect()
}

fn cmd_eval(a: &EvalArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let (spec, model) = load(&a.spec, stderr)?;
    if a.dump_spec {
        emit_json(&ModelSpec::from_model(&model)?, a.out.as_ref(), stdout)?;
        return Ok(0);
    }
    let target: Target = a.target.parse()?;
    let l = model.lifetime(&target)?;
    let grid = resolve_grid(&a.grid, &spec, &[&l])?;
    let floor = grid.domain_clip().ln();
    let rows: Vec<Vec<f64>> = grid
        .points()
        .iter()
        .filter(|&&t| a.what != Quantity::Hazard || l.log_survival(t) > floor)
        .map(|&t| {
            let v = match a.what {
                Quantity::Survival => l.survival(t),
                Quantity::Cdf => l.cdf(t),
                Quantity::Density => l.density(t),
                Quantity::Hazard => l.hazard(t),
            };
            vec![t, v]
        })
        .collect();
    match &a.out {
        Some(p) => write_csv(std::fs::File::create(p)?, &["t", "value"], &rows)?,
        None => write_csv(&mut *stdout, &["t", "value"], &rows)?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct CompareOutput {
    a: String,
    b: String,
    grid: GridSummary,
    reports: Vec<OrderReport>,
    audit: AuditResult,
    all_hold: bool,
}

#[derive(Serialize)]
struct GridSummary {
    points: usize,
    t_max: f64,
    slack: f64,
    domain_clip: f64,
}

impl From<&Grid> for GridSummary {
    fn from(g: &Grid) -> Self {
        GridSummary {
            points: g.len(),
            t_max: g.t_max(),
            slack: g.slack(),
            domain_clip: g.domain_clip(),
        }
    }
}

fn cmd_compare(a: &CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let (spec_a, model_a) = load(&a.spec_a, stderr)?;
    let model_b = match &a.spec_b {
        Some(p) => load(p, stderr)?.1,
        None => model_a.clone(),
    };
    let ta: Target = a.target_a.as_deref().unwrap_or(&a.target).parse()?;
    let tb: Target = a.target_b.as_deref().unwrap_or(&a.target).parse()?;
    let la = model_a.lifetime(&ta)?;
    let lb = model_b.lifetime(&tb)?;
    let grid = resolve_grid(&a.grid, &spec_a, &[&la, &lb])?;
    let orders = Order::parse_list(&a.orders)?;
    let reports = check_orders(&orders, &la, &lb, &grid)?;
    let audit = implication_audit(&reports);
    let all_hold = reports.iter().all(OrderReport::holds);
    let out = CompareOutput {
        a: format!("{}:{}", a.spec_a.display(), ta),
        b: format!(
            "{}:{}",
            a.spec_b.as_ref().unwrap_or(&a.spec_a).display(),
            tb
        ),
        grid: (&grid).into(),
        reports,
        audit,
        all_hold,
    };
    emit_json(&out, a.out.as_ref(), stdout)?;
    Ok(if all_hold { 0 } else { 1 })
}

fn cmd_check(a: &CheckArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let id: PropositionId = a.proposition.parse()?;
    let (spec, first) = load(&a.spec, stderr)?;
    let second = match &a.spec_b {
        Some(p) => Some(load(p, stderr)?.1),
        None => None,
    };
    let subset = a.subset.as_deref().map(parse_indices).transpose()?;
    let mut input = match &second {
        Some(b) => PropositionInput::pair(&first, b),
        None => PropositionInput::single(&first),
    };
    if let Some(i) = a.component {
        input = input.with_component(i);
    }
    if let Some(p) = &subset {
        input = input.with_subset(p);
    }
    if let Some(t) = a.t {
        input = input.with_time(t);
    }
    let (la, lb) = compared_lifetimes(id, &input)?;
    let grid = resolve_grid(&a.grid, &spec, &[la.as_ref(), lb.as_ref()])?;
    let mut report = evaluate_proposition(id, &input, &grid)?;
    if let Some(parts) = &a.parts {
        let names: Vec<&str> = parts.split(',').map(str::trim).collect();
        report = report.select(&names)?;
    }
    emit_json(&report, a.out.as_ref(), stdout)?;
    Ok(if report.all_hold { 0 } else { 1 })
}

fn cmd_residual(a: &ResidualArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let (spec, model) = load(&a.spec, stderr)?;
    let target: Target = a.target.parse()?;
    let explicit = a.grid.grid_points.is_some()
        || a.grid.t_max.is_some()
        || a.grid.slack.is_some()
        || spec.grid.is_some();
    let report = if explicit {
        let usual = residual_survival(&ResidualSpec::new(
            model.clone(),
            target.clone(),
            a.t,
            ResidualKind::Usual,
        ))?;
        let grid = resolve_grid(&a.grid, &spec, &[&usual])?;
        compare_residuals(&model, &target, a.t, Some(&grid))?
    } else {
        compare_residuals(&model, &target, a.t, None)?
    };
    emit_json(&report, a.out.as_ref(), stdout)?;
    Ok(if report.agreement { 0 } else { 1 })
}

fn cmd_figure(a: &FigureArgs, stdout: &mut dyn Write) -> Result<i32> {
    let name: FigureName = a.name.parse()?;
    for p in write_figure(name, &a.out)? {
        writeln!(stdout, "{}", p.display())?;
    }
    Ok(0)
}

fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Spec(format!("{SEED_ENV}=`{s}` is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn cmd_validate(a: &ValidateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let (_, model) = load(&a.spec, stderr)?;
    let target: Target = a.target.parse()?;
    let seed = match a.seed {
        Some(s) => s,
        None => seed_from_env()?.unwrap_or(DEFAULT_SEED),
    };
    let times = match &a.times {
        Some(s) => parse_times(s)?,
        None => DEFAULT_TIMES.to_vec(),
    };
    let report = validate(&model, &target, &times, a.samples, seed)?;
    emit_json(&report, a.out.as_ref(), stdout)?;
    Ok(if report.all_within { 0 } else { 1 })
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, stdout, stderr),
        Command::Compare(a) => cmd_compare(a, stdout, stderr),
        Command::Check(a) => cmd_check(a, stdout, stderr),
        Command::Residual(a) => cmd_residual(a, stdout, stderr),
        Command::Figure(a) => cmd_figure(a, stdout),
        Command::Validate(a) => cmd_validate(a, stdout, stderr),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                2
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.kind());
            2
        }
    }
}

pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
