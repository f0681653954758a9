//! The `logring` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for numerical or I/O
//! failures. CSV output uses LF line endings and `{:.16e}` floats.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    conserved, deviation, growth_rate, integrate, period, perturb_along_mode, CollisionInfo, GrowthEstimate,
    IntegratorConfig,
};
use crate::error::Error;
use crate::model::{re_configuration, RingParams};
use crate::spectral::{mode_factors, rational_string, rational_to_f64, DeltaPlacement, Rational};
use crate::stability::{classify_spectral, classify_theorem, theorem_bounds, Status};
use crate::verify::{self, Level};

pub const THREADS_ENV: &str = "LOGRING_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "logring",
    version,
    about = "Regular n-gon rotating equilibria with logarithmic interaction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form stable mass-ratio interval for each n.
    Bounds(BoundsArgs),
    /// Spectral and closed-form stability verdicts for one ring.
    Classify(RingArgs),
    /// All 4n eigenvalues of one ring.
    Spectrum(RingArgs),
    /// Spectral verdicts over a grid of mass ratios.
    Sweep(SweepArgs),
    /// Integrate the full nonlinear flow from (a perturbation of) the equilibrium.
    Simulate(SimulateArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    Split,
    Literal,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file (atomically) instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    #[arg(long)]
    pub n: usize,
    /// Ring-to-central mass ratio; omitted with --free.
    #[arg(long, required_unless_present = "free", conflicts_with = "free")]
    pub mu: Option<f64>,
    /// No central body.
    #[arg(long)]
    pub free: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub mu_min: f64,
    #[arg(long)]
    pub mu_max: f64,
    #[arg(long)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, required_unless_present = "free", conflicts_with = "free")]
    pub mu: Option<f64>,
    #[arg(long)]
    pub free: bool,
    /// Duration in rotation periods.
    #[arg(long)]
    pub periods: f64,
    /// Displace along the fastest-growing eigenvector of this mode.
    #[arg(long)]
    pub perturb_mode: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub perturb_eps: f64,
    /// Relative tolerance; the absolute tolerance is one hundredth of it.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Sample spacing in time units (default: period / 200).
    #[arg(long)]
    pub stride: Option<f64>,
    /// Trajectory CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Summary JSON; standard output when omitted.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub level: LevelArg,
    /// Mutation hook for testing the oracle.
    #[arg(long, value_enum, default_value = "split", hide = true)]
    pub delta_placement: PlacementArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failure(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Bounds(a) => cmd_bounds(a, stdout),
        Command::Classify(a) => cmd_classify(a, stdout),
        Command::Spectrum(a) => cmd_spectrum(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
    }
}

fn num(x: f64) -> String {
    // adding +0.0 folds -0.0 into 0.0
    format!("{:.16e}", x + 0.0)
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Write to `out` via a sibling temporary file and rename, or to `stdout`.
fn emit(out: Option<&Path>, content: &str, stdout: &mut dyn Write) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Failure(format!("writing output: {e}"));
    match out {
        None => stdout.write_all(content.as_bytes()).map_err(io),
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
            tmp.write_all(content.as_bytes()).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(path)
                .map_err(|e| CliError::Failure(format!("{}: {}", path.display(), e.error)))?;
            Ok(())
        }
    }
}

fn check_n(n: usize) -> CliResult<()> {
    if n < 2 {
        return usage(format!("--n must be at least 2, got {n}"));
    }
    Ok(())
}

fn ring_params(n: usize, mu: Option<f64>, free: bool) -> CliResult<RingParams> {
    check_n(n)?;
    if free {
        return Ok(RingParams::free(n)?);
    }
    let mu = mu.expect("clap enforces --mu without --free");
    if !(mu > 0.0 && mu.is_finite()) {
        return usage(format!("--mu must be positive and finite, got {mu}"));
    }
    Ok(RingParams::central(n, mu)?)
}

#[derive(Serialize)]
struct BoundsRow {
    n: usize,
    lower: Option<String>,
    lower_decimal: Option<f64>,
    upper: Option<String>,
    upper_decimal: Option<f64>,
    upper_inclusive: bool,
    case: &'static str,
}

#[derive(Serialize)]
struct BoundsTable {
    rows: Vec<BoundsRow>,
}

pub fn cmd_bounds(a: &BoundsArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if a.n_min < 2 || a.n_min > a.n_max {
        return usage(format!("need 2 <= n-min <= n-max, got {}..{}", a.n_min, a.n_max));
    }
    let rows: Vec<BoundsRow> = (a.n_min..=a.n_max)
        .map(|n| {
            let b = theorem_bounds(n);
            let text = |q: Option<Rational>| q.map(rational_string);
            let dec = |q: Option<Rational>| q.map(rational_to_f64);
            BoundsRow {
                n,
                lower: text(b.lower),
                lower_decimal: dec(b.lower),
                upper: text(b.upper),
                upper_decimal: dec(b.upper),
                upper_inclusive: b.upper_inclusive,
                case: b.kind.label(),
            }
        })
        .collect();
    let content = match a.output.format {
        Format::Json => json(&BoundsTable { rows })?,
        Format::Csv => {
            let mut s = String::from("n,lower,lower_decimal,upper,upper_decimal,upper_inclusive,case\n");
            for r in &rows {
                let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.lower.clone().unwrap_or_default(),
                    opt(r.lower_decimal),
                    r.upper.clone().unwrap_or_default(),
                    opt(r.upper_decimal),
                    r.upper_inclusive,
                    r.case
                );
            }
            s
        }
    };
    emit(a.output.out.as_deref(), &content, stdout)
}

#[derive(Serialize)]
struct ClassifyRecord {
    n: usize,
    mu: Option<f64>,
    has_central: bool,
    spectral: Status,
    /// `None` when the mass ratio lies outside (0, 1].
    theorem: Option<Status>,
    max_re_lambda: f64,
    witness_mode: Option<usize>,
    min_nontrivial_p: f64,
    per_mode_p: Vec<f64>,
}

pub fn cmd_classify(a: &RingArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let p = ring_params(a.n, a.mu, a.free)?;
    let v = classify_spectral(&p);
    let theorem = match classify_theorem(p.n(), p.mu(), p.has_central()) {
        Ok(s) => Some(s),
        Err(Error::OutsideRegime { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let rec = ClassifyRecord {
        n: p.n(),
        mu: p.has_central().then_some(p.mu()),
        has_central: p.has_central(),
        spectral: v.status,
        theorem,
        max_re_lambda: v.max_re_lambda,
        witness_mode: v.witness_mode,
        min_nontrivial_p: v.min_nontrivial_p(),
        per_mode_p: v.per_mode_p.clone(),
    };
    let content = match a.output.format {
        Format::Json => json(&rec)?,
        Format::Csv => {
            // per-mode products are ';'-separated inside one field
            let per_mode: Vec<String> = rec.per_mode_p.iter().map(|x| num(*x)).collect();
            format!(
                "n,mu,has_central,spectral,theorem,max_re_lambda,witness_mode,min_nontrivial_p,per_mode_p\n{},{},{},{},{},{},{},{},{}\n",
                rec.n,
                rec.mu.map(num).unwrap_or_default(),
                rec.has_central,
                rec.spectral,
                rec.theorem.map_or("outside_regime", |s| s.as_str()),
                num(rec.max_re_lambda),
                rec.witness_mode.map(|j| j.to_string()).unwrap_or_default(),
                num(rec.min_nontrivial_p),
                per_mode.join(";")
            )
        }
    };
    emit(a.output.out.as_deref(), &content, stdout)
}

#[derive(Serialize)]
struct EigenRow {
    j: usize,
    re_lambda: f64,
    im_lambda: f64,
    p_j: f64,
    c_j: f64,
}

#[derive(Serialize)]
struct SpectrumTable {
    n: usize,
    mu: Option<f64>,
    has_central: bool,
    omega: f64,
    eigenvalues: Vec<EigenRow>,
}

pub fn cmd_spectrum(a: &RingArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let p = ring_params(a.n, a.mu, a.free)?;
    let mut rows: Vec<EigenRow> = mode_factors(&p)
        .iter()
        .flat_map(|f| {
            f.lambdas.iter().map(move |l: &Complex64| EigenRow {
                j: f.j(),
                re_lambda: l.re,
                im_lambda: l.im,
                p_j: f.root_product,
                c_j: f.c_sum,
            })
        })
        .collect();
    rows.sort_by(|x, y| {
        x.j.cmp(&y.j)
            .then(y.im_lambda.total_cmp(&x.im_lambda))
            .then(y.re_lambda.total_cmp(&x.re_lambda))
    });
    let content = match a.output.format {
        Format::Json => json(&SpectrumTable {
            n: p.n(),
            mu: p.has_central().then_some(p.mu()),
            has_central: p.has_central(),
            omega: p.omega(),
            eigenvalues: rows,
        })?,
        Format::Csv => {
            let mut s = String::from("j,re_lambda,im_lambda,p_j,c_j\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.j,
                    num(r.re_lambda),
                    num(r.im_lambda),
                    num(r.p_j),
                    num(r.c_j)
                );
            }
            s
        }
    };
    emit(a.output.out.as_deref(), &content, stdout)
}

#[derive(Serialize)]
struct SweepRow {
    mu: f64,
    status: Status,
    max_re_lambda: f64,
    min_nontrivial_p: f64,
}

#[derive(Serialize)]
struct SweepTable {
    n: usize,
    rows: Vec<SweepRow>,
}

/// Worker count from `LOGRING_THREADS`; `None` leaves rayon's default.
pub fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => usage(format!("{THREADS_ENV}: {e}")),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
    }
}

/// `samples` evenly spaced values including both ends.
pub fn mu_grid(mu_min: f64, mu_max: f64, samples: usize) -> Vec<f64> {
    let last = samples - 1;
    (0..samples)
        .map(|i| {
            if i == last {
                mu_max
            } else {
                mu_min + (mu_max - mu_min) * i as f64 / last as f64
            }
        })
        .collect()
}

pub fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    check_n(a.n)?;
    if !(a.mu_min > 0.0 && a.mu_min < a.mu_max && a.mu_max <= 1.0) {
        return usage(format!(
            "need 0 < mu-min < mu-max <= 1, got {} and {}",
            a.mu_min, a.mu_max
        ));
    }
    if a.samples < 2 {
        return usage(format!("--samples must be at least 2, got {}", a.samples));
    }
    let grid = mu_grid(a.mu_min, a.mu_max, a.samples);
    let evaluate = || -> CliResult<Vec<SweepRow>> {
        grid.par_iter()
            .map(|&mu| {
                let v = classify_spectral(&RingParams::central(a.n, mu)?);
                Ok(SweepRow {
                    mu,
                    status: v.status,
                    max_re_lambda: v.max_re_lambda,
                    min_nontrivial_p: v.min_nontrivial_p(),
                })
            })
            .collect()
    };
    let rows = match thread_cap()? {
        None => evaluate()?,
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Failure(e.to_string()))?
            .install(evaluate)?,
    };
    let content = match a.output.format {
        Format::Json => json(&SweepTable { n: a.n, rows })?,
        Format::Csv => {
            let mut s = String::from("mu,status,max_re_lambda,min_nontrivial_p\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    num(r.mu),
                    r.status,
                    num(r.max_re_lambda),
                    num(r.min_nontrivial_p)
                );
            }
            s
        }
    };
    emit(a.output.out.as_deref(), &content, stdout)
}

#[derive(Serialize)]
struct SimulationSummary {
    n: usize,
    mu: Option<f64>,
    has_central: bool,
    periods: f64,
    t_final: f64,
    samples: usize,
    accepted_steps: usize,
    rejected_steps: usize,
    collision: bool,
    collision_info: Option<CollisionInfo>,
    energy_drift: Option<f64>,
    angular_momentum_drift: Option<f64>,
    linear_momentum: Option<f64>,
    max_position_error: f64,
    final_position_error: f64,
    perturb_mode: Option<usize>,
    perturb_eps: Option<f64>,
    predicted_rate: Option<f64>,
    growth: Option<GrowthEstimate>,
    growth_error: Option<String>,
}

pub fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let p = ring_params(a.n, a.mu, a.free)?;
    if !(a.periods > 0.0 && a.periods.is_finite()) {
        return usage(format!("--periods must be positive, got {}", a.periods));
    }
    if !(a.tol > 0.0) {
        return usage(format!("--tol must be positive, got {}", a.tol));
    }
    if !(a.perturb_eps > 0.0) {
        return usage(format!("--perturb-eps must be positive, got {}", a.perturb_eps));
    }
    if let Some(j) = a.perturb_mode {
        if j >= p.n() {
            return usage(format!("--perturb-mode must be below n = {}, got {j}", p.n()));
        }
    }
    let stride = a.stride.unwrap_or(period(&p) / 200.0);
    if !(stride > 0.0) {
        return usage(format!("--stride must be positive, got {stride}"));
    }

    let mut predicted = None;
    let start = match a.perturb_mode {
        None => re_configuration(&p, 0.0),
        Some(j) => {
            let lambda = crate::spectral::mode_factor(&p, j).dominant_root();
            predicted = Some(lambda.re);
            perturb_along_mode(&p, j, lambda, a.perturb_eps)?
        }
    };
    let cfg = IntegratorConfig::with_tolerances(a.tol, a.tol * 1e-2).with_stride(stride);
    let t_final = a.periods * period(&p);
    let traj = integrate(&start, t_final, &cfg)?;

    let q0 = conserved(&start).ok();
    let q1 = conserved(traj.last()).ok();
    let (energy_drift, angular_momentum_drift, linear_momentum) = match (q0, q1) {
        (Some(q0), Some(q1)) => (
            Some(q0.energy_drift(&q1)),
            Some(q0.angular_momentum_drift(&q1)),
            Some(q1.linear_momentum.norm()),
        ),
        _ => (None, None, None),
    };
    let (growth, growth_error) = match a.perturb_mode {
        None => (None, None),
        Some(_) => match growth_rate(&traj, &p, a.perturb_eps) {
            Ok(g) => (Some(g), None),
            Err(e) => (None, Some(e.to_string())),
        },
    };
    let summary = SimulationSummary {
        n: p.n(),
        mu: p.has_central().then_some(p.mu()),
        has_central: p.has_central(),
        periods: a.periods,
        t_final,
        samples: traj.samples.len(),
        accepted_steps: traj.accepted_steps,
        rejected_steps: traj.rejected_steps,
        collision: traj.collision.is_some(),
        collision_info: traj.collision,
        energy_drift,
        angular_momentum_drift,
        linear_momentum,
        max_position_error: traj.samples.iter().map(|s| deviation(s, &p)).fold(0.0, f64::max),
        final_position_error: deviation(traj.last(), &p),
        perturb_mode: a.perturb_mode,
        perturb_eps: a.perturb_mode.map(|_| a.perturb_eps),
        predicted_rate: predicted,
        growth,
        growth_error,
    };

    let mut csv = String::from("t");
    for b in 0..p.body_count() {
        let _ = write!(csv, ",x{b},y{b},vx{b},vy{b}");
    }
    csv.push('\n');
    for s in &traj.samples {
        csv.push_str(&num(s.time));
        for (z, v) in s.positions.iter().zip(&s.velocities) {
            let _ = write!(csv, ",{},{},{},{}", num(z.re), num(z.im), num(v.re), num(v.im));
        }
        csv.push('\n');
    }
    emit(Some(&a.out), &csv, stdout)?;
    emit(a.summary.as_deref(), &json(&summary)?, stdout)
}

pub fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let level = match a.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let placement = match a.delta_placement {
        PlacementArg::Split => DeltaPlacement::Split,
        PlacementArg::Literal => DeltaPlacement::LiteralFirstTwice,
    };
    let report = verify::run(level, placement);
    emit(a.out.as_deref(), &json(&report)?, stdout)?;
    match report.first_failure {
        None => Ok(()),
        Some(name) => {
            let detail = report
                .invariants
                .iter()
                .find(|r| r.name == name)
                .map(|r| r.detail.as_str())
                .unwrap_or_default();
            Err(CliError::Failure(format!("invariant {name} failed: {detail}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("logring").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_has_exact_endpoints() {
        let g = mu_grid(0.01, 1.0, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[199], 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bounds_rows() {
        let (code, out, _) = call(&["bounds", "--n-min", "2", "--n-max", "12"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(
            lines[0],
            "n,lower,lower_decimal,upper,upper_decimal,upper_inclusive,case"
        );
        assert_eq!(lines.len(), 12);
        assert!(lines[1].starts_with("2,,,,,false,unstable"));
        assert!(lines[2].starts_with("3,1/1,") && lines[2].ends_with("point"));
        let ten = lines.iter().find(|l| l.starts_with("10,")).unwrap();
        assert!(ten.contains("4/81") && ten.contains("4/7") && ten.ends_with("even"));
    }

    #[test]
    fn bad_range_is_usage_error() {
        assert_eq!(call(&["bounds", "--n-min", "5", "--n-max", "4"]).0, 1);
        assert_eq!(call(&["bounds", "--n-min", "1", "--n-max", "4"]).0, 1);
        assert_eq!(call(&["classify", "--n", "4"]).0, 1);
        assert_eq!(call(&["classify", "--n", "4", "--mu", "0.5", "--free"]).0, 1);
        assert_eq!(call(&["classify", "--n", "4", "--mu", "-1"]).0, 1);
        assert_eq!(
            call(&[
                "sweep",
                "--n",
                "4",
                "--mu-min",
                "0.5",
                "--mu-max",
                "0.4",
                "--samples",
                "3"
            ])
            .0,
            1
        );
        assert_eq!(call(&["bogus"]).0, 1);
        assert_eq!(call(&["bounds", "--n-min", "2", "--n-max", "3", "--frobnicate"]).0, 1);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("spectrum"));
    }

    #[test]
    fn classify_examples() {
        let (code, out, _) = call(&["classify", "--n", "12", "--mu", "0.3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["spectral"], "unstable");
        assert_eq!(v["theorem"], "unstable");

        let (_, out, _) = call(&["classify", "--n", "7", "--free", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["spectral"], "degenerate");
        assert_eq!(v["theorem"], "unstable");
        assert_eq!(v["witness_mode"], 3);

        let (_, out, _) = call(&["classify", "--n", "5", "--mu", "0.5"]);
        let row = out.lines().nth(1).unwrap();
        assert!(row.contains(",spectrally_stable,spectrally_stable,"));
    }

    #[test]
    fn classify_beyond_unit_mass_ratio() {
        let (code, out, _) = call(&["classify", "--n", "5", "--mu", "2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["theorem"].is_null());
    }

    #[test]
    fn spectrum_ordering() {
        let (code, out, _) = call(&["spectrum", "--n", "4", "--mu", "0.5"]);
        assert_eq!(code, 0);
        let rows: Vec<Vec<f64>> = out
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 16);
        let w = RingParams::central(4, 0.5).unwrap().omega();
        assert!((rows[0][2] - w * 2f64.sqrt()).abs() <= 1e-12);
        assert_eq!(rows[1][2], 0.0);
        assert_eq!(rows[2][2], 0.0);
        assert!((rows[3][2] + w * 2f64.sqrt()).abs() <= 1e-12);
        for pair in rows.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!(a[0] < b[0] || (a[0] == b[0] && (a[2] > b[2] || (a[2] == b[2] && a[1] >= b[1]))));
        }
    }

    #[test]
    fn deterministic_output() {
        let a = call(&[
            "sweep",
            "--n",
            "10",
            "--mu-min",
            "0.01",
            "--mu-max",
            "1",
            "--samples",
            "50",
        ]);
        let b = call(&[
            "sweep",
            "--n",
            "10",
            "--mu-min",
            "0.01",
            "--mu-max",
            "1",
            "--samples",
            "50",
        ]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
    }
}
