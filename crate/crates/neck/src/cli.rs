//! The `neck` command line.
//!
//! Exit status: 0 on success, 2 on a usage or parameter error, 3 when a
//! certificate, a `--check` invariant or a convergence criterion fails, and 1
//! on IO errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use neck_core::geodesic::{integrate_geodesic_with, GeodesicState, IntegrationOptions};
use neck_core::moduli::{
    c0_bound_check, flat_ribbon_check, linear_t_grid, minimizer_set_with, CrossCheckOptions,
    MinimizerOptions, SweepOptions,
};
use neck_core::profiles::{verify_profile_conditions, NeckProfile, Profile};
use neck_core::shorten::{
    init_loop, loop_length, shorten_to_geodesic_with, ClosedGeodesic, Loop, ShortenOptions,
    TraceRow,
};
use neck_core::surface::{gauss_curvature, metric_at};
use neck_core::NeckError;

use crate::output::{sink, trace_path, write_json, Cell, Format, Table};
use crate::parallel::{par_family_convergence, par_sweep};
use crate::spec::{InitSpec, ProfileSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "neck",
    version,
    about = "Numerical lab for swinging-neck surfaces of revolution"
)]
pub struct Cli {
    #[command(flatten)]
    #[serde(flatten)]
    pub global: Global,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized initial loops.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run the invariant checks for the command and fail with status 3 if any fails.
    #[arg(long, global = true)]
    pub check: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Tabulate h, its derivatives, the metric and the Gaussian curvature.
    Curvature(CurvatureArgs),
    /// Integrate one geodesic with conservation certificates.
    Geodesic(GeodesicArgs),
    /// Shorten a loop to a closed geodesic.
    Shorten(ShortenArgs),
    /// Minimal closed geodesics of one profile.
    Moduli(ModuliArgs),
    /// Minimal closed geodesics across the swing family.
    Sweep(SweepArgs),
    /// Geodesics of f_t for t_n = t_limit + 1/n against the limit member.
    Converge(ConvergeArgs),
    /// Check the defining conditions of a profile.
    VerifyProfile(VerifyArgs),
    /// Run a command described by a JSON file.
    Run(RunArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CurvatureArgs {
    #[arg(long, default_value = "base:delta=0.5")]
    pub profile: ProfileSpec,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dx: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct GeodesicArgs {
    #[arg(long, default_value = "base:delta=0.5")]
    pub profile: ProfileSpec,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub vx: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub vtheta: f64,
    #[arg(long, default_value_t = 20.0)]
    pub length: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Keep the initial velocity as given instead of rescaling to unit speed.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ShortenArgs {
    #[arg(long, default_value = "base:delta=0.5")]
    pub profile: ProfileSpec,
    /// circle:x0=X | graph:amp=A,phase=P | perturbed:x0=X,noise=E[,seed=S]
    #[arg(long, default_value = "graph:amp=2,phase=0")]
    pub init: InitSpec,
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub max_iter: usize,
    /// Trace file; defaults to `<out stem>.trace.csv` when `--out` is given.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModuliArgs {
    #[arg(long, default_value = "base:delta=0.5")]
    pub profile: ProfileSpec,
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.003)]
    pub tmin: f64,
    #[arg(long, default_value_t = 0.05)]
    pub tmax: f64,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Add the base profile t = 0 as an extra row.
    #[arg(long)]
    pub include_zero: bool,
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also shorten a graph loop for every row and report its length.
    #[arg(long)]
    pub cross_check: bool,
    /// Margin for the --check band bound |x| <= 1 + eps.
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvergeArgs {
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t_limit: f64,
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 100)]
    pub n_max: usize,
    #[arg(long, default_value_t = 2.5, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = -0.6, allow_negative_numbers = true)]
    pub vx: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub vtheta: f64,
    #[arg(long, default_value_t = 10.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value = "base:delta=0.5")]
    pub profile: ProfileSpec,
    #[arg(long, default_value_t = 0.01)]
    pub dx: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    /// JSON object with a "command" key and the command's options,
    /// e.g. {"command": "sweep", "samples": 2000, "out": "sweep.csv"}.
    pub config: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] NeckError),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                NeckError::InvalidParameter { .. }
                | NeckError::ConvexityViolated { .. }
                | NeckError::TooFewPoints { .. } => EXIT_USAGE,
                _ => EXIT_FAILED,
            },
            CliError::Failed(_) => EXIT_FAILED,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(summary) => {
            eprintln!("neck: {summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("neck: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command and returns its one-line summary.
pub fn run(cli: &Cli) -> CliResult<String> {
    if let Command::Run(args) = &cli.command {
        let nested = parse_config_file(&args.config, &cli.global)?;
        if matches!(nested.command, Command::Run(_)) {
            return Err(CliError::Usage("a config file cannot invoke `run`".into()));
        }
        return run(&nested);
    }
    let config = serde_json::to_value(cli).expect("config serializes");
    let g = &cli.global;
    match &cli.command {
        Command::Curvature(a) => curvature(a, g, &config),
        Command::Geodesic(a) => geodesic(a, g, &config),
        Command::Shorten(a) => shorten(a, g, &config),
        Command::Moduli(a) => moduli(a, g, &config),
        Command::Sweep(a) => sweep(a, g, &config),
        Command::Converge(a) => converge(a, g, &config),
        Command::VerifyProfile(a) => verify(a, g, &config),
        Command::Run(_) => unreachable!(),
    }
}

/// Turns a JSON config object into an argument vector. Keys map to long
/// flags with `_` replaced by `-`; `true` is a bare flag, `false` and `null`
/// are dropped. Global flags given on the command line fill in keys the file
/// leaves out.
pub fn config_to_args(config: &Value) -> CliResult<Vec<String>> {
    let obj = config
        .as_object()
        .ok_or_else(|| CliError::Usage("config must be a JSON object".into()))?;
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Usage("config needs a string \"command\" key".into()))?;
    let mut args = vec!["neck".to_string(), command.to_string()];
    for (key, value) in obj.iter().filter(|(k, _)| k.as_str() != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => args.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => args.extend([flag, s.clone()]),
            Value::Number(n) => args.extend([flag, n.to_string()]),
            _ => {
                return Err(CliError::Usage(format!(
                    "config key `{key}` must be a string, number or boolean"
                )))
            }
        }
    }
    Ok(args)
}

fn parse_config_file(path: &Path, outer: &Global) -> CliResult<Cli> {
    let text = fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut args = config_to_args(&value)?;
    let has = |k: &str| value.get(k).is_some();
    if let (Some(out), false) = (&outer.out, has("out")) {
        args.extend(["--out".into(), out.display().to_string()]);
    }
    if let (Some(f), false) = (outer.format, has("format")) {
        args.extend([
            "--format".into(),
            serde_json::to_value(f).unwrap().as_str().unwrap().into(),
        ]);
    }
    if !has("seed") && outer.seed != 0 {
        args.extend(["--seed".into(), outer.seed.to_string()]);
    }
    if outer.check && !has("check") {
        args.push("--check".into());
    }
    Cli::try_parse_from(&args).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(table: &Table, g: &Global, default: Format, config: &Value) -> CliResult {
    let mut w = sink(g.out.as_deref())?;
    table.write(&mut w, g.format.unwrap_or(default), config)?;
    w.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, g: &Global) -> CliResult {
    let mut w = sink(g.out.as_deref())?;
    write_json(&mut w, value)?;
    Ok(())
}

/// Turns a list of failed invariants into a status-3 error.
fn checks(failures: Vec<String>) -> CliResult {
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "check failed: {}",
            failures.join("; ")
        )))
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(CliError::Usage(format!(
            "bad grid: need finite xmin <= xmax and dx > 0, got [{lo}, {hi}] step {step}"
        )));
    }
    let n = ((hi - lo) / step).round() as usize;
    Ok((0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect())
}

fn curvature(a: &CurvatureArgs, g: &Global, config: &Value) -> CliResult<String> {
    let p = a.profile.build()?;
    let mut table = Table::new(&["x", "h", "h1", "h2", "E", "G", "K"]);
    let mut failures = Vec::new();
    for x in grid(a.xmin, a.xmax, a.dx)? {
        let j = p.jet(x);
        let m = metric_at(&p, x);
        let k = gauss_curvature(&p, x);
        if g.check && !(k <= 1e-12) {
            failures.push(format!("K({x}) = {k:e} > 0"));
        }
        table.push(vec![
            x.into(),
            j.h.into(),
            j.d1.into(),
            j.d2.into(),
            m.e.into(),
            m.g.into(),
            k.into(),
        ]);
    }
    emit(&table, g, Format::Csv, config)?;
    checks(failures)?;
    Ok(format!(
        "curvature: {} points on {}",
        table.rows.len(),
        a.profile
    ))
}

fn geodesic(a: &GeodesicArgs, g: &Global, config: &Value) -> CliResult<String> {
    let p = a.profile.build()?;
    let opts = IntegrationOptions {
        normalize: !a.no_normalize,
        ..IntegrationOptions::default()
    };
    let st0 = GeodesicState::new(a.x0, a.theta0, a.vx, a.vtheta);
    let traj = integrate_geodesic_with(&p, st0, a.length, a.step, opts)?;
    let mut table = Table::new(&[
        "s",
        "x",
        "theta",
        "vx",
        "vtheta",
        "clairaut_drift",
        "speed_drift",
    ]);
    for (i, s) in traj.samples.iter().enumerate() {
        table.push(vec![
            s.s.into(),
            s.state.x.into(),
            s.state.theta_mod().into(),
            s.state.vx.into(),
            s.state.vtheta.into(),
            traj.clairaut_drift[i].into(),
            traj.speed_drift[i].into(),
        ]);
    }
    emit(&table, g, Format::Csv, config)?;
    let summary = format!(
        "geodesic: {} samples, Clairaut drift {:.3e}, speed drift {:.3e}",
        traj.samples.len(),
        traj.max_clairaut_drift,
        traj.max_speed_drift
    );
    traj.certify()?;
    Ok(summary)
}

fn loop_table(lp: &Loop) -> Table {
    let mut t = Table::new(&["i", "x", "theta"]);
    for (i, (&x, &th)) in lp.x().iter().zip(lp.theta()).enumerate() {
        t.push(vec![i.into(), x.into(), th.into()]);
    }
    t
}

fn trace_table(trace: &[TraceRow]) -> Table {
    let mut t = Table::new(&["iter", "length", "residual"]);
    for r in trace {
        t.push(vec![r.iter.into(), r.length.into(), r.residual.into()]);
    }
    t
}

fn shorten(a: &ShortenArgs, g: &Global, config: &Value) -> CliResult<String> {
    let p = a.profile.build()?;
    let start = init_loop(a.init.with_default_seed(g.seed), a.n)?;
    let mut trace = vec![TraceRow {
        iter: 0,
        length: loop_length(&p, &start),
        residual: neck_core::shorten::loop_residual(&p, &start),
    }];
    let result =
        shorten_to_geodesic_with(&p, &start, ShortenOptions::new(a.tol, a.max_iter), |r| {
            trace.push(*r)
        });
    let (final_loop, outcome): (Loop, CliResult<ClosedGeodesic>) = match result {
        Ok(c) => (c.geodesic.clone(), Ok(c)),
        Err(NeckError::NotConverged {
            iterations,
            residual,
            last,
        }) => (
            *last,
            Err(CliError::Failed(format!(
                "shortening did not converge in {iterations} iterations (residual {residual:e})"
            ))),
        ),
        Err(e) => return Err(e.into()),
    };
    let format = g.format.unwrap_or(Format::Csv);
    match format {
        Format::Csv => {
            let mut w = sink(g.out.as_deref())?;
            loop_table(&final_loop).write_csv(&mut w, config)?;
            w.flush()?;
            let trace_file = a.trace.clone().or_else(|| g.out.as_deref().map(trace_path));
            if let Some(path) = trace_file {
                let mut w = sink(Some(&path))?;
                trace_table(&trace).write_csv(&mut w, config)?;
                w.flush()?;
            }
        }
        Format::Json => {
            let summary = outcome.as_ref().ok().map(|c| {
                json!({
                    "length": c.length,
                    "residual": c.residual,
                    "iterations": c.iterations,
                    "circle_x": c.circle_x,
                })
            });
            emit_json(
                &json!({
                    "config": config,
                    "converged": outcome.is_ok(),
                    "result": summary,
                    "loop": loop_table(&final_loop).to_json(),
                    "trace": trace_table(&trace).to_json(),
                }),
                g,
            )?;
        }
    }
    let closed = outcome?;
    if g.check {
        let mut failures = Vec::new();
        for w in trace.windows(2) {
            if w[1].length > w[0].length + 1e-12 {
                failures.push(format!("length increased at iteration {}", w[1].iter));
                break;
            }
        }
        if closed.geodesic.winding_number() != 1 {
            failures.push(format!(
                "winding number {}",
                closed.geodesic.winding_number()
            ));
        }
        if closed.residual > a.tol {
            failures.push(format!("residual {:e} > tol", closed.residual));
        }
        checks(failures)?;
    }
    Ok(format!(
        "shorten: length {:.12} after {} iterations, residual {:.3e}{}",
        closed.length,
        closed.iterations,
        closed.residual,
        closed
            .circle_x
            .map_or(String::new(), |x| format!(", circle at x = {x:.6}"))
    ))
}

#[derive(Debug, Serialize)]
struct ModuliOut<'a> {
    config: &'a Value,
    t: Option<f64>,
    length_min: f64,
    minimizers: &'a [f64],
    band: [f64; 2],
    is_interval: bool,
    x_star: f64,
    components: usize,
}

fn moduli(a: &ModuliArgs, g: &Global, config: &Value) -> CliResult<String> {
    let p = a.profile.build()?;
    let slice = minimizer_set_with(
        &p,
        MinimizerOptions {
            grid_step: a.grid_step,
            tol: a.tol,
            ..MinimizerOptions::default()
        },
    )?;
    match g.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(
            &ModuliOut {
                config,
                t: slice.t,
                length_min: slice.length_min,
                minimizers: &slice.minimizers,
                band: [slice.band.0, slice.band.1],
                is_interval: slice.is_interval,
                x_star: slice.x_star,
                components: slice.components,
            },
            g,
        )?,
        Format::Csv => {
            let mut t = Table::new(&["x"]);
            for &x in &slice.minimizers {
                t.push(vec![x.into()]);
            }
            emit(&t, g, Format::Csv, config)?;
        }
    }
    if g.check {
        let mut failures = Vec::new();
        if slice.components != 1 {
            failures.push(format!("{} minimizer components", slice.components));
        }
        if slice.is_interval {
            let ribbon = flat_ribbon_check(&p, slice.band, 1e-12);
            if !ribbon.pass {
                failures.push(format!(
                    "curvature {:e} inside the band at x = {}",
                    ribbon.max_abs_curvature, ribbon.worst_x
                ));
            }
        }
        checks(failures)?;
    }
    Ok(format!(
        "moduli: {} minimizers, band [{}, {}], length {:.12}",
        slice.minimizers.len(),
        slice.band.0,
        slice.band.1,
        slice.length_min
    ))
}

fn sweep(a: &SweepArgs, g: &Global, config: &Value) -> CliResult<String> {
    let base = NeckProfile::base(a.delta)?;
    let ts = linear_t_grid(a.tmin, a.tmax, a.samples, a.include_zero);
    let opts = SweepOptions {
        minimizer: MinimizerOptions {
            grid_step: a.grid_step,
            tol: a.tol,
            ..MinimizerOptions::default()
        },
        cross_check: a.cross_check.then(CrossCheckOptions::default),
    };
    let result = par_sweep(&base, &ts, &opts)?;
    let mut columns = vec![
        "t",
        "length_min",
        "x_star",
        "band_lo",
        "band_hi",
        "band_width",
    ];
    if a.cross_check {
        columns.push("shortened_length");
    }
    let mut table = Table::new(&columns);
    for r in &result.rows {
        let mut row: Vec<Cell> = vec![
            r.t.into(),
            r.length_min.into(),
            r.x_star.into(),
            r.band_lo.into(),
            r.band_hi.into(),
            r.band_width().into(),
        ];
        if let Some(cc) = r.cross_check {
            row.push(cc.length.into());
        }
        table.push(row);
    }
    emit(&table, g, Format::Csv, config)?;
    if g.check {
        let report = c0_bound_check(&result, a.eps);
        let mut failures: Vec<String> = report
            .violations
            .iter()
            .map(|t| format!("minimizers of t = {t} leave [-1-eps, 1+eps]"))
            .collect();
        for r in &result.rows {
            if (r.length_min - std::f64::consts::TAU).abs() > 1e-4 {
                failures.push(format!("length {} at t = {} is not 2π", r.length_min, r.t));
            }
        }
        if let Some(w) = report.warning {
            eprintln!("neck: warning: {w}");
        }
        checks(failures)?;
    }
    Ok(format!(
        "sweep: {} rows over t in [{}, {}]",
        result.rows.len(),
        a.tmin,
        a.tmax
    ))
}

fn converge(a: &ConvergeArgs, g: &Global, config: &Value) -> CliResult<String> {
    if a.n_min == 0 || a.n_max < a.n_min {
        return Err(CliError::Usage(format!(
            "need 1 <= n-min <= n-max, got {}..{}",
            a.n_min, a.n_max
        )));
    }
    let base = NeckProfile::base(a.delta)?;
    let ns: Vec<usize> = (a.n_min..=a.n_max).collect();
    let ts: Vec<f64> = ns.iter().map(|&n| a.t_limit + 1.0 / n as f64).collect();
    let st0 = GeodesicState::new(a.x0, a.theta0, a.vx, a.vtheta);
    let report = par_family_convergence(&base, &ts, a.t_limit, st0, a.horizon, a.step)?;
    let mut table = Table::new(&["n", "t", "c0", "c1", "certified"]);
    for (n, e) in ns.iter().zip(&report.entries) {
        table.push(vec![
            (*n).into(),
            e.t.into(),
            e.distance.c0.into(),
            e.distance.c1.into(),
            e.certified.into(),
        ]);
    }
    emit(&table, g, Format::Csv, config)?;
    if !report.all_certified {
        return Err(CliError::Failed(
            "a trajectory failed its conservation certificate".into(),
        ));
    }
    if g.check {
        let first = &report.entries[0].distance;
        let last = &report.entries[report.entries.len() - 1].distance;
        let mut failures = Vec::new();
        if report.entries.len() > 1 && !(last.c0 < first.c0 && last.c1 < first.c1) {
            failures.push(format!(
                "distance did not shrink: C0 {:e} -> {:e}, C1 {:e} -> {:e}",
                first.c0, last.c0, first.c1, last.c1
            ));
        }
        checks(failures)?;
    }
    let last = &report.entries[report.entries.len() - 1];
    Ok(format!(
        "converge: {} members, last C0 {:.3e}, C1 {:.3e}",
        report.entries.len(),
        last.distance.c0,
        last.distance.c1
    ))
}

fn verify(a: &VerifyArgs, g: &Global, config: &Value) -> CliResult<String> {
    let p = a.profile.build()?;
    let report = verify_profile_conditions(&p, a.dx)?;
    let mut table = Table::new(&["condition", "pass", "margin", "worst_x"]);
    for c in &report.checks {
        table.push(vec![
            c.name.into(),
            c.pass.into(),
            c.margin.into(),
            c.worst_x.into(),
        ]);
    }
    emit(&table, g, Format::Csv, config)?;
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} (margin {:e} at x = {})", c.name, c.margin, c.worst_x))
        .collect();
    if failed.is_empty() {
        Ok(format!(
            "verify-profile: {} conditions pass for {}",
            report.checks.len(),
            a.profile
        ))
    } else {
        Err(CliError::Failed(format!(
            "profile conditions failed: {}",
            failed.join("; ")
        )))
    }
}
