//! The `centralizer-lab` command line.
//!
//! Exit codes: 0 pass, 1 check failure or flow blow-up, 2 usage or input error.

pub mod io;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{invariants, vector_distance, vector_norm};
use crate::linalg::c64;
use crate::sampling;
use crate::suite::{self, CheckReport, Report, SuiteConfig};
use crate::toda::{phi, phi_inverse, FlowFrame, TodaPoint};
use crate::tolerances::Tolerances;
use crate::ChevalleyData;

use io::{format_complex, ComplexLit, GroupJson, JsonMatrix, PointJson, PointLit};

pub const THREADS_ENV: &str = "CENTRALIZER_LAB_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "centralizer-lab",
    version,
    about = "Seeded numerical checks for the universal centralizer and the Kostant-Toda lattice of sl_n",
    after_help = "Threshold overrides: --tol.<name> <value>, where <name> is a tolerance \
                  (eig, minor, exp, chamber, kernel, section, stabilizer, triangular, torus, \
                  centralizing, lstsq, fd_step, root_min) or a check name from `check`.\n\
                  Worker threads are capped by CENTRALIZER_LAB_THREADS."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the property suites of every module.
    Check(CheckArgs),
    /// Evaluate one Toda flow at a list of times.
    Flow(FlowArgs),
    /// Embed a Toda point into the universal centralizer and map it back.
    Embed(EmbedArgs),
    /// Check the symplectic coordinates on sampled points.
    Cjl(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Matrix size, 2 to 8.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// JSON file with any of: n, seed, samples, tolerances, only, i, t, point, format.
    #[arg(long, value_name = "JSON-FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Add wall time to reports; output is then no longer reproducible byte for byte.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Restrict to a check or module name; repeatable.
    #[arg(long)]
    only: Vec<String>,
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Flow label, 1 to n-1.
    #[arg(long)]
    i: Option<usize>,
    /// Comma-separated times; complex values as `re+imj`.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    t: Option<String>,
    /// Initial point as JSON `{"diag": [...], "roots": [...]}`; a seeded sample of V otherwise.
    #[arg(long, value_name = "JSON")]
    point: Option<String>,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_name = "JSON")]
    point: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    only: Vec<String>,
    i: Option<usize>,
    t: Option<Vec<ComplexLit>>,
    point: Option<PointLit>,
    format: Option<Format>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub i: usize,
    pub t_list: Vec<Complex64>,
    pub point: Option<PointLit>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub timings: bool,
}

pub const DEFAULT_N: usize = 3;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 100;

/// Splits `--tol.<name> <v>` and `--tol.<name>=<v>` out of the argument list.
type Overrides = Vec<(String, f64)>;

fn extract_tolerances(args: Vec<OsString>) -> Result<(Vec<OsString>, Overrides)> {
    let mut rest = Vec::with_capacity(args.len());
    let mut tols = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(text) = arg.to_str().and_then(|s| s.strip_prefix("--tol.")) else {
            rest.push(arg);
            continue;
        };
        let (name, value) = match text.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .and_then(|v| v.into_string().ok())
                    .ok_or_else(|| Error::InvalidConfig(format!("--tol.{text} needs a value")))?;
                (text.to_string(), v)
            }
        };
        let v: f64 = value
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("--tol.{name}: bad value {value:?}")))?;
        tols.push((name, v));
    }
    Ok((rest, tols))
}

fn apply_tolerance(cfg: &mut SuiteConfig, name: &str, value: f64) -> Result<()> {
    if cfg.tolerances.set(name, value)? {
        return Ok(());
    }
    if suite::check_names().contains(&name) {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidConfig(format!("threshold {name} must be finite and >= 0")));
        }
        cfg.thresholds.insert(name.to_string(), value);
        return Ok(());
    }
    Err(Error::InvalidConfig(format!("unknown tolerance or check {name:?}")))
}

fn read_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("malformed config {}: {e}", path.display())))
}

fn parse_t_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(io::parse_complex).collect()
}

fn parse_point(s: &str) -> Result<PointLit> {
    serde_json::from_str(s).map_err(|e| Error::InvalidConfig(format!("malformed point: {e}")))
}

fn resolve(
    common: &CommonArgs,
    tols: &[(String, f64)],
    only: &[String],
    i: Option<usize>,
    t: Option<&str>,
    point: Option<&str>,
) -> Result<RunConfig> {
    let file = match &common.config {
        Some(p) => read_config(p)?,
        None => FileConfig::default(),
    };
    let n = common.n.or(file.n).unwrap_or(DEFAULT_N);
    let seed = common.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let samples = common.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let mut suite = SuiteConfig::new(n, seed, samples);
    suite.tolerances = Tolerances::default();
    for (name, v) in &file.tolerances {
        apply_tolerance(&mut suite, name, *v)?;
    }
    for (name, v) in tols {
        apply_tolerance(&mut suite, name, *v)?;
    }
    suite.only = if only.is_empty() { file.only } else { only.to_vec() };
    let t_list = match (t, file.t) {
        (Some(s), _) => parse_t_list(s)?,
        (None, Some(list)) => list.iter().map(ComplexLit::value).collect::<Result<_>>()?,
        (None, None) => vec![c64(0.0, 0.0), c64(0.5, 0.0), c64(1.0, 0.0)],
    };
    let point = match point {
        Some(s) => Some(parse_point(s)?),
        None => file.point,
    };
    Ok(RunConfig {
        suite,
        i: i.or(file.i).unwrap_or(1),
        t_list,
        point,
        format: common.format.or(file.format),
        out: common.out.clone(),
        timings: common.timings,
    })
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| Error::InvalidConfig(format!("{THREADS_ENV}={raw:?} is not a positive integer")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Errors caused by the request rather than by the mathematics.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidConfig(_)
            | Error::UnsupportedRank(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidElement(_)
            | Error::NotInV { .. }
            | Error::NotInTorus
            | Error::NotInXiPlusB { .. }
    )
}

fn exit_for(e: &Error) -> i32 {
    if is_input_error(e) {
        EXIT_USAGE
    } else {
        EXIT_FAIL
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let (args, tols) = match extract_tolerances(args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let result = match &cli.command {
        Command::Check(a) => resolve(&a.common, &tols, &a.only, None, None, None).and_then(cmd_check),
        Command::Cjl(a) => resolve(a, &tols, &[], None, None, None).and_then(cmd_cjl),
        Command::Flow(a) => resolve(&a.common, &tols, &[], a.i, a.t.as_deref(), a.point.as_deref())
            .and_then(cmd_flow),
        Command::Embed(a) => {
            resolve(&a.common, &tols, &[], None, None, a.point.as_deref()).and_then(cmd_embed)
        }
    };
    match result {
        Ok(code) => code,
        // The reader went away; nothing left to report to.
        Err(Error::Output {
            kind: std::io::ErrorKind::BrokenPipe,
            ..
        }) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn emit_report(cfg: &RunConfig, report: &Report) -> Result<i32> {
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => io::write_json(cfg.out.as_deref(), report)?,
        Format::Csv => write_report_csv(cfg.out.as_deref(), &report.checks)?,
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "FAIL {}: max deviation {} > {:e}{}",
            c.name,
            c.max_deviation.map_or("none".into(), |v| format!("{v:e}")),
            c.tolerance,
            c.note.as_deref().map_or(String::new(), |s| format!(" ({s})"))
        );
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn write_report_csv(out: Option<&Path>, checks: &[CheckReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(io::sink(out)?);
    let csv_err = |e: csv::Error| io::io_error(e.into());
    w.write_record([
        "name", "module", "max_deviation", "tolerance", "comparison", "pass", "samples",
        "evaluated", "skipped", "failed", "note",
    ])
    .map_err(csv_err)?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            c.module.clone(),
            c.max_deviation.map_or(String::new(), |v| format!("{v:e}")),
            format!("{:e}", c.tolerance),
            c.comparison.to_string(),
            c.pass.to_string(),
            c.samples.to_string(),
            c.evaluated.to_string(),
            c.skipped.to_string(),
            c.failed.to_string(),
            c.note.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io::io_error)
}

pub fn cmd_check(cfg: RunConfig) -> Result<i32> {
    let start = Instant::now();
    let mut report = suite::run(&cfg.suite)?;
    if cfg.timings {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    emit_report(&cfg, &report)
}

pub fn cmd_cjl(cfg: RunConfig) -> Result<i32> {
    let start = Instant::now();
    let mut report = suite::run_cjl(&cfg.suite)?;
    if cfg.timings {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    emit_report(&cfg, &report)
}

fn initial_point(cfg: &RunConfig, chev: &ChevalleyData) -> Result<TodaPoint> {
    let p = match &cfg.point {
        Some(lit) => lit.resolve(chev)?,
        None => sampling::v_point(&mut sampling::stream(cfg.suite.seed, "cli-point", 0), chev)?,
    };
    // Surfaces the chamber gap for inputs outside V.
    crate::kostant::theta(chev, &p.to_matrix())?;
    Ok(p)
}

#[derive(Debug, Serialize)]
struct FlowRow {
    t: [f64; 2],
    status: String,
    diag: Option<Vec<[f64; 2]>>,
    roots: Option<Vec<[f64; 2]>>,
    invariants: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize)]
struct FlowJson {
    command: &'static str,
    n: usize,
    i: usize,
    initial: PointJson,
    max_invariant_drift: f64,
    rows: Vec<FlowRow>,
}

pub fn cmd_flow(cfg: RunConfig) -> Result<i32> {
    let chev = ChevalleyData::with_tolerances(cfg.suite.n, cfg.suite.tolerances)?;
    let n = chev.n();
    if cfg.i == 0 || cfg.i > chev.rank() {
        return Err(Error::InvalidConfig(format!("flow index {} outside 1..={}", cfg.i, chev.rank())));
    }
    let p = initial_point(&cfg, &chev)?;
    let frame = FlowFrame::new(&chev, &p)?;
    let f0 = invariants(&p.to_matrix());
    let results: Vec<Result<TodaPoint>> = cfg
        .t_list
        .par_iter()
        .map(|&t| frame.evaluate(&chev, cfg.i, t).map(|(q, _)| q))
        .collect();
    let drift_tol = cfg
        .suite
        .thresholds
        .get("conservation")
        .copied()
        .unwrap_or(1e-8);
    let mut drift: f64 = 0.0;
    let mut blown_up = false;
    let mut rows = Vec::with_capacity(results.len());
    for (t, r) in cfg.t_list.iter().zip(results) {
        match r {
            Ok(q) => {
                let f = invariants(&q.to_matrix());
                drift = drift.max(vector_distance(&f, &f0) / (1.0 + vector_norm(&f0)));
                rows.push(FlowRow {
                    t: [t.re, t.im],
                    status: "ok".into(),
                    diag: Some(io::vector_json(&q.diag)),
                    roots: Some(io::vector_json(&q.roots)),
                    invariants: Some(io::vector_json(&f)),
                });
            }
            Err(Error::NotInGStar { minor }) => {
                blown_up = true;
                rows.push(FlowRow {
                    t: [t.re, t.im],
                    status: format!("NotInGStar(minor={minor})"),
                    diag: None,
                    roots: None,
                    invariants: None,
                });
            }
            Err(e) => return Err(e),
        }
    }
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => write_flow_csv(cfg.out.as_deref(), n, &rows)?,
        Format::Json => io::write_json(
            cfg.out.as_deref(),
            &FlowJson {
                command: "flow",
                n,
                i: cfg.i,
                initial: (&p).into(),
                max_invariant_drift: drift,
                rows,
            },
        )?,
    }
    if blown_up {
        eprintln!("flow left G* at one or more times");
        return Ok(EXIT_FAIL);
    }
    if drift > drift_tol {
        eprintln!("invariants drifted by {drift:e} > {drift_tol:e}");
        return Ok(EXIT_FAIL);
    }
    Ok(EXIT_PASS)
}

fn write_flow_csv(out: Option<&Path>, n: usize, rows: &[FlowRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(io::sink(out)?);
    let csv_err = |e: csv::Error| io::io_error(e.into());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|k| format!("diag_{k}")));
    header.extend((1..n).map(|k| format!("root_{k}")));
    header.extend((1..n).map(|k| format!("F_{k}")));
    header.push("status".into());
    w.write_record(&header).map_err(csv_err)?;
    let text = |v: &[f64; 2]| format_complex(c64(v[0], v[1]));
    for row in rows {
        let mut rec = vec![text(&row.t)];
        for (cells, len) in [(&row.diag, n), (&row.roots, n - 1), (&row.invariants, n - 1)] {
            match cells {
                Some(v) => rec.extend(v.iter().map(text)),
                None => rec.extend(std::iter::repeat_n(String::new(), len)),
            }
        }
        rec.push(row.status.clone());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io::io_error)
}

#[derive(Debug, Serialize)]
struct EmbedJson {
    command: &'static str,
    n: usize,
    point: PointJson,
    g: GroupJson,
    x: JsonMatrix,
    roundtrip_error: f64,
    tolerance: f64,
    pass: bool,
}

pub fn cmd_embed(cfg: RunConfig) -> Result<i32> {
    let chev = ChevalleyData::with_tolerances(cfg.suite.n, cfg.suite.tolerances)?;
    let p = initial_point(&cfg, &chev)?;
    let z = phi(&chev, &p)?;
    let back = phi_inverse(&chev, &z)?;
    let err = back.distance(&p) / (1.0 + p.to_matrix().frobenius_norm());
    let tol = cfg
        .suite
        .thresholds
        .get("phi_roundtrip")
        .copied()
        .unwrap_or(1e-8);
    let report = EmbedJson {
        command: "embed",
        n: chev.n(),
        point: (&p).into(),
        g: GroupJson::new(&z.g),
        x: io::matrix_json(&z.x),
        roundtrip_error: err,
        tolerance: tol,
        pass: err <= tol,
    };
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => io::write_json(cfg.out.as_deref(), &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::sink(cfg.out.as_deref())?);
            let csv_err = |e: csv::Error| io::io_error(e.into());
            w.write_record(["part", "row", "col", "value"]).map_err(csv_err)?;
            for (part, m) in [("g", &*z.g), ("x", &z.x)] {
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        w.write_record([
                            part.to_string(),
                            r.to_string(),
                            c.to_string(),
                            format_complex(m[(r, c)]),
                        ])
                        .map_err(csv_err)?;
                    }
                }
            }
            w.write_record(["roundtrip_error", "", "", &format!("{err:e}")])
                .map_err(csv_err)?;
            w.flush().map_err(io::io_error)?;
        }
    }
    if !report.pass {
        eprintln!("roundtrip error {err:e} > {tol:e}");
        let _ = std::io::stderr().flush();
        return Ok(EXIT_FAIL);
    }
    Ok(EXIT_PASS)
}
