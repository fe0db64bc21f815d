//! `recip`: censuses of dihedral subgroups, orbit counts, low-lying runs and
//! equidistribution experiments, written as CSV rows or JSON reports.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use recip_core::census::{census_bounds, census_by_trace, census_cosh, constant_c, Census};
use recip_core::equidist::{discrepancy, mu_l_histogram, Grid, Orientation, DEFAULT_STEP};
use recip_core::hyp::{format_rational, Point};
use recip_core::lowlying::{lowlying_census_with_window, WINDOW};
use recip_core::orbit::{cosh_bound, count_curve, delsarte_ratio, Budget, OrbitOptions};
use recip_core::{builtin_group, load_group, Error, GroupSpec};

/// Bumped whenever a report changes shape; matches the shipped schemas.
const SCHEMA_VERSION: &str = "1";

#[derive(Parser, Debug)]
#[command(name = "recip", version, about = "Reciprocal geodesics and dihedral subgroups of Fuchsian lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conjugacy classes of maximal and non-maximal dihedral subgroups.
    #[command(allow_negative_numbers = true)]
    Census(CensusArgs),
    /// Orbit count of `i` in a ball about `i`, against the volume prediction.
    #[command(allow_negative_numbers = true)]
    Delsarte(DelsarteArgs),
    /// Dihedral classes of the free products `Gamma_k`.
    #[command(allow_negative_numbers = true)]
    Lowlying(LowlyingArgs),
    /// Histogram of reciprocal geodesics on the unit tangent bundle.
    #[command(allow_negative_numbers = true)]
    Equidist(EquidistArgs),
    /// The counting constant and its slope.
    Constant(ConstantArgs),
}

#[derive(Args, Debug)]
struct CensusArgs {
    /// Built-in name (psl2z, triangle237) or path to a group spec.
    #[arg(long, default_value = "psl2z")]
    group: String,
    /// Length bound.
    #[arg(long = "L", conflicts_with = "max_trace", required_unless_present = "max_trace")]
    l: Option<f64>,
    /// Trace bound, instead of a length bound.
    #[arg(long)]
    max_trace: Option<f64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct DelsarteArgs {
    #[arg(long, default_value = "psl2z")]
    group: String,
    /// Ball radius.
    #[arg(long = "R")]
    r: f64,
    /// Spacing of the count-curve rows.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct LowlyingArgs {
    /// Comma-separated list of `k`.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<u32>,
    #[arg(long = "L")]
    l: f64,
    /// Width of the growth-rate fitting window below `L`.
    #[arg(long, default_value_t = WINDOW)]
    window: f64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct EquidistArgs {
    #[arg(long = "L")]
    l: f64,
    /// Grid as `NXxNYxNA`.
    #[arg(long, default_value = "12x12x8")]
    bins: String,
    /// Arc-length sampling step.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[arg(long, value_enum, default_value_t = OrientationArg::Forward)]
    orientation: OrientationArg,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct ConstantArgs {
    #[arg(long, default_value = "psl2z")]
    group: String,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Output file; stdout when absent. In CSV mode the JSON report goes
    /// next to it with a `.json` extension.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "RECIP_THREADS")]
    threads: Option<usize>,
    /// Recorded in the report for reproducibility.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop with status "incomplete" past this many orbit points.
    #[arg(long)]
    max_points: Option<usize>,
    /// Stop with status "incomplete" past this many seconds.
    #[arg(long)]
    max_seconds: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrientationArg {
    Forward,
    Reversed,
    Symmetrized,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Forward => Orientation::Forward,
            OrientationArg::Reversed => Orientation::Reversed,
            OrientationArg::Symmetrized => Orientation::Symmetrized,
        }
    }
}

enum Failure {
    Usage(String),
    Data(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            e => Failure::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

/// A finished run: summary fields plus rows, the rows in CSV column order.
struct Report {
    summary: Map<String, Value>,
    header: &'static [&'static str],
    rows: Vec<Value>,
    /// CSV text for JSON nulls.
    null_text: &'static str,
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("--{name} must be a positive number, got {v}")))
    }
}

fn resolve_group(name: &str) -> Result<GroupSpec, Failure> {
    match builtin_group(name) {
        Ok(g) => Ok(g),
        Err(Error::UnknownGroup(_)) if Path::new(name).exists() => Ok(load_group(Path::new(name))?),
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

fn orbit_options(run: &RunArgs) -> Result<OrbitOptions, Failure> {
    if let Some(s) = run.max_seconds {
        positive("max-seconds", s)?;
    }
    Ok(OrbitOptions {
        budget: Budget {
            max_points: run.max_points,
            max_seconds: run.max_seconds,
        },
        ..OrbitOptions::default()
    })
}

fn run_config(command: &str, run: &RunArgs, params: Value) -> Value {
    let mut c = json!({
        "command": command,
        "format": match run.format { Format::Csv => "csv", Format::Json => "json" },
        "threads": run.threads,
        "seed": run.seed,
        "max_points": run.max_points,
        "max_seconds": run.max_seconds,
    });
    if let (Value::Object(c), Value::Object(p)) = (&mut c, params) {
        c.extend(p);
    }
    c
}

/// The resolved configuration embedded in every report.
fn config(command: &Command) -> Value {
    match command {
        Command::Census(a) => run_config("census", &a.run, json!({ "group": a.group, "L": a.l, "max_trace": a.max_trace })),
        Command::Delsarte(a) => run_config("delsarte", &a.run, json!({ "group": a.group, "R": a.r, "step": a.step })),
        Command::Lowlying(a) => run_config("lowlying", &a.run, json!({ "k": a.k, "L": a.l, "window": a.window })),
        Command::Equidist(a) => {
            let orientation: Orientation = a.orientation.into();
            run_config(
                "equidist",
                &a.run,
                json!({ "L": a.l, "bins": a.bins, "step": a.step, "orientation": orientation }),
            )
        }
        Command::Constant(a) => run_config("constant", &a.run, json!({ "group": a.group })),
    }
}

fn census_rows(c: &Census) -> Vec<Value> {
    c.classes
        .iter()
        .map(|k| {
            json!({
                "key": k.key,
                "length": k.length,
                "trace": k.trace.to_string(),
                "maximal": k.maximal,
                "fiber_count": k.fiber_count,
                "sigma_idx": k.witness.sigma,
                "sigmabar_idx": k.witness.sigma_bar,
            })
        })
        .collect()
}

fn cmd_census(a: &CensusArgs) -> Result<Report, Failure> {
    let spec = resolve_group(&a.group)?;
    let opts = orbit_options(&a.run)?;
    let (l, c) = match (a.l, a.max_trace) {
        (Some(l), _) => {
            let l = positive("L", l)?;
            (l, census_cosh(&spec, &cosh_bound(l)?, &opts)?)
        }
        (None, Some(x)) => {
            if !(x.is_finite() && x > 2.0) {
                return Err(Failure::Usage(format!("--max-trace must exceed 2, got {x}")));
            }
            ((x / 2.0).acosh(), census_by_trace(&spec, x, &opts)?)
        }
        (None, None) => return Err(Failure::Usage("one of --L or --max-trace is required".into())),
    };
    let bounds = census_bounds(&spec, l, &opts)?;
    let constant = constant_c(&spec)?;
    let ratio = constant
        .slope
        .as_ref()
        .and_then(|s| s.to_f64())
        .map(|s| c.len() as f64 / (s * l.exp()));
    let mut summary = Map::new();
    summary.insert("group".into(), json!(spec.name));
    summary.insert("L".into(), json!(l));
    summary.insert("count".into(), json!(c.len()));
    summary.insert("maximal_count".into(), json!(c.maximal_count()));
    summary.insert("raw_count".into(), json!(c.raw_count));
    summary.insert("approximate".into(), json!(c.approximate));
    summary.insert("warnings".into(), json!(c.warnings));
    summary.insert("bounds".into(), serde_json::to_value(&bounds).expect("bounds serialize"));
    summary.insert("C".into(), json!(format_rational(&constant.c)));
    summary.insert("slope".into(), json!(constant.slope.as_ref().map(format_rational)));
    summary.insert("ratio".into(), json!(ratio));
    Ok(Report {
        summary,
        header: &["key", "length", "trace", "maximal", "fiber_count", "sigma_idx", "sigmabar_idx"],
        rows: census_rows(&c),
        null_text: "",
    })
}

fn cmd_delsarte(a: &DelsarteArgs) -> Result<Report, Failure> {
    let spec = resolve_group(&a.group)?;
    let r = positive("R", a.r)?;
    let step = positive("step", a.step)?;
    let opts = orbit_options(&a.run)?;
    let i = Point::i(spec.mode);
    let report = delsarte_ratio(&spec, &i, &i, r, &opts)?;
    let n = (r / step).floor() as usize;
    let mut radii: Vec<f64> = (1..=n).map(|s| step * s as f64).collect();
    if radii.last().is_none_or(|&last| last < r) {
        radii.push(r);
    }
    let curve = count_curve(&spec, &i, &i, &radii, &OrbitOptions { punctured: true, ..opts })?;
    let mut summary = Map::new();
    summary.insert("group".into(), json!(spec.name));
    for (k, v) in serde_json::to_value(&report).expect("report serializes").as_object().unwrap() {
        summary.insert(k.clone(), v.clone());
    }
    Ok(Report {
        summary,
        header: &["L", "count"],
        rows: curve.samples.iter().map(|(l, n)| json!({ "L": l, "count": n })).collect(),
        null_text: "",
    })
}

fn cmd_lowlying(a: &LowlyingArgs) -> Result<Report, Failure> {
    let l = positive("L", a.l)?;
    let width = positive("window", a.window)?;
    if a.k.contains(&0) {
        return Err(Failure::Usage("--k values must be at least 1".into()));
    }
    let opts = orbit_options(&a.run)?;
    let mut ks = a.k.clone();
    ks.sort_unstable();
    ks.dedup();
    let mut rows = Vec::new();
    for k in ks {
        let r = lowlying_census_with_window(k, l, width, &opts)?;
        rows.push(serde_json::to_value(&r).expect("report serializes"));
    }
    let summary = Map::new();
    Ok(Report {
        summary,
        header: &["k", "L", "class_count", "height_bound", "delta_hat"],
        rows,
        null_text: "",
    })
}

fn cmd_equidist(a: &EquidistArgs) -> Result<Report, Failure> {
    let l = positive("L", a.l)?;
    let step = positive("step", a.step)?;
    let grid: Grid = a.bins.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let h = mu_l_histogram(l, grid, step, a.orientation.into())?;
    let d = discrepancy(&h)?;
    let mut summary = Map::new();
    summary.insert("L".into(), json!(l));
    summary.insert("total_mass".into(), json!(h.total_mass));
    summary.insert("discrepancy".into(), json!(d));
    let rows = h
        .bins
        .iter()
        .map(|b| {
            json!({
                "x_lo": b.x_range.0, "x_hi": b.x_range.1,
                "y_lo": b.y_range.0, "y_hi": b.y_range.1,
                "ang_lo": b.angle_range.0, "ang_hi": b.angle_range.1,
                "mass": b.mass, "ref_mass": b.ref_mass,
            })
        })
        .collect();
    Ok(Report {
        summary,
        header: &["x_lo", "x_hi", "y_lo", "y_hi", "ang_lo", "ang_hi", "mass", "ref_mass"],
        rows,
        // Only the cusp bin's open upper edge is null.
        null_text: "inf",
    })
}

fn cmd_constant(a: &ConstantArgs) -> Result<Report, Failure> {
    let spec = resolve_group(&a.group)?;
    let c = constant_c(&spec)?;
    let mut summary = Map::new();
    summary.insert("group".into(), json!(spec.name));
    for (k, v) in serde_json::to_value(&c).expect("constant serializes").as_object().unwrap() {
        summary.insert(k.clone(), v.clone());
    }
    let row = json!({ "C": summary["C"], "slope": summary["slope"] });
    Ok(Report {
        summary,
        header: &["C", "slope"],
        rows: vec![row],
        null_text: "",
    })
}

fn csv_body(report: &Report) -> Result<Vec<u8>, Failure> {
    let field = |v: &Value| match v {
        Value::Null => report.null_text.to_string(),
        Value::String(s) => s.clone(),
        v => v.to_string(),
    };
    let csv_err = |e: csv::Error| Failure::Data(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(report.header).map_err(csv_err)?;
    for row in &report.rows {
        w.write_record(report.header.iter().map(|h| field(&row[*h]))).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Failure::Data(e.to_string()))
}

fn emit(report: Report, config: Value, run: &RunArgs) -> Result<(), Failure> {
    let body = match run.format {
        Format::Csv => Some(csv_body(&report)?),
        Format::Json => None,
    };
    let mut doc = report.summary;
    doc.insert("config".into(), config);
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("status".into(), json!("complete"));
    match body {
        None => {
            doc.insert("rows".into(), Value::Array(report.rows));
            write_out(run.out.as_deref(), &pretty(&Value::Object(doc)))
        }
        Some(body) => {
            let summary = pretty(&Value::Object(doc));
            match &run.out {
                Some(p) => {
                    fs::write(p, body)?;
                    fs::write(p.with_extension("json"), summary)?;
                }
                None => {
                    io::stdout().write_all(&body)?;
                    io::stderr().write_all(&summary)?;
                }
            }
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("json serializes");
    s.push(b'\n');
    s
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn json_path(run: &RunArgs) -> Option<PathBuf> {
    match run.format {
        Format::Json => run.out.clone(),
        Format::Csv => run.out.as_ref().map(|p| p.with_extension("json")),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let args = match &cli.command {
        Command::Census(a) => &a.run,
        Command::Delsarte(a) => &a.run,
        Command::Lowlying(a) => &a.run,
        Command::Equidist(a) => &a.run,
        Command::Constant(a) => &a.run,
    };
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Data(e.to_string()))?;
    }
    let result = match &cli.command {
        Command::Census(a) => cmd_census(a),
        Command::Delsarte(a) => cmd_delsarte(a),
        Command::Lowlying(a) => cmd_lowlying(a),
        Command::Equidist(a) => cmd_equidist(a),
        Command::Constant(a) => cmd_constant(a),
    };
    match result {
        Ok(report) => emit(report, config(&cli.command), args),
        Err(Failure::Budget(reason)) => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "status": "incomplete",
                "reason": reason,
                "config": config(&cli.command),
            });
            write_out(json_path(args).as_deref(), &pretty(&doc))?;
            Err(Failure::Budget(reason))
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("incomplete: {m}");
            ExitCode::from(3)
        }
    }
}
