//! Command-line front end: `geodev point|field|trace|verify`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use geodev_core::directions::ROOT_TOL;
use geodev_core::fields::{trace_line, FieldKind, RootCount, TraceOptions};
use geodev_core::surface::SurfaceChart;
use serde::Serialize;
use serde_json::json;

use crate::field::{field_plot, FieldOptions};
use crate::io::{load_surface, to_json, write_file};
use crate::render::{field_svg, grid_csv};
use crate::report::{point_report, PointOptions};
use crate::verify::{verify_point, VerifyOptions, VerifyReport};

pub const FIELD_SCHEMA: &str = "geodev.field/1";
pub const TRACE_SCHEMA: &str = "geodev.trace/1";
pub const VERIFY_SCHEMA: &str = "geodev.verify/1";

#[derive(Debug, Parser)]
#[command(name = "geodev", version, about = "Third-order extrinsic geometry of parametric surfaces")]
pub struct Cli {
    /// Print the version to stderr before running.
    #[arg(long, global = true)]
    pub banner: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the geometry at one parameter point as JSON.
    Point(PointArgs),
    /// Scan a direction field, trace its lines and extract the discriminant.
    Field(FieldArgs),
    /// Trace one field line from a seed.
    Trace(TraceArgs),
    /// Run the oracle cross-checks at a point or over a grid.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Surface definition file.
    pub surface: PathBuf,
    /// Root acceptance tolerance of the direction solvers.
    #[arg(long, default_value_t = ROOT_TOL)]
    pub tol_root: f64,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub u: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v: f64,
    /// Frame angles for the deviation block (repeatable). Default 0, π/4, π/2, 3π/4.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    /// Append oracle cross-checks; exit 2 if any fails.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_verify: f64,
    /// JSON output (the only format of this command).
    #[arg(long)]
    pub json: bool,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let n = a.trim().parse().map_err(|_| format!("invalid grid size `{a}`"))?;
    let m = b.trim().parse().map_err(|_| format!("invalid grid size `{b}`"))?;
    Ok((n, m))
}

fn parse_kind(s: &str) -> Result<FieldKind, String> {
    FieldKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = FieldKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown field kind `{s}` (expected one of {})", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, value_parser = parse_kind, default_value = "extremal-frontal")]
    pub kind: FieldKind,
    /// Scan resolution.
    #[arg(long, value_parser = parse_grid, default_value = "50x50")]
    pub grid: (usize, usize),
    /// Field lines are seeded at the cell centers of this grid.
    #[arg(long, value_parser = parse_grid, default_value = "6x6")]
    pub seed_grid: (usize, usize),
    /// Trace step in parameter units. Default: 0.4% of the larger domain side.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Print the summary as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, value_parser = parse_kind, default_value = "extremal-frontal")]
    pub kind: FieldKind,
    #[arg(long, allow_hyphen_values = true)]
    pub u: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v: f64,
    /// Index into the sorted direction angles at the seed.
    #[arg(long, default_value_t = 0)]
    pub branch: usize,
    #[arg(long)]
    pub step: Option<f64>,
    /// Maximum parameter-space length. Default: twice the domain perimeter.
    #[arg(long)]
    pub max_len: Option<f64>,
    /// JSON output (the only format of this command).
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Check a single point; otherwise the interior nodes of `--grid`.
    #[arg(long, allow_hyphen_values = true, requires = "v")]
    pub u: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "u")]
    pub v: Option<f64>,
    #[arg(long, value_parser = parse_grid, default_value = "4x4")]
    pub grid: (usize, usize),
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_verify: f64,
    #[arg(long)]
    pub json: bool,
}

/// Outcome of a command: what to print and the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: unreadable or invalid file, singular point, bad flags. Exit 1.
    Input(String),
    /// Oracle cross-checks failed. Exit 2.
    Verification,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Verification => 2,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

const DEFAULT_THETAS: [f64; 4] = [
    0.0,
    std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_2,
    3.0 * std::f64::consts::FRAC_PI_4,
];

fn thetas_or_default(t: &[f64]) -> Vec<f64> {
    if t.is_empty() {
        DEFAULT_THETAS.to_vec()
    } else {
        t.to_vec()
    }
}

fn default_step(chart: &SurfaceChart) -> f64 {
    let d = chart.domain;
    0.004 * (d.u_max - d.u_min).max(d.v_max - d.v_min)
}

fn check_kind(chart: &SurfaceChart, kind: FieldKind) -> Result<(), Failure> {
    if kind.valid_for(chart.ambient_dim) {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "field kind {} is not defined for ambient dimension {}",
            kind.name(),
            chart.ambient_dim
        )))
    }
}

/// Runs a parsed command, writing its primary output to `out`.
pub fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    match &cli.command {
        Command::Point(a) => cmd_point(a, out),
        Command::Field(a) => cmd_field(a, out),
        Command::Trace(a) => cmd_trace(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

fn cmd_point(a: &PointArgs, out: &mut String) -> Result<(), Failure> {
    let chart = load_surface(&a.surface.surface).map_err(input)?;
    let opts = PointOptions {
        tol_root: a.surface.tol_root,
        verify: a.verify.then_some(VerifyOptions {
            tol_root: a.surface.tol_root,
            tol_verify: a.tol_verify,
            ..VerifyOptions::default()
        }),
    };
    let report = point_report(&chart, a.u, a.v, &thetas_or_default(&a.theta), &opts).map_err(input)?;
    out.push_str(&to_json(&report));
    match &report.verify {
        Some(v) if !v.passed => Err(Failure::Verification),
        _ => Ok(()),
    }
}

fn count_key(c: RootCount) -> String {
    match c {
        RootCount::Finite(n) => n.to_string(),
        RootCount::Infinite => "inf".into(),
        RootCount::Singular => "singular".into(),
    }
}

fn cmd_field(a: &FieldArgs, out: &mut String) -> Result<(), Failure> {
    let chart = load_surface(&a.surface.surface).map_err(input)?;
    check_kind(&chart, a.kind)?;
    let d = chart.domain;
    let trace = TraceOptions {
        step: a.step.unwrap_or_else(|| default_step(&chart)),
        max_len: 2.0 * ((d.u_max - d.u_min) + (d.v_max - d.v_min)),
        tol: a.surface.tol_root,
        ..TraceOptions::default()
    };
    let opts = FieldOptions {
        grid: a.grid,
        seed_grid: a.seed_grid,
        trace,
    };
    let plot = field_plot(&chart, a.kind, &opts).map_err(input)?;
    if let Some(p) = &a.svg {
        write_file(p, &field_svg(&plot)).map_err(input)?;
    }
    if let Some(p) = &a.csv {
        write_file(p, &grid_csv(&chart.name, &plot.scan)).map_err(input)?;
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for c in &plot.scan.cells {
        *counts.entry(count_key(c.count)).or_default() += 1;
    }
    let polylines = plot.discriminant.as_ref().map(|d| d.polylines.len());
    let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    if a.json {
        let summary = json!({
            "schema_version": FIELD_SCHEMA,
            "surface": chart.name,
            "kind": a.kind.name(),
            "grid": [a.grid.0, a.grid.1],
            "root_counts": counts,
            "field_lines": plot.lines.len(),
            "discriminant_polylines": polylines,
            "degenerate": plot.degenerate,
            "svg": path(&a.svg),
            "csv": path(&a.csv),
        });
        out.push_str(&to_json(&summary));
    } else {
        out.push_str(&format!("surface {} field {}\n", chart.name, a.kind.name()));
        let parts: Vec<String> = counts.iter().map(|(k, n)| format!("{k}: {n}")).collect();
        out.push_str(&format!("root counts  {}\n", parts.join(", ")));
        out.push_str(&format!("field lines  {}\n", plot.lines.len()));
        if let Some(n) = polylines {
            out.push_str(&format!("discriminant {n} polylines\n"));
        }
        if plot.degenerate {
            out.push_str("degenerate: all directions\n");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TraceOut<'a> {
    schema_version: &'a str,
    surface: &'a str,
    kind: &'a str,
    seed: [f64; 2],
    branch: usize,
    termination: &'a str,
    points: Vec<[f64; 2]>,
    angles: &'a [f64],
    residuals: &'a [f64],
    reversed: &'a [bool],
}

fn cmd_trace(a: &TraceArgs, out: &mut String) -> Result<(), Failure> {
    let chart = load_surface(&a.surface.surface).map_err(input)?;
    check_kind(&chart, a.kind)?;
    let d = chart.domain;
    let opts = TraceOptions {
        step: a.step.unwrap_or_else(|| default_step(&chart)),
        max_len: a
            .max_len
            .unwrap_or(2.0 * ((d.u_max - d.u_min) + (d.v_max - d.v_min))),
        tol: a.surface.tol_root,
        ..TraceOptions::default()
    };
    let tr = trace_line(&chart, a.kind, (a.u, a.v), a.branch, &opts).map_err(input)?;
    let body = TraceOut {
        schema_version: TRACE_SCHEMA,
        surface: &chart.name,
        kind: a.kind.name(),
        seed: [a.u, a.v],
        branch: a.branch,
        termination: tr.termination.as_str(),
        points: tr.points.iter().map(|p| [p.0, p.1]).collect(),
        angles: &tr.angles,
        residuals: &tr.residuals,
        reversed: &tr.reversed,
    };
    out.push_str(&to_json(&body));
    Ok(())
}

#[derive(Serialize)]
struct VerifyPoint {
    u: f64,
    v: f64,
    #[serde(flatten)]
    report: VerifyReport,
}

fn cmd_verify(a: &VerifyArgs, out: &mut String) -> Result<(), Failure> {
    let chart = load_surface(&a.surface.surface).map_err(input)?;
    let opts = VerifyOptions {
        tol_root: a.surface.tol_root,
        tol_verify: a.tol_verify,
        ..VerifyOptions::default()
    };
    let points: Vec<(f64, f64)> = match (a.u, a.v) {
        (Some(u), Some(v)) => vec![(u, v)],
        _ => {
            let (n, m) = a.grid;
            let d = chart.domain;
            (1..=m)
                .flat_map(|j| {
                    (1..=n).map(move |i| {
                        (
                            d.u_min + i as f64 / (n + 1) as f64 * (d.u_max - d.u_min),
                            d.v_min + j as f64 / (m + 1) as f64 * (d.v_max - d.v_min),
                        )
                    })
                })
                .collect()
        }
    };
    let thetas = thetas_or_default(&a.theta);
    let mut results = Vec::new();
    for &(u, v) in &points {
        let report = verify_point(&chart, u, v, &thetas, &opts).map_err(input)?;
        results.push(VerifyPoint { u, v, report });
    }
    let passed = results.iter().all(|r| r.report.passed);
    if a.json {
        let body = json!({
            "schema_version": VERIFY_SCHEMA,
            "surface": chart.name,
            "passed": passed,
            "points": results,
        });
        out.push_str(&to_json(&body));
    } else {
        for r in &results {
            for c in &r.report.checks {
                let value = c.value.map_or("-".to_string(), |x| format!("{x:.3e}"));
                out.push_str(&format!(
                    "{} ({:.6}, {:.6}) {} value {} limit {:e}{}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    r.u,
                    r.v,
                    c.name,
                    value,
                    c.limit,
                    c.detail.as_ref().map_or(String::new(), |d| format!(" ({d})"))
                ));
            }
        }
        out.push_str(if passed { "verification passed\n" } else { "verification FAILED\n" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.banner {
        eprintln!("geodev {}", env!("CARGO_PKG_VERSION"));
    }
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => 0,
        Err(f) => {
            if let Failure::Input(msg) = &f {
                eprintln!("error: {msg}");
            }
            f.exit_code()
        }
    }
}

