use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use phasekit::config::MethodKind;
use phasekit::scan::ED_ENERGY_TOL;
use phasekit::{
    find_multicritical, run_scan, run_selfcheck, trace_boundary, write_csv, Axis, Settings,
    TraceMethod,
};
use phasekit_core::ed_full::{converge_nmax, finite_size_label, finite_size_orders, EDResult};
use phasekit_core::{ModelParams, OrderParams, PhaseLabel};
use serde::Serialize;

/// Ground-state phase diagram of the Dicke-Ising chain.
#[derive(Debug, Parser)]
#[command(name = "phasekit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate a J × g grid and write CSV.
    #[command(allow_negative_numbers = true)]
    Scan(Common),
    /// Locate phase boundaries along g for each J and write JSON.
    #[command(allow_negative_numbers = true)]
    Trace(Common),
    /// Bisect the J bracket for the change of transition order.
    #[command(allow_negative_numbers = true)]
    Multicritical(Common),
    /// Exact diagonalization of the full model at one point.
    #[command(allow_negative_numbers = true)]
    EdPoint(EdPointArgs),
    /// Run the quick invariant checks.
    Selfcheck,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    settings: Settings,
}

#[derive(Debug, Args)]
struct EdPointArgs {
    #[arg(long)]
    g: f64,
    #[arg(long, default_value_t = 0.0)]
    j: f64,
    /// Expand around the mean-field photon amplitude.
    #[arg(long)]
    displaced: bool,
    #[command(flatten)]
    settings: Settings,
}

enum Outcome {
    Clean,
    PointFailures,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] anyhow::Error),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::PointFailures) => ExitCode::from(2),
        Err(e) => {
            eprintln!("phasekit: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<Outcome, Failure> {
    match cmd {
        Cmd::Scan(c) => with_pool(c.settings, scan),
        Cmd::Trace(c) => with_pool(c.settings, trace),
        Cmd::Multicritical(c) => with_pool(c.settings, multicritical),
        Cmd::EdPoint(a) => {
            let (g, j, displaced) = (a.g, a.j, a.displaced);
            with_pool(a.settings, move |s| ed_point(s, g, j, displaced))
        }
        Cmd::Selfcheck => selfcheck(),
    }
}

fn with_pool<F>(settings: Settings, f: F) -> Result<Outcome, Failure>
where
    F: FnOnce(&Settings) -> Result<Outcome, Failure> + Send,
{
    let s = settings.with_file().map_err(usage)?;
    if s.threads == Some(0) {
        return Err(usage("--threads must be positive"));
    }
    let pool = phasekit::parallel::pool(s.threads).context("building the thread pool")?;
    pool.install(|| f(&s))
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).context("writing JSON")?;
    writeln!(w).context("writing JSON")?;
    w.flush().context("writing JSON")?;
    Ok(())
}

fn scan(s: &Settings) -> Result<Outcome, Failure> {
    let spec = s.scan_spec();
    let records = run_scan(&spec).map_err(usage)?;
    let w = sink(s.out.as_deref())?;
    write_csv(&records, w).context("writing CSV")?;
    let failed = records.iter().filter(|r| r.is_error()).count();
    if failed > 0 {
        eprintln!("phasekit: {failed} of {} points failed", records.len());
        return Ok(Outcome::PointFailures);
    }
    Ok(Outcome::Clean)
}

fn trace(s: &Settings) -> Result<Outcome, Failure> {
    let js = s
        .j_axis(Axis::new(-0.6, 0.6, 13))
        .validate("J")
        .map_err(usage)?
        .values();
    let t = s.tolerances();
    t.validate().map_err(usage)?;
    let method = match s.method.unwrap_or(MethodKind::MeanField) {
        MethodKind::MeanField => TraceMethod::MeanField {
            coarse: s
                .g_axis(Axis::new(0.0, 1.5, 151))
                .validate("g")
                .map_err(usage)?,
        },
        MethodKind::Effective => TraceMethod::Effective(s.chain_backend()),
        MethodKind::EdFull => return Err(usage("trace supports mean-field and effective methods")),
    };
    let entries = trace_boundary(s.template(), method, &js, t);
    write_json(&entries, s.out.as_deref())?;
    Ok(if entries.iter().any(|e| e.is_error()) {
        Outcome::PointFailures
    } else {
        Outcome::Clean
    })
}

fn multicritical(s: &Settings) -> Result<Outcome, Failure> {
    let bracket = (s.j_min.unwrap_or(0.25), s.j_max.unwrap_or(1.0));
    if bracket.0.partial_cmp(&bracket.1) != Some(std::cmp::Ordering::Less) {
        return Err(usage("the J bracket needs j-min < j-max"));
    }
    let t = s.tolerances();
    t.validate().map_err(usage)?;
    let report = find_multicritical(s.template(), s.chain_backend(), bracket, t);
    write_json(&report, s.out.as_deref())?;
    Ok(if report.is_error() {
        Outcome::PointFailures
    } else {
        Outcome::Clean
    })
}

#[derive(Serialize)]
struct EdPointReport {
    params: ModelParams,
    label: PhaseLabel,
    orders: OrderParams,
    result: EDResult,
}

fn ed_point(s: &Settings, g: f64, j: f64, displaced: bool) -> Result<Outcome, Failure> {
    let params = s.template().with_g(g).with_j(j);
    let mut config = s.ed_config().validate().map_err(usage)?;
    if displaced {
        config = config
            .with_mean_field_shift(params, s.tolerances())
            .map_err(usage)?;
    }
    let result = match converge_nmax(params, config, ED_ENERGY_TOL) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("phasekit: {e}");
            return Ok(Outcome::PointFailures);
        }
    };
    let label = match finite_size_label(&result, s.tolerances()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("phasekit: {e}");
            return Ok(Outcome::PointFailures);
        }
    };
    let report = EdPointReport {
        params,
        label,
        orders: finite_size_orders(&result),
        result,
    };
    write_json(&report, s.out.as_deref())?;
    Ok(Outcome::Clean)
}

fn selfcheck() -> Result<Outcome, Failure> {
    let outcomes = run_selfcheck();
    for o in &outcomes {
        println!(
            "{} {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    Ok(if outcomes.iter().all(|o| o.passed) {
        Outcome::Clean
    } else {
        Outcome::PointFailures
    })
}
