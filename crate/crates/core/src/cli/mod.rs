//! Command-line front end: argument parsing, report emission and exit codes.
//!
//! Exit codes: 0 success, 1 property failure, 2 input error, 3 slope
//! symmetry failure on a user quiver (partial output still written).

mod cache;
mod quiverrun;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::kronecker::{check_properties, pentagon_checks, KroneckerReport};
use crate::quiver::kronecker_quiver;
use crate::skewseries::{Fault, SeriesContext};
use crate::wallcross::IdentityCheck;

pub use quiverrun::QuiverReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SYMMETRY: i32 = 3;

/// Caps the worker pool used by the engine.
pub const THREADS_ENV: &str = "QDILOG_THREADS";

#[derive(Parser, Debug)]
#[command(name = "qdilog", version, about = "Exact quantum dilogarithm identities from quiver wall-crossing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the five-term identity up to weight N.
    Pentagon {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
    },
    /// Factorization table and property checks for the m-Kronecker quiver.
    Kronecker {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for cached reports.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Semistable series and DT table of a quiver given as JSON.
    Quiver {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_INPUT;
    }
    match cli.command {
        Command::Pentagon { degree } => cmd_pentagon(degree, None, stdout, stderr),
        Command::Kronecker { m, degree, format, out, cache } => {
            cmd_kronecker(m, degree, format, out.as_deref(), cache.as_deref(), stdout, stderr)
        }
        Command::Quiver { file, degree, format, out } => {
            quiverrun::cmd_quiver(&file, degree, format, out.as_deref(), stdout, stderr)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn engine_error(stderr: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    EXIT_INPUT
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), i32> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            EXIT_INPUT
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|_| EXIT_INPUT),
    }
}

fn write_checks(checks: &[IdentityCheck], w: &mut dyn Write) {
    for c in checks {
        let _ = writeln!(w, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
        if let Some(d) = &c.witness {
            let _ = writeln!(w, "     first difference at t^{}", d.monomial);
            let _ = writeln!(w, "       left:  {}", d.left);
            let _ = writeln!(w, "       right: {}", d.right);
        }
    }
}

/// Five-term identity up to weight `degree`, optionally on a faulted engine.
#[doc(hidden)]
pub fn cmd_pentagon(degree: u32, fault: Option<Fault>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (q, st) = kronecker_quiver(1).expect("m = 1 is valid");
    let ctx = match fault {
        None => SeriesContext::new(q, st, degree),
        Some(f) => SeriesContext::with_fault(q, st, degree, f),
    };
    let checks = match ctx.and_then(|ctx| pentagon_checks(&ctx)) {
        Ok(c) => c,
        Err(e) => return engine_error(stderr, &e),
    };
    let _ = writeln!(stdout, "five-term identity up to weight {degree}");
    write_checks(&checks, stdout);
    if checks.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "five-term identity failed");
        EXIT_PROPERTY
    }
}

/// CSV with one row per `(a, b)`.
pub fn kronecker_csv(report: &KroneckerReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["a", "b", "P", "dt_min_exp_s", "dt_coeffs", "stable", "imaginary", "real_root", "violation"]);
    for e in &report.entries {
        let p = serde_json::to_string(&e.p).unwrap_or_default();
        let dt = serde_json::to_value(&e.dt).unwrap_or_default();
        let _ = w.write_record([
            e.a.to_string(),
            e.b.to_string(),
            p,
            dt["min_exp_s"].to_string(),
            dt["coeffs"].to_string(),
            e.stable.to_string(),
            e.imaginary.to_string(),
            e.real_root.to_string(),
            e.violation.clone().unwrap_or_default(),
        ]);
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn format_kronecker(report: &KroneckerReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Csv => kronecker_csv(report),
        Format::Pretty => report.pretty(),
    }
}

fn cmd_kronecker(
    m: u32,
    degree: u32,
    format: Format,
    out: Option<&Path>,
    cache_dir: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let report = match cache_dir {
        Some(dir) => cache::load_or_compute(dir, m, degree, stderr),
        None => check_properties(m, degree),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return engine_error(stderr, &e),
    };
    if let Err(code) = emit(&format_kronecker(&report, format), out, stdout, stderr) {
        return code;
    }
    if report.all_pass() {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "failing properties: {}", report.failing().join(", "));
        EXIT_PROPERTY
    }
}
