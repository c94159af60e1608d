//! Command-line front end: argument parsing, dispatch and report rendering.

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

pub use args::{Cli, Format};
pub use commands::execute;
pub use report::{Cell, RunReport, Table, Verdict};

/// Environment variable capping the worker-thread count.
pub const THREADS_VAR: &str = "POTENTIA_THREADS";

pub fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Table => report.to_table(),
        Format::Csv => report.to_csv(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    }
}

/// Parse `argv` (program name first), run the command and print its report.
///
/// Exit codes: 0 success, 1 usage or evaluation error, 2 failed verdict.
pub fn run_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                1
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return 1;
    }
    let started = Instant::now();
    match execute(&cli.command) {
        Ok(mut report) => {
            if !cli.deterministic {
                report.wall_time = Some(started.elapsed().as_secs_f64());
            }
            if write!(out, "{}", render(&report, cli.format)).is_err() {
                return 1;
            }
            if report.passed() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_to(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got `{value}`"))?;
    // A pool that already exists (repeated calls in one process) is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}
