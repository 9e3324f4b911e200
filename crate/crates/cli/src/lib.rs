//! Command-line front end: config layering, CSV and SVG output, and the
//! `solve`, `sweep`, `figure`, `optimize` and `oracle-check` commands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod svg;
pub mod table;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{Cli, Failure, EXIT_CONFIG, EXIT_ORACLE, EXIT_SOLVER};

pub const THREADS_ENV: &str = "COPYRIGHT_EQ_THREADS";

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure { code: EXIT_CONFIG, message: format!("{THREADS_ENV}={v} is not a positive integer") })?;
    // A pool may already exist when called twice in one process; the first setting wins.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match init_threads().and_then(|_| commands::run(cli, out)) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
