//! Command-line front end for the invariant library.
//!
//! The binary parses one subcommand, runs the corresponding library
//! operations, and emits a single table as CSV (default) or JSON.  Errors
//! go to standard error, never into the data stream.  Exit codes: `0`
//! success, `1` verdict failure, `2` usage error, `3` numeric refusal.
//!
//! `SCV_WORKERS` caps the data-parallel worker count.  It changes timing
//! only: every random stream is counter-based, so output bytes are
//! identical for identical arguments and seeds at any worker count.

pub mod commands;
pub mod parse;
pub mod report;
pub mod suite;

use clap::Parser;

use commands::{execute, Cli};

/// Applies `SCV_WORKERS` before any parallel region spins up.  Returns an
/// error message for a malformed value.
fn configure_workers() -> Result<(), String> {
    let raw = match std::env::var("SCV_WORKERS") {
        Ok(v) => v,
        Err(_) => return Ok(()),
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("SCV_WORKERS must be a positive integer, got '{raw}'"))?;
    #[cfg(feature = "parallel")]
    {
        // A second initialization in the same process is harmless: the pool
        // is already running and results do not depend on its width.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

/// Full program run on an argument vector; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    if let Err(msg) = configure_workers() {
        eprintln!("error: {msg}");
        return 2;
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = report::emit(&outcome.table, cli.format, cli.out.as_deref()) {
                eprintln!("error: {e}");
                return 3;
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
