//! Batch front end: dataset ingestion, mining reports, benchmark grids and
//! clustering evaluation.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error,
//! 3 input or parse error, 4 presets disagreed during `bench`.

pub mod args;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod report;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Mine(a) => commands::run_mine(a),
        Command::Bench(a) => commands::run_bench(a),
        Command::Features(a) => commands::run_features(a),
        Command::Eval(a) => commands::run_eval(a),
    }
}

/// Applies `OPF_THREADS` (0 or unset = one worker per core).
pub fn configure_threads() -> CliResult<()> {
    let threads = match std::env::var("OPF_THREADS") {
        Ok(v) if !v.trim().is_empty() => v.trim().parse::<usize>().map_err(|_| {
            CliError::Config(format!(
                "OPF_THREADS must be a non-negative integer, got '{v}'"
            ))
        })?,
        _ => 0,
    };
    if threads > 0 {
        opf_core::init_thread_pool(threads)?;
    }
    Ok(())
}
