mod args;
mod commands;
mod config;
mod error;
mod format;
mod manifest;
mod output;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use crate::error::{CliError, CliResult};

const THREADS_VAR: &str = "SUBSETBENCH_THREADS";

/// Size the global pool from the environment; 0 or unset means automatic.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a non-negative integer, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("subsetbench: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
