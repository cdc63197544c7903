mod args;
mod commands;
mod error;
mod input;
mod manifest;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use crate::args::Cli;
use crate::error::{CliError, CliResult};
use crate::manifest::{config_hash, RunManifest};

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("TRIWORK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("TRIWORK_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn execute(cli: &Cli) -> CliResult<()> {
    init_threads()?;
    let start = Instant::now();
    let outcome = commands::run(&cli.command, cli.degrees)?;
    let wall_time = start.elapsed().as_secs_f64();
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&outcome.results).expect("JSON values serialize")
        );
    } else {
        print!("{}", outcome.text);
    }
    if let Some(path) = &cli.manifest {
        let m = RunManifest {
            command: cli.command.name().to_string(),
            config_hash: config_hash(&cli.command, cli.degrees),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time,
            results: outcome.results,
        };
        let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("triwork {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
