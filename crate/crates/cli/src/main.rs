use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use omnisurf_cli::{run, Command, Flags};

/// Channel simulator for simultaneously transmitting and reflecting surfaces.
#[derive(Debug, Parser)]
#[command(name = "omnisurf", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory; the run manifest is appended to runs.jsonl here.
    #[arg(long, default_value = "omnisurf-out")]
    out: PathBuf,
    /// Comma-separated channel models, overriding the scenario.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    /// Pattern resolution in degrees.
    #[arg(long)]
    resolution: Option<f64>,
    /// Worker threads.
    #[arg(long, env = "OMNISURF_WORKERS")]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let flags = Flags { out: cli.out, models: cli.models, resolution_deg: cli.resolution, workers: cli.workers };
    ExitCode::from(run(cli.command, &cli.scenario, &flags) as u8)
}
