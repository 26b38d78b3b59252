use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spinorbit_cli::{parse_config_for, run, CliError, Format, Mode};

/// Truncated Fock-space simulator of spin-orbit Bell measurements.
#[derive(Debug, Parser)]
#[command(name = "spinorbit", version)]
struct Args {
    #[arg(value_enum)]
    mode: Mode,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured output path; stdout when neither is set.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn execute(args: Args) -> Result<bool, CliError> {
    let text = fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let mut config = parse_config_for(args.mode, &text)?;
    if let Some(output) = args.output {
        config.output = Some(output);
    }
    if let Some(format) = args.format {
        config.format = format;
    }
    run(&config)
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("spinorbit: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("spinorbit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
