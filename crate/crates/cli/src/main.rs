use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use wgqed_cli::{parse_config, run, CliError};

/// Single-photon transport through emitter chains in a waveguide.
#[derive(Debug, Parser)]
#[command(name = "wgqed", version)]
struct Args {
    /// Run file with `key = value` lines.
    config: PathBuf,

    /// Output table path; overrides `output` in the run file.
    #[arg(long)]
    out: Option<PathBuf>,

    /// RNG seed; overrides `seed` in the run file.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(args: &Args) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io {
        context: format!("cannot read {}", args.config.display()),
        source,
    })?;
    let config = parse_config(&text)?;
    let output = args
        .out
        .clone()
        .or_else(|| config.output.clone())
        .ok_or_else(|| CliError::Validation("no output path: set `output` or pass --out".into()))?;

    let threads = match std::env::var("WGQED_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Validation(format!("WGQED_THREADS must be a positive integer, got `{v}`"))
        })?),
        Err(_) => None,
    };
    let summary = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Validation(format!("cannot start {n} threads: {e}")))?
            .install(|| run(&config, &output, args.seed))?,
        None => run(&config, &output, args.seed)?,
    };
    Ok(format!("{} -> {} ({} rows)", summary.message, output.display(), summary.rows))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(line) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
