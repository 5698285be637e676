use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use nonscatter_cli::config::Task;
use nonscatter_cli::execute;

/// Boundary oscillatory integrals and nonscattering diagnostics for star-shaped media.
#[derive(Debug, Parser)]
#[command(name = "nonscatter", version)]
struct Args {
    /// One of: sweep, admissibility, critical-points, diagnose, disk-zeros, h-curves
    task: Task,
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; falls back to `output` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let line = serde_json::json!({
                "level": "error",
                "code": nonscatter_cli::EXIT_VALIDATION,
                "kind": "usage",
                "message": e.to_string().lines().next().unwrap_or_default(),
            });
            eprintln!("{line}");
            return ExitCode::from(nonscatter_cli::EXIT_VALIDATION as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let code = execute(args.task, &args.config, args.out.as_deref(), args.workers);
    ExitCode::from(code as u8)
}
