//! Batch front end for stable-network limit experiments.
//!
//! One invocation is one run: a command plus a declarative configuration
//! assembled from an optional preset, an optional TOML file, repeatable
//! `--set` overrides, and dedicated flags — later sources win. Every
//! artifact embeds the fully resolved configuration, and a fixed seed gives
//! byte-identical output for any worker count.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error.

mod config;
mod emit;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, Format, Sources};
use run::Artifact;

#[derive(Parser)]
#[command(
    name = "stable-limits",
    version,
    about = "Predict, simulate, and verify infinitely-wide stable-network limit laws"
)]
struct Cli {
    /// What to run; may instead come from the config file or preset.
    #[arg(value_enum)]
    command: Option<Command>,

    /// TOML run configuration (sections: network, ensemble, tolerances,
    /// output, stable, tailscan, surface).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Built-in configuration: tanh, identity, cube, power-3-2, or relu.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Replication seed (overrides ensemble.seed).
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads; 0 means one per core. Defaults to the
    /// STABLE_LIMITS_WORKERS environment variable. Never affects results.
    #[arg(long)]
    workers: Option<usize>,

    /// Output file (overrides output.path); stdout otherwise.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output encoding (overrides output.format).
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Dotted config override, e.g. --set ensemble.width_n=8192; repeatable,
    /// applied after the preset and the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode, String> {
    install_workers(cli.workers)?;

    let config = config::load(&Sources {
        preset: cli.preset.as_deref(),
        config_path: cli.config.as_deref(),
        sets: &cli.sets,
        command: cli.command,
        seed: cli.seed,
        out: cli.out.as_deref(),
        format: cli.format,
    })
    .map_err(|e| e.to_string())?;

    let artifact = run::execute(&config).map_err(|e| e.to_string())?;
    let text = emit::render(&config, &artifact);
    emit::write_out(&config.output, &text).map_err(|e| match &config.output.path {
        Some(path) => format!("cannot write {}: {e}", path.display()),
        None => format!("cannot write to stdout: {e}"),
    })?;

    if let Artifact::Report(report) = &artifact {
        if !report.all_pass() {
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.as_str())
                .collect();
            eprintln!(
                "verification failed: {} of {} checks out of tolerance ({})",
                failed.len(),
                report.checks.len(),
                failed.join(", ")
            );
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Sizes the worker pool from the flag or STABLE_LIMITS_WORKERS. With
/// neither, the library's default pool is used as-is.
fn install_workers(flag: Option<usize>) -> Result<(), String> {
    let workers = match flag {
        Some(w) => Some(w),
        None => match std::env::var("STABLE_LIMITS_WORKERS") {
            Ok(raw) => Some(raw.parse::<usize>().map_err(|_| {
                format!("STABLE_LIMITS_WORKERS must be a thread count, got '{raw}'")
            })?),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => return Err(format!("STABLE_LIMITS_WORKERS: {e}")),
        },
    };
    if let Some(workers) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| format!("cannot size the worker pool: {e}"))?;
    }
    Ok(())
}
