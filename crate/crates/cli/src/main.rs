//! `sttdse`: design-space exploration for STT-MRAM based accelerator buffers.
//!
//! Subcommands: device, guardband, workload, retention, energy, dse, inject,
//! summary. Human-readable tables go to stdout; `--out` writes the CSV.
//!
//! Exit codes: 0 success, 2 validation error, 3 infeasible target or unmet
//! expectation, 4 I/O error.

mod commands;
mod config;
mod context;
mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sttdse", version, about = "STT-MRAM accelerator buffer co-design explorer")]
struct Cli {
    /// Config file (JSON). Falls back to $STTDSE_CONFIG, then built-in defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a config key by dotted path, e.g. --set mtj.targets.ber_rf=1e-9.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the MTJ operating point for the configured targets.
    Device(commands::device::Args),
    /// Guard-band a scaled delta for process/temperature corners.
    Guardband(commands::guardband::Args),
    /// Model sizes, footprints, buffer requirements.
    Workload(commands::workload::Args),
    /// Data retention profile of models on the configured core.
    Retention(commands::retention::Args),
    /// Buffer energy per architecture (SRAM / MRAM / MRAM+scratchpad).
    Energy(commands::energy::Args),
    /// Full design-space sweep over the configured axes.
    Dse(commands::dse::Args),
    /// Seeded bit-flip injection on a binary word array.
    Inject(commands::inject::Args),
    /// Accelerator area/power roll-up and savings check.
    Summary(commands::summary::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = config::load(cli.config.as_deref(), &cli.sets)?;
    let ctx = context::Ctx::new(config)?;
    match cli.command {
        Command::Device(args) => commands::device::run(&ctx, &args),
        Command::Guardband(args) => commands::guardband::run(&ctx, &args),
        Command::Workload(args) => commands::workload::run(&ctx, &args),
        Command::Retention(args) => commands::retention::run(&ctx, &args),
        Command::Energy(args) => commands::energy::run(&ctx, &args),
        Command::Dse(args) => commands::dse::run(&ctx, &args),
        Command::Inject(args) => commands::inject::run(&ctx, &args),
        Command::Summary(args) => commands::summary::run(&ctx, &args),
    }
}

fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    if let Some(core) = err.downcast_ref::<sttdse_core::Error>() {
        return match core {
            sttdse_core::Error::Domain(_) => ExitCode::from(3),
            _ => ExitCode::from(2),
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return ExitCode::from(4);
    }
    ExitCode::from(2)
}
