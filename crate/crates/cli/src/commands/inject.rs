//! `sttdse inject`: seeded bit-flip injection on a little-endian binary word
//! array, with a JSON stats sidecar.

use anyhow::{Context as AnyhowContext, Result};
use clap::Args as ClapArgs;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::context::Ctx;
use crate::report::render_table;
use sttdse_core::inject::{expected_flips, inject, BerProfile, InjectStats, Words};

#[derive(ClapArgs)]
pub struct Args {
    /// Input array: raw little-endian binary.
    #[arg(long, short = 'i', value_name = "FILE")]
    input: PathBuf,
    /// Word width in bits (8 | 16).
    #[arg(long, short = 'w', value_name = "BITS", default_value_t = 16)]
    width: u32,
    /// RNG seed; identical inputs and seed reproduce identical flips.
    #[arg(long, short = 's', value_name = "SEED", default_value_t = 0)]
    seed: u64,
    /// Write the mutated array here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the JSON stats sidecar here.
    #[arg(long, value_name = "FILE")]
    stats: Option<PathBuf>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    schema_version: u32,
    profile: &'a BerProfile,
    #[serde(flatten)]
    stats: &'a InjectStats,
}

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let bytes = std::fs::read(&args.input)
        .with_context(|| format!("reading input array {}", args.input.display()))?;
    let mut words = Words::from_le_bytes(args.width, &bytes)?;
    let profile = ctx.config.ber;
    let stats = inject(&mut words, &profile, args.seed)?;

    let n_bits = stats.words * args.width as u64;
    let expected = expected_flips(n_bits, &profile);
    println!(
        "{}",
        render_table(
            &["words", "bits", "seed", "flips", "expected", "msb flips", "lsb flips"],
            &[vec![
                stats.words.to_string(),
                n_bits.to_string(),
                stats.seed.to_string(),
                stats.total_flips.to_string(),
                format!("{expected:.3}"),
                stats.msb_flips.to_string(),
                stats.lsb_flips.to_string(),
            ]]
        )
    );

    if let Some(path) = &args.out {
        std::fs::write(path, words.to_le_bytes())
            .with_context(|| format!("writing mutated array {}", path.display()))?;
    }
    if let Some(path) = &args.stats {
        let sidecar = Sidecar { schema_version: 1, profile: &profile, stats: &stats };
        let json = serde_json::to_string_pretty(&sidecar)?;
        std::fs::write(path, json + "\n")
            .with_context(|| format!("writing stats sidecar {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}
