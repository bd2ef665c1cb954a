//! `sttdse energy`: buffer energy under the three architectures.

use anyhow::Result;
use clap::Args as ClapArgs;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::context::Ctx;
use crate::report::{num, render_table, CsvDoc};
use sttdse_core::memory::MemTechPoint;
use sttdse_core::timing::model_exec_time;
use sttdse_core::traffic::{buffer_energy, count_traffic, BufferArch, EnergyBreakdown};
use sttdse_core::workload::{Datatype, ModelSpec};

#[derive(ClapArgs)]
pub struct Args {
    /// Model files or bundled names.
    #[arg(long, short = 'm', value_name = "MODEL")]
    model: Vec<String>,
    /// Batch sizes to evaluate.
    #[arg(long, short = 'b', value_name = "N", default_values_t = [16u64])]
    batch: Vec<u64>,
    /// Override the model datatype (int8 | bf16).
    #[arg(long, value_name = "DT")]
    datatype: Option<String>,
    /// Write the energy CSV here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

pub const CSV_HEADER: &str = "model,datatype,batch,arch,dynamic_j,leakage_j,total_j";

/// Energies of all three architectures for one (model, batch) point.
pub fn energies_for(
    ctx: &Ctx,
    model: &ModelSpec,
    batch: u64,
    glb_bytes: u64,
    mram_delta: f64,
    cfg: &sttdse_core::timing::AcceleratorConfig,
) -> Result<(Vec<(BufferArch, EnergyBreakdown)>, MemTechPoint, MemTechPoint, f64)> {
    let mem = &ctx.config.memory;
    let sram_glb = ctx.sram_table().interpolate(glb_bytes)?;
    let mram_glb = ctx.mram_table(mram_delta)?.interpolate(glb_bytes)?;
    let scratch = ctx.sram_table().interpolate(mem.scratch_bytes)?;
    let traffic = count_traffic(model, cfg, batch, mem.access_width_bytes)?;
    let exec = model_exec_time(model, cfg, batch)?;
    let mut out = Vec::new();
    for arch in BufferArch::ALL {
        let glb = match arch {
            BufferArch::SramOnly => &sram_glb,
            _ => &mram_glb,
        };
        out.push((arch, buffer_energy(&traffic, arch, glb, &scratch, exec)?));
    }
    Ok((out, mram_glb, scratch, exec))
}

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let datatype = args.datatype.as_deref().map(Datatype::parse).transpose()?;
    let models = ctx.resolve_models(&args.model, datatype)?;
    let cfg = ctx.accelerator();
    let mem = &ctx.config.memory;

    let mut doc = CsvDoc::new(CSV_HEADER);
    let mut rows = Vec::new();
    for model in &models {
        for &batch in &args.batch {
            let (energies, _, _, exec) =
                energies_for(ctx, model, batch, mem.glb_bytes, mem.glb_delta, &cfg)?;
            for (arch, e) in &energies {
                doc.push(&[
                    model.name.clone(),
                    model.datatype.as_str().to_string(),
                    batch.to_string(),
                    arch.as_str().to_string(),
                    num(e.dynamic_j),
                    num(e.leakage_j),
                    num(e.total_j),
                ]);
                rows.push(vec![
                    model.name.clone(),
                    model.datatype.as_str().to_string(),
                    batch.to_string(),
                    arch.as_str().to_string(),
                    format!("{:.6e}", e.dynamic_j),
                    format!("{:.6e}", e.leakage_j),
                    format!("{:.6e}", e.total_j),
                    format!("{exec:.4}"),
                ]);
            }
        }
    }
    println!(
        "{}",
        render_table(
            &["model", "datatype", "batch", "arch", "dynamic J", "leakage J", "total J", "exec s"],
            &rows
        )
    );
    if let Some(path) = &args.out {
        doc.write(path)?;
    }
    Ok(ExitCode::SUCCESS)
}
