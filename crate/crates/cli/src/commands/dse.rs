//! `sttdse dse`: the full sweep. Every (model x glb x batch x grid x delta x
//! datatype) design point rolls up buffer sizing, DRAM overflow, retention,
//! per-architecture energy, and area/power savings in one CSV row.

use anyhow::{bail, Context as AnyhowContext, Result};
use clap::Args as ClapArgs;
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::commands::energy::energies_for;
use crate::context::{accelerator_for_grid, parse_mac_array, Ctx};
use crate::report::{num, render_table, CsvDoc};
use sttdse_core::memory::{extra_dram_cost, extra_dram_traffic};
use sttdse_core::timing::model_retention_profile;
use sttdse_core::traffic::BufferArch;
use sttdse_core::workload::{required_glb, Datatype};

#[derive(ClapArgs)]
pub struct Args {
    /// Model files or bundled names (overrides sweep.models).
    #[arg(long, short = 'm', value_name = "MODEL")]
    model: Vec<String>,
    /// Components file supplying the functional-core block for roll-ups.
    #[arg(long, value_name = "FILE")]
    components: Option<PathBuf>,
    /// Write the sweep CSV here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

pub const CSV_HEADER: &str = "model,datatype,glb_bytes,batch,mac_array,delta,\
required_glb_bytes,extra_dram_bytes,extra_dram_s,extra_dram_j,retention_max_s,\
e_sram_only_j,e_mram_only_j,e_mram_scratch_j,area_savings_pct,power_savings_pct";

struct Point {
    glb_bytes: u64,
    batch: u64,
    mac_array: String,
    delta: f64,
    datatype: Option<Datatype>,
}

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let sweep = &ctx.config.sweep;
    let mem = &ctx.config.memory;

    // Empty axes collapse to the single configured value.
    let mut glbs = if sweep.axes.glb_bytes.is_empty() {
        vec![mem.glb_bytes]
    } else {
        sweep.axes.glb_bytes.clone()
    };
    glbs.sort_unstable();
    let mut batches =
        if sweep.axes.batch.is_empty() { vec![1] } else { sweep.axes.batch.clone() };
    batches.sort_unstable();
    let base = ctx.accelerator();
    let mut grids = if sweep.axes.mac_array.is_empty() {
        vec![format!("{}x{}", base.h_a, base.w_sa())]
    } else {
        sweep.axes.mac_array.clone()
    };
    grids.sort();
    let mut deltas =
        if sweep.axes.delta.is_empty() { vec![mem.glb_delta] } else { sweep.axes.delta.clone() };
    deltas.sort_by(|a, b| a.partial_cmp(b).expect("delta axis contains NaN"));
    let datatypes: Vec<Option<Datatype>> = if sweep.axes.datatype.is_empty() {
        vec![None]
    } else {
        let mut names = sweep.axes.datatype.clone();
        names.sort();
        names.iter().map(|s| Datatype::parse(s).map(Some)).collect::<sttdse_core::Result<_>>()?
    };

    let points_per_model = (glbs.len() * batches.len() * grids.len() * deltas.len() * datatypes.len()) as u64;
    if points_per_model > sweep.max_points {
        bail!(
            "sweep would evaluate {points_per_model} design points per model, over the cap of {} \
             (raise sweep.max_points to allow this)",
            sweep.max_points
        );
    }

    let models = ctx.resolve_models(&args.model, None)?;
    let components = ctx.components(args.components.as_deref())?;
    let baseline = components
        .variants
        .iter()
        .find(|v| v.name == components.baseline)
        .with_context(|| format!("components file lacks baseline {}", components.baseline))?;
    let core_block = baseline
        .components
        .iter()
        .find(|c| c.name == "functional_core")
        .context("components file lacks a functional_core block in the baseline")?
        .clone();

    // Lexicographic point order; models iterate outermost in given order.
    let mut jobs: Vec<(usize, Point)> = Vec::new();
    for (mi, _) in models.iter().enumerate() {
        for &glb_bytes in &glbs {
            for &batch in &batches {
                for grid in &grids {
                    for &delta in &deltas {
                        for datatype in &datatypes {
                            jobs.push((
                                mi,
                                Point {
                                    glb_bytes,
                                    batch,
                                    mac_array: grid.clone(),
                                    delta,
                                    datatype: *datatype,
                                },
                            ));
                        }
                    }
                }
            }
        }
    }

    let rows: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|(mi, point)| -> Result<Vec<String>> {
            let model = match point.datatype {
                Some(dt) => models[*mi].clone().with_datatype(dt),
                None => models[*mi].clone(),
            };
            let (grid_h, grid_w) = parse_mac_array(&point.mac_array)?;
            let cfg = accelerator_for_grid(&base, grid_h, grid_w)?;

            let need = required_glb(&model, point.batch)?;
            let spill = extra_dram_traffic(&model, point.batch, point.glb_bytes)?;
            let cost = extra_dram_cost(spill.total_bytes, &ctx.config.dram)?;
            let retention = model_retention_profile(&model, &cfg, point.batch)?;
            let (energies, mram_glb, scratch, exec) =
                energies_for(ctx, &model, point.batch, point.glb_bytes, point.delta, &cfg)?;
            let by_arch = |want: BufferArch| {
                energies.iter().find(|(a, _)| *a == want).map(|(_, e)| *e).unwrap()
            };
            let e_sram = by_arch(BufferArch::SramOnly);
            let e_mram = by_arch(BufferArch::MramOnly);
            let e_scratch = by_arch(BufferArch::MramScratch);

            // Roll-up: functional core + SRAM buffer versus functional core
            // + MRAM buffer + scratchpad, with buffer dynamic power taken
            // from the counted traffic over the execution time.
            let sram_glb = ctx.sram_table().interpolate(point.glb_bytes)?;
            let to_mw = |joules: f64| joules / exec * 1e3;
            let base_area = core_block.area_mm2 + sram_glb.area_mm2;
            let base_power = core_block.dynamic_mw
                + core_block.leakage_mw
                + to_mw(e_sram.dynamic_j)
                + sram_glb.leakage_mw;
            let var_area = core_block.area_mm2 + mram_glb.area_mm2 + scratch.area_mm2;
            let var_power = core_block.dynamic_mw
                + core_block.leakage_mw
                + to_mw(e_scratch.dynamic_j)
                + mram_glb.leakage_mw
                + scratch.leakage_mw;
            let area_savings = (base_area - var_area) / base_area * 100.0;
            let power_savings = (base_power - var_power) / base_power * 100.0;

            Ok(vec![
                model.name.clone(),
                model.datatype.as_str().to_string(),
                point.glb_bytes.to_string(),
                point.batch.to_string(),
                point.mac_array.clone(),
                num(point.delta),
                need.to_string(),
                spill.total_bytes.to_string(),
                num(cost.seconds),
                num(cost.joules),
                num(retention.max_seconds),
                num(e_sram.total_j),
                num(e_mram.total_j),
                num(e_scratch.total_j),
                num(area_savings),
                num(power_savings),
            ])
        })
        .collect::<Result<_>>()?;

    let mut doc = CsvDoc::new(CSV_HEADER);
    for row in &rows {
        doc.push(row);
    }
    let shown: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r[0].clone(),
                r[1].clone(),
                format!("{:.1} MB", r[2].parse::<f64>().unwrap() / 1e6),
                r[3].clone(),
                r[4].clone(),
                r[5].clone(),
                format!("{:.2} MB", r[6].parse::<f64>().unwrap() / 1e6),
                r[7].clone(),
                format!("{:.3}", r[10].parse::<f64>().unwrap()),
                format!("{:.3}", r[14].parse::<f64>().unwrap()),
                format!("{:.3}", r[15].parse::<f64>().unwrap()),
            ]
        })
        .collect();
    println!(
        "{}",
        render_table(
            &["model", "dt", "glb", "batch", "grid", "delta", "req glb", "spill B", "ret max s", "area sav %", "power sav %"],
            &shown
        )
    );
    if let Some(path) = &args.out {
        doc.write(path)?;
    }
    Ok(ExitCode::SUCCESS)
}
