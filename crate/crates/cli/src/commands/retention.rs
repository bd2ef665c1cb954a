//! `sttdse retention`: per-pair data occupancy times in the global buffer.

use anyhow::Result;
use clap::Args as ClapArgs;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::context::Ctx;
use crate::report::{num, render_table, seconds, CsvDoc};
use sttdse_core::timing::model_retention_profile;
use sttdse_core::workload::Datatype;

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
    /// Retention budget the maximum is checked against, s.
    #[arg(long, value_name = "SECONDS", default_value_t = 1.5)]
    limit: f64,
    /// Write the retention CSV here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

pub const CSV_HEADER: &str = "model,datatype,batch,first_layer,second_layer,kind,seconds,status";

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let datatype = args.datatype.as_deref().map(Datatype::parse).transpose()?;
    let models = ctx.resolve_models(&args.model, datatype)?;
    let cfg = ctx.accelerator();

    let mut doc = CsvDoc::new(CSV_HEADER);
    let mut summary_rows = Vec::new();
    for model in &models {
        for &batch in &args.batch {
            let profile = model_retention_profile(model, &cfg, batch)?;
            for pair in &profile.pairs {
                doc.push(&[
                    model.name.clone(),
                    model.datatype.as_str().to_string(),
                    batch.to_string(),
                    pair.first_layer.to_string(),
                    pair.second_layer.to_string(),
                    pair.kind.clone(),
                    num(pair.seconds),
                    String::new(),
                ]);
            }
            let status = if profile.max_seconds <= args.limit { "PASS" } else { "FAIL" };
            doc.push(&[
                model.name.clone(),
                model.datatype.as_str().to_string(),
                batch.to_string(),
                String::new(),
                String::new(),
                "max".to_string(),
                num(profile.max_seconds),
                status.to_string(),
            ]);
            summary_rows.push(vec![
                model.name.clone(),
                model.datatype.as_str().to_string(),
                batch.to_string(),
                profile.pairs.len().to_string(),
                seconds(profile.max_seconds),
                format!("{status} (limit {} s)", args.limit),
            ]);
        }
    }
    println!(
        "{}",
        render_table(&["model", "datatype", "batch", "pairs", "max retention", "status"], &summary_rows)
    );
    if let Some(path) = &args.out {
        doc.write(path)?;
    }
    Ok(ExitCode::SUCCESS)
}
