//! `sttdse workload`: model sizes, per-layer footprints, required buffer
//! capacity, and the largest partial ofmap.

use anyhow::Result;
use clap::Args as ClapArgs;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::context::Ctx;
use crate::report::{render_table, CsvDoc};
use sttdse_core::workload::{
    layer_footprint, max_partial_ofmap, model_size, required_glb, Datatype,
};

#[derive(ClapArgs)]
pub struct Args {
    /// Model files or bundled names (alexnet, vgg16, resnet50).
    #[arg(long, short = 'm', value_name = "MODEL")]
    model: Vec<String>,
    /// Batch sizes to evaluate.
    #[arg(long, short = 'b', value_name = "N", default_values_t = [1u64])]
    batch: Vec<u64>,
    /// Override the model datatype (int8 | bf16).
    #[arg(long, value_name = "DT")]
    datatype: Option<String>,
    /// Emit one CSV row per layer instead of per model.
    #[arg(long)]
    per_layer: bool,
    /// Write the workload CSV here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

pub const SUMMARY_HEADER: &str =
    "model,datatype,batch,model_size_bytes,required_glb_bytes,max_partial_ofmap_bytes";
pub const LAYER_HEADER: &str =
    "model,datatype,batch,layer,kind,ifmap_bytes,weight_bytes,bias_bytes,ofmap_bytes";

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let datatype = args.datatype.as_deref().map(Datatype::parse).transpose()?;
    let models = ctx.resolve_models(&args.model, datatype)?;

    let mut doc = CsvDoc::new(if args.per_layer { LAYER_HEADER } else { SUMMARY_HEADER });
    let mut rows = Vec::new();
    for model in &models {
        model.validate()?;
        for &batch in &args.batch {
            if args.per_layer {
                for (idx, layer) in model.layers.iter().enumerate() {
                    let f = layer_footprint(layer, batch, model.datatype.bytes())?;
                    doc.push(&[
                        model.name.clone(),
                        model.datatype.as_str().to_string(),
                        batch.to_string(),
                        idx.to_string(),
                        layer.kind().to_string(),
                        f.ifmap_bytes.to_string(),
                        f.weight_bytes.to_string(),
                        f.bias_bytes.to_string(),
                        f.ofmap_bytes.to_string(),
                    ]);
                }
            }
            let size = model_size(model)?;
            let glb = required_glb(model, batch)?;
            let partial = max_partial_ofmap(model, batch)?;
            if !args.per_layer {
                doc.push(&[
                    model.name.clone(),
                    model.datatype.as_str().to_string(),
                    batch.to_string(),
                    size.to_string(),
                    glb.to_string(),
                    partial.to_string(),
                ]);
            }
            rows.push(vec![
                model.name.clone(),
                model.datatype.as_str().to_string(),
                batch.to_string(),
                format!("{:.2} MB", size as f64 / 1e6),
                format!("{:.2} MB", glb as f64 / 1e6),
                format!("{:.1} KB", partial as f64 / 1e3),
            ]);
        }
    }
    println!(
        "{}",
        render_table(
            &["model", "datatype", "batch", "model size", "required GLB", "max partial ofmap"],
            &rows
        )
    );
    if let Some(path) = &args.out {
        doc.write(path)?;
    }
    Ok(ExitCode::SUCCESS)
}
