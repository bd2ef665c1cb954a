//! `sttdse guardband`: corner analysis of a scaled delta and write-driver
//! current levels.

use anyhow::Result;
use clap::Args as ClapArgs;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::context::Ctx;
use crate::report::{fixed, num, render_table, CsvDoc};
use sttdse_core::guardband::{delta_pt_max, guardbanded_delta, scaled_delta_check, write_driver_levels};
use sttdse_core::mtj::delta_for_retention;

#[derive(ClapArgs)]
pub struct Args {
    /// Scaled delta values to guard-band. Defaults to the delta solved from
    /// the configured retention targets.
    #[arg(long, value_name = "DELTA")]
    delta: Vec<f64>,
    /// Write the guardband CSV here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

pub const CSV_HEADER: &str =
    "delta_scaled,delta_gb,delta_check,delta_pt_max,i_w_nominal_a,i_w_max_a";

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let profile = &ctx.config.variation;
    let mtj = &ctx.config.mtj;
    let deltas = if args.delta.is_empty() {
        vec![delta_for_retention(mtj.targets.t_ret, mtj.targets.ber_rf, mtj.params.tau_retention)?]
    } else {
        args.delta.clone()
    };

    let mut doc = CsvDoc::new(CSV_HEADER);
    let mut rows = Vec::new();
    for &delta in &deltas {
        let gb = guardbanded_delta(delta, profile)?;
        let check = scaled_delta_check(gb, profile)?;
        let pt_max = delta_pt_max(gb, profile)?;
        let levels =
            write_driver_levels(&mtj.params, gb, profile, mtj.driver_levels, mtj.knobs.iw_over_ic)?;
        let (lo, hi) = (levels[0], *levels.last().unwrap());
        doc.push(&[num(delta), num(gb), num(check), num(pt_max), num(lo), num(hi)]);
        rows.push(vec![
            fixed(delta, 3),
            fixed(gb, 3),
            fixed(check, 3),
            fixed(pt_max, 3),
            format!("{lo:.4e}"),
            format!("{hi:.4e}"),
            levels.iter().map(|l| format!("{l:.3e}")).collect::<Vec<_>>().join(" "),
        ]);
    }
    println!(
        "{}",
        render_table(
            &["delta", "delta_gb", "check", "delta_max", "i_w_nom", "i_w_max", "driver levels (A)"],
            &rows
        )
    );
    if let Some(path) = &args.out {
        doc.write(path)?;
    }
    Ok(ExitCode::SUCCESS)
}
