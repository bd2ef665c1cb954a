//! `sttdse device`: solve and report the MTJ operating point.

use anyhow::Result;
use clap::Args as ClapArgs;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::context::Ctx;
use crate::report::{num, render_table, CsvDoc};
use sttdse_core::mtj::solve_operating_point;

#[derive(ClapArgs)]
pub struct Args {
    /// Write the operating-point CSV here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

pub const CSV_HEADER: &str =
    "delta,t_ret_s,t_r_s,t_w_s,ber_rf,ber_rd,ber_we,i_c_a,i_w_a,i_r_a";

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let mtj = &ctx.config.mtj;
    let op = solve_operating_point(&mtj.params, &mtj.targets, &mtj.knobs)?;

    let rows = vec![vec![
        num(op.delta),
        num(op.t_ret),
        num(op.t_r),
        num(op.t_w),
        num(op.ber_rf),
        num(op.ber_rd),
        num(op.ber_we),
        num(op.i_c),
        num(op.i_w),
        num(op.i_r),
    ]];
    println!(
        "{}",
        render_table(
            &["delta", "t_ret_s", "t_r_s", "t_w_s", "ber_rf", "ber_rd", "ber_we", "i_c_a", "i_w_a", "i_r_a"],
            &rows
        )
    );

    if let Some(path) = &args.out {
        let mut doc = CsvDoc::new(CSV_HEADER);
        doc.push(&rows[0]);
        doc.write(path)?;
    }
    Ok(ExitCode::SUCCESS)
}
