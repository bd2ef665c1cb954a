//! `sttdse summary`: accelerator totals and savings versus the baseline,
//! checked against the expectations declared in the components file.
//!
//! Exit code 0 only when every declared expectation is met.

use anyhow::Result;
use clap::Args as ClapArgs;
use std::path::PathBuf;
use std::process::ExitCode;

use crate::context::Ctx;
use crate::report::{fixed, num, render_table, CsvDoc};
use sttdse_core::memory::{accelerator_summary, check_expectations};

#[derive(ClapArgs)]
pub struct Args {
    /// Components CSV; the bundled 14 nm values when omitted.
    #[arg(long, value_name = "FILE")]
    components: Option<PathBuf>,
    /// Write the summary CSV here.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

pub const CSV_HEADER: &str =
    "variant,area_mm2,dynamic_mw,leakage_mw,total_power_mw,area_savings_pct,power_savings_pct";

pub fn run(ctx: &Ctx, args: &Args) -> Result<ExitCode> {
    let file = ctx.components(args.components.as_deref())?;
    let summaries = accelerator_summary(&file.variants, &file.baseline)?;

    let mut doc = CsvDoc::new(CSV_HEADER);
    let mut rows = Vec::new();
    for s in &summaries {
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        doc.push(&[
            s.name.clone(),
            num(s.area_mm2),
            num(s.dynamic_mw),
            num(s.leakage_mw),
            num(s.total_power_mw),
            opt(s.area_savings_pct),
            opt(s.power_savings_pct),
        ]);
        let pct = |v: Option<f64>| v.map(|p| format!("{p:.1}%")).unwrap_or_else(|| "-".into());
        rows.push(vec![
            s.name.clone(),
            fixed(s.area_mm2, 3),
            fixed(s.dynamic_mw, 2),
            fixed(s.leakage_mw, 3),
            fixed(s.total_power_mw, 2),
            pct(s.area_savings_pct),
            pct(s.power_savings_pct),
        ]);
    }
    println!(
        "{}",
        render_table(
            &["variant", "area mm2", "dynamic mW", "leakage mW", "total mW", "area sav", "power sav"],
            &rows
        )
    );

    let checks = check_expectations(&summaries, &file.expectations)?;
    let mut all_met = true;
    for c in &checks {
        let metric = match c.expectation.metric {
            sttdse_core::memory::ExpectMetric::AreaSavingsPct => "area savings",
            sttdse_core::memory::ExpectMetric::PowerSavingsPct => "power savings",
        };
        let verdict = if c.met { "ok" } else { "MISSED" };
        println!(
            "expect {metric} of {} = {} +- {}: got {:.3} ... {verdict}",
            c.expectation.variant, c.expectation.value, c.expectation.tol, c.actual
        );
        all_met &= c.met;
    }

    if let Some(path) = &args.out {
        doc.write(path)?;
    }
    if all_met {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: one or more declared expectations were missed");
        Ok(ExitCode::from(3))
    }
}
