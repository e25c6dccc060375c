//! Validation harness: run configuration, the suites that compare the
//! closed forms with each other and with the simulators, sweeps, plots and
//! the deterministic output files.
//!
//! Everything written by [`write_report`] is a function of the
//! configuration and seed only; wall-clock timings go to a separate file.

mod config;
mod plot;
mod record;
mod suites;
mod sweep;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub use config::{
    EquivalenceConfig, GmcConfig, HeadlineConfig, IntervalPoint, ReflectionPoint, RunConfig,
    SleTuple, SweepConfig, SweepMode, SweepPoint, TailConfig,
};
pub use plot::{ecdf, ks_overlay, moment_plot, tail_plot, Plot, Series, Style};
pub use record::{fmt_f64, records_csv, Status, Table, Tolerance, ValidationRecord};
pub use suites::{run_suite, sub_seed, Suite, SuiteReport, GROUPS};
pub use sweep::{run_sweep, sweep_csv, SweepRow, SWEEP_HEADER};

use crate::error::Result;

/// Write `records.csv`, `summary.json`, `timings.csv` and any tables (as
/// CSV plus an SVG figure) of a suite run into `dir`.
pub fn write_report(report: &SuiteReport, cfg: &RunConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("records.csv"), records_csv(&report.records))?;
    // the output directory is not part of the result
    let cfg = RunConfig {
        out: None,
        ..cfg.clone()
    };
    let summary = serde_json::json!({
        "suite": report.suite,
        "seed": report.seed,
        "passed": report.passed,
        "failed": report.failed,
        "config": cfg,
        "records": report.records,
    });
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;
    let mut timings = String::from("id,inputs,seconds\n");
    for r in &report.records {
        let _ = writeln!(
            timings,
            "{},\"{}\",{:.6}",
            r.id,
            r.inputs.replace('"', "'"),
            r.runtime
        );
    }
    fs::write(dir.join("timings.csv"), timings)?;
    for (name, table) in &report.tables {
        fs::write(dir.join(format!("{name}.csv")), table.to_csv())?;
        let fig = match name.as_str() {
            "tail-law" => tail_plot(table),
            _ => moment_plot(table),
        };
        fs::write(dir.join(format!("{name}.svg")), fig.to_svg())?;
    }
    Ok(())
}
