//! Run the closed-form suites and write the deterministic report files.

use weldbench::harness::{run_suite, write_report, RunConfig, Suite};

fn main() -> weldbench::Result<()> {
    let cfg = RunConfig {
        seed: Some(7),
        ..Default::default()
    };
    let dir = std::env::temp_dir().join("weldbench-report");
    for suite in [Suite::Specfun, Suite::Exact] {
        let report = run_suite(suite, &cfg)?;
        for r in &report.records {
            println!(
                "{:<32} {:>4}  observed {:.3e}",
                r.id,
                if r.passed() { "pass" } else { "FAIL" },
                r.observed
            );
        }
        write_report(&report, &cfg, &dir.join(suite.name()))?;
    }
    println!("reports under {}", dir.display());
    Ok(())
}
