//! Acceptance criteria: one PASS/FAIL line each. Criteria 1–11 come from a
//! full-scale `validate all --seed 7`; criterion 12 runs the binary twice
//! and compares the output files byte for byte. Built without the libtest
//! harness so the lines are printed even when everything passes.
//!
//! The determinism runs use `--samples 2000` unless
//! `WELDBENCH_FULL_DETERMINISM` is set, in which case they run at full scale.

use std::path::Path;
use std::process::Command;

use weldbench::harness::{records_csv, run_suite, RunConfig, Suite, GROUPS};

const SEED: u64 = 7;

fn run_bin(out: &Path, samples: Option<&str>) -> i32 {
    let mut c = Command::new(env!("CARGO_BIN_EXE_weldbench"));
    c.args(["validate", "all", "--seed", "7", "--out"]).arg(out);
    if let Some(s) = samples {
        c.args(["--samples", s]);
    }
    c.output()
        .expect("run weldbench")
        .status
        .code()
        .unwrap_or(-1)
}

fn same_bytes(a: &Path, b: &Path, files: &[&str]) -> Vec<String> {
    files
        .iter()
        .filter(|f| {
            std::fs::read(a.join(f)).ok() != std::fs::read(b.join(f)).ok() || !a.join(f).exists()
        })
        .map(|f| f.to_string())
        .collect()
}

fn main() {
    let cfg = RunConfig {
        seed: Some(SEED),
        ..Default::default()
    };
    let report = run_suite(Suite::All, &cfg).expect("suite runs");
    let mut lines = Vec::new();
    for (i, (group, desc)) in GROUPS.iter().enumerate() {
        let recs = report.group(group);
        let ok = !recs.is_empty() && recs.iter().all(|r| r.passed());
        lines.push((
            ok,
            format!("{:>2} {group}: {desc} ({} checks)", i + 1, recs.len()),
        ));
        for r in recs.iter().filter(|r| !r.passed()) {
            eprintln!(
                "   failed: {} [{}] expected {} observed {} {}",
                r.id, r.inputs, r.expected, r.observed, r.note
            );
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let samples = if std::env::var_os("WELDBENCH_FULL_DETERMINISM").is_some() {
        None
    } else {
        Some("2000")
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let codes = (run_bin(&a, samples), run_bin(&b, samples));
    let files = [
        "records.csv",
        "summary.json",
        "tail-law.csv",
        "tail-law.svg",
    ];
    let diff = same_bytes(&a, &b, &files);
    let ok = codes.0 == codes.1 && codes.0 >= 0 && codes.0 <= 1 && diff.is_empty();
    if !diff.is_empty() {
        eprintln!("   differing outputs: {diff:?}");
    }
    lines.push((
        ok,
        format!(
            "12 determinism: `validate all --seed 7` twice gives byte-identical outputs ({})",
            files.join(", ")
        ),
    ));

    println!();
    for (ok, l) in &lines {
        println!("{} {l}", if *ok { "PASS" } else { "FAIL" });
    }
    let failed = lines.iter().filter(|l| !l.0).count();
    println!(
        "acceptance: {} of {} criteria pass",
        lines.len() - failed,
        lines.len()
    );
    if failed > 0 {
        eprintln!("{}", records_csv(&report.records));
        std::process::exit(1);
    }
}
