use std::process::Command;

use weldbench::harness::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weldbench"))
}

#[test]
fn tolerance_semantics() {
    assert!(Tolerance::Absolute { tol: 0.1 }.accepts(1.0, 1.09));
    assert!(!Tolerance::Relative { tol: 0.1 }.accepts(2.0, 2.3));
    assert!(Tolerance::Sigma {
        k: 3.0,
        stderr: 0.1
    }
    .accepts(1.0, 0.71));
    assert!(!Tolerance::AtMost { max: 1e-9 }.accepts(0.0, 2e-9));
    assert!(Tolerance::AtLeast { min: 0.01 }.accepts(0.0, 0.5));
    assert!(!Tolerance::AtLeast { min: 0.01 }
        .scaled(0.5)
        .accepts(0.0, 0.015));
    let r = ValidationRecord::new(
        "x",
        "g",
        "a",
        String::new(),
        0.0,
        f64::NAN,
        Tolerance::AtMost { max: 1.0 },
    );
    assert!(!r.passed());
}

#[test]
fn config_defaults_file_and_rejection() {
    RunConfig::default().validate().unwrap();
    let cfg =
        RunConfig::from_json(r#"{"seed": 3, "samples": 50, "tail": {"rel_tol": 0.2}}"#).unwrap();
    assert_eq!(cfg.seed, Some(3));
    assert_eq!(cfg.samples_for(1000), 50);
    assert_eq!(cfg.tail.rel_tol, 0.2);
    assert_eq!(cfg.tail.points, RunConfig::default().tail.points);
    assert!(RunConfig::from_json(r#"{"sead": 3}"#).is_err());
    for bad in [
        r#"{"tolerance_scale": -1}"#,
        r#"{"samples": 0}"#,
        r#"{"headline": {"tuples": [{"kappa": -1, "rho_minus": 0, "rho_plus": 0}]}}"#,
        r#"{"tail": {"y_lo": 10, "y_hi": 5}}"#,
        r#"{"gmc": {"strip": {"half_width": 10, "cells": 1002, "both_lines": true}}}"#,
        r#"{"sim": {"dt": 0}}"#,
    ] {
        let r = RunConfig::from_json(bad).and_then(|c| c.validate());
        assert!(r.is_err(), "{bad}");
    }
}

#[test]
fn exact_suite_is_deterministic() {
    let cfg = RunConfig {
        seed: Some(11),
        random_tuples: 40,
        ..Default::default()
    };
    let a = run_suite(Suite::Exact, &cfg).unwrap();
    let b = run_suite(Suite::Exact, &cfg).unwrap();
    assert_eq!(records_csv(&a.records), records_csv(&b.records));
    assert_eq!(a.failed, 0, "{}", records_csv(&a.records));
    assert_eq!(a.exit_code(), 0);
}

#[test]
fn float_format_round_trips() {
    for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, f64::MIN_POSITIVE] {
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }
    assert_eq!(fmt_f64(f64::INFINITY), "inf");
    assert_eq!(fmt_f64(f64::NAN), "");
    let t = Table::from_csv("a,b\n1,inf\n2,\n").unwrap();
    assert_eq!(t.column("b").unwrap()[0], f64::INFINITY);
    assert!(t.column("b").unwrap()[1].is_nan());
}

#[test]
fn sweep_exact_mode() {
    let mut cfg = RunConfig {
        seed: Some(1),
        ..Default::default()
    };
    cfg.sweep.mode = SweepMode::Exact;
    let p = (2.0, 0.0, 0.5);
    cfg.sweep.points = [-1.0, 0.0, 50.0]
        .iter()
        .map(|&lambda| SweepPoint {
            kappa: p.0,
            rho_minus: p.1,
            rho_plus: p.2,
            lambda,
        })
        .collect();
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].exact_value > 0.0 && rows[0].exact_value < 1.0);
    assert!((rows[1].exact_value - 1.0).abs() < 1e-12);
    assert_eq!(rows[2].exact_value, f64::INFINITY);
    assert!(rows
        .iter()
        .all(|r| r.z_score.is_nan() && r.mc_mean.is_nan()));
    let csv = sweep_csv(&rows);
    assert!(csv.starts_with(SWEEP_HEADER));
    assert!(csv.lines().nth(3).unwrap().contains(",inf,"));
}

#[test]
fn sweep_both_mode_small() {
    let mut cfg = RunConfig {
        seed: Some(2),
        samples: Some(300),
        ..Default::default()
    };
    cfg.sweep.points = [-1.0, 0.0]
        .iter()
        .map(|&lambda| SweepPoint {
            kappa: 2.0,
            rho_minus: 0.0,
            rho_plus: 0.5,
            lambda,
        })
        .collect();
    let rows = run_sweep(&cfg).unwrap();
    assert!(rows[0].z_score.abs() < 5.0);
    assert_eq!(rows[1].z_score, 0.0);
    assert_eq!(rows[0].seed, rows[1].seed);
}

#[test]
fn empty_plot_is_valid_svg() {
    let svg = moment_plot(&Table::new(&[
        "lambda",
        "exact_value",
        "mc_mean",
        "mc_stderr",
    ]))
    .to_svg();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(!svg.contains("<path") && !svg.contains("<circle"));
    let t = Table::from_csv("y,survival,fit,reference\n10,0.1,0.1,0.1\n100,0.01,0.011,0.012\n")
        .unwrap();
    let svg = tail_plot(&t).to_svg();
    assert!(svg.contains("<circle") && svg.contains("stroke-dasharray"));
}

#[test]
fn cli_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ok");
    let st = bin()
        .args(["validate", "specfun", "--seed", "5", "--out"])
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(0));
    for f in ["records.csv", "summary.json", "timings.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 5);

    // impossible tolerances fail the checks
    let st = bin()
        .args([
            "validate",
            "specfun",
            "--seed",
            "5",
            "--tolerance-scale",
            "1e-30",
            "--out",
        ])
        .arg(dir.path().join("f"))
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(1));

    // bad input writes nothing
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"samples": 0}"#).unwrap();
    let bad_out = dir.path().join("bad");
    let st = bin()
        .args(["validate", "all", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&bad_out)
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(2));
    assert!(!bad_out.exists());
    let st = bin()
        .args(["validate", "nonsense", "--out"])
        .arg(&bad_out)
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(2));
    assert!(!bad_out.exists());

    let o = bin()
        .args([
            "exact",
            "moment",
            "--kappa",
            "2",
            "--rho-minus",
            "0",
            "--rho-plus",
            "0",
            "--lambda",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(
        (String::from_utf8(o.stdout)
            .unwrap()
            .trim()
            .parse::<f64>()
            .unwrap()
            - 1.0)
            .abs()
            < 1e-12
    );
}
