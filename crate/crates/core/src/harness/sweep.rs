//! Parameter sweeps of the moment: closed form, Monte Carlo or both, as a
//! flat table.

use std::fmt::Write as _;

use serde::Serialize;

use super::config::{RunConfig, SweepMode};
use super::record::fmt_f64;
use super::suites::sub_seed;
use crate::error::Result;
use crate::exact::{sle_derivative_moment, SleParams};
use crate::loewner::sample_psi_prime;

pub const SWEEP_HEADER: &str =
    "kappa,rho_minus,rho_plus,lambda,lambda0,exact_value,mc_mean,mc_stderr,n,z_score,seed,error";

/// One swept point. NaN fields are "not computed" and print empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub kappa: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub lambda: f64,
    pub lambda0: f64,
    /// `inf` at and beyond `λ₀`.
    pub exact_value: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub n: Option<usize>,
    pub z_score: f64,
    pub seed: Option<u64>,
    /// Why the point could not be evaluated.
    pub error: String,
}

/// One row per configured point. Points sharing `(κ, ρ₋, ρ₊)` share one
/// Monte Carlo sample; beyond `λ₀` no Monte Carlo is attempted.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let seed = cfg.seed.unwrap_or(0);
    let sw = &cfg.sweep;
    let n = cfg.samples_for(sw.samples);
    let mut groups: Vec<(f64, f64, f64)> = Vec::new();
    for pt in &sw.points {
        let key = (pt.kappa, pt.rho_minus, pt.rho_plus);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    let mut rows = Vec::with_capacity(sw.points.len());
    for (g, &key) in groups.iter().enumerate() {
        let (kappa, rho_minus, rho_plus) = key;
        let sd = sub_seed(seed, 1000 + g as u64);
        let p = SleParams::new(kappa, rho_minus, rho_plus);
        let l0 = p.as_ref().map(|p| p.lambda0()).unwrap_or(f64::NAN);
        let pts: Vec<_> = sw
            .points
            .iter()
            .filter(|q| (q.kappa, q.rho_minus, q.rho_plus) == key)
            .collect();
        let sample = match &p {
            Ok(p) if sw.mode != SweepMode::Exact && pts.iter().any(|q| q.lambda < l0) => {
                Some(sample_psi_prime(p, n, &cfg.sim, sd))
            }
            _ => None,
        };
        for q in pts {
            let mut row = SweepRow {
                kappa,
                rho_minus,
                rho_plus,
                lambda: q.lambda,
                lambda0: l0,
                exact_value: f64::NAN,
                mc_mean: f64::NAN,
                mc_stderr: f64::NAN,
                n: None,
                z_score: f64::NAN,
                seed: None,
                error: String::new(),
            };
            let exact = match &p {
                Ok(p) => sle_derivative_moment(q.lambda, p),
                Err(e) => {
                    row.error = e.to_string();
                    rows.push(row);
                    continue;
                }
            };
            match &exact {
                Ok(v) if sw.mode != SweepMode::Mc || q.lambda >= l0 => row.exact_value = *v,
                Ok(_) => {}
                Err(e) => row.error = e.to_string(),
            }
            if let (true, Some(s)) = (q.lambda < l0, &sample) {
                match s {
                    Ok(s) => {
                        let m = s.moment(q.lambda);
                        row.mc_mean = m.mean;
                        row.mc_stderr = m.stderr;
                        row.n = Some(m.n);
                        row.seed = Some(sd);
                        if let (Ok(e), SweepMode::Both) = (&exact, sw.mode) {
                            // at λ = 0 both sides are exactly 1
                            row.z_score = if m.stderr > 0.0 {
                                (m.mean - e) / m.stderr
                            } else {
                                0.0
                            };
                        }
                    }
                    Err(e) => row.error = e.to_string(),
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for r in rows {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.kappa),
            fmt_f64(r.rho_minus),
            fmt_f64(r.rho_plus),
            fmt_f64(r.lambda),
            fmt_f64(r.lambda0),
            fmt_f64(r.exact_value),
            fmt_f64(r.mc_mean),
            fmt_f64(r.mc_stderr),
            opt(r.n.map(|v| v as u64)),
            fmt_f64(r.z_score),
            opt(r.seed),
            r.error.replace([',', '\n'], ";"),
        );
    }
    out
}
