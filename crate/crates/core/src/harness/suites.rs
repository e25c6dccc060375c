//! The validation suites: closed-form property checks and the Monte Carlo
//! cross-checks, each producing [`ValidationRecord`]s.

use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::record::{Table, Tolerance, ValidationRecord};
use crate::error::{Error, Result};
use crate::exact::*;
use crate::fieldsim::{
    equivalence_test, gaussian_tail_time_integral, mc_interval_moment_with,
    mc_reflection_moment_with, IntervalSampler, StripSampler,
};
use crate::loewner::sample_psi_prime;
use crate::quad::{integrate_to_infinity, QuadOpts};
use crate::specfun::{
    gamma_complex, gauss_2f1_at_one, log_double_gamma, log_gamma_complex, wrap_log,
};

/// Acceptance groups, in reporting order, with a one-line description.
pub const GROUPS: [(&str, &str); 11] = [
    ("double-gamma-shift", "double gamma shift equations"),
    (
        "double-gamma-normalization",
        "double gamma normalization at the centre",
    ),
    (
        "moment-consistency",
        "moment formula: zeroth moment, root swap, both roots",
    ),
    ("reflection-identity", "reflection identity and R̄(Q) = 1"),
    (
        "three-point-reflection",
        "three-point constant reflection relation",
    ),
    (
        "disk-constants",
        "disk boundary-length constants by quadrature",
    ),
    (
        "cross-formula",
        "cross-formula equality, shift/composition relations, duality",
    ),
    (
        "moment-monte-carlo",
        "Monte Carlo moments of ψ'(1) against the closed form",
    ),
    ("tail-law", "power-law tail of ψ'(1)"),
    (
        "process-equivalence",
        "two constructions of the drifted process agree in law",
    ),
    ("chaos-moments", "boundary chaos moments against R̄ and H̄"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Exact,
    Loewner,
    Fieldsim,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "specfun" => Suite::Specfun,
            "exact" => Suite::Exact,
            "loewner" => Suite::Loewner,
            "fieldsim" => Suite::Fieldsim,
            "all" => Suite::All,
            _ => {
                return Err(Error::Config(format!(
                    "unknown suite '{s}' (specfun, exact, loewner, fieldsim, all)"
                )))
            }
        })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Exact => "exact",
            Suite::Loewner => "loewner",
            Suite::Fieldsim => "fieldsim",
            Suite::All => "all",
        }
    }
}

/// Output of a suite run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub records: Vec<ValidationRecord>,
    /// Tables produced along the way (the tail survival curve).
    #[serde(skip)]
    pub tables: Vec<(String, Table)>,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            0
        } else {
            1
        }
    }

    /// Records of one acceptance group.
    pub fn group(&self, name: &str) -> Vec<&ValidationRecord> {
        self.records.iter().filter(|r| r.group == name).collect()
    }
}

/// Independent seed for a named sub-check (splitmix64 of seed and tag).
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Run a check body, timing it and turning an error into a failed record.
fn timed(
    id: &str,
    group: &str,
    anchor: &str,
    body: impl FnOnce() -> Result<Vec<ValidationRecord>>,
) -> Vec<ValidationRecord> {
    let t = Instant::now();
    let mut recs = body().unwrap_or_else(|e| {
        vec![ValidationRecord::failed(
            id,
            group,
            anchor,
            String::new(),
            &e,
        )]
    });
    let dt = t.elapsed().as_secs_f64() / recs.len().max(1) as f64;
    for r in &mut recs {
        r.runtime = dt;
    }
    recs
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN residuals must fail the check, so they propagate
    it.into_iter().fold(0.0, |m, x| {
        if x.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(x)
        }
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn random_sle(rng: &mut ChaCha8Rng, kmin: f64, kmax: f64) -> SleParams {
    let kappa = rng.random_range(kmin..kmax);
    let lo = (-2.0f64).max(0.5 * kappa - 4.0);
    SleParams {
        kappa,
        rho_minus: rng.random_range(-1.9..4.0),
        rho_plus: rng.random_range(lo + 0.1..lo + 5.0),
    }
}

/// Draw until `count` evaluations succeed (pole-adjacent draws are
/// skipped), giving up after `20·count` attempts.
fn collect_ok<T>(count: usize, mut draw: impl FnMut() -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(count);
    let mut last = None;
    for _ in 0..20 * count {
        match draw() {
            Ok(v) => out.push(v),
            Err(e) => last = Some(e),
        }
        if out.len() == count {
            return Ok(out);
        }
    }
    Err(last.unwrap_or_else(|| Error::Consistency("no successful draws".into())))
}

// ------------------------------------------------------------------ specfun

fn specfun_checks(cfg: &RunConfig) -> Vec<ValidationRecord> {
    let ts = cfg.tolerance_scale;
    let mut out = timed(
        "shift-equations",
        GROUPS[0].0,
        "Γ_b(z)/Γ_b(z+s) = Γ(sz) s^{1/2-sz}/√(2π) for s ∈ {b, 1/b}",
        || {
            let mut worst = 0.0f64;
            let mut count = 0;
            for b in [0.5, 0.9, 1.3] {
                for i in 0..8 {
                    for j in 0..5 {
                        let z = Complex64::new(0.1 + 2.9 * i as f64 / 7.0, -2.0 + j as f64);
                        for s in [b, 1.0 / b] {
                            let lhs = log_double_gamma(b, z)? - log_double_gamma(b, z + s)?;
                            let rhs =
                                log_gamma_complex(s * z)? - 0.5 * LN_2PI + (0.5 - s * z) * s.ln();
                            worst = max_of([worst, (wrap_log(lhs - rhs).exp() - 1.0).norm()]);
                        }
                        count += 1;
                    }
                }
            }
            let inputs = format!("b ∈ {{0.5, 0.9, 1.3}}, {} points z, both shifts", count / 3);
            Ok(vec![ValidationRecord::new(
                "specfun.shift",
                GROUPS[0].0,
                "double gamma shift equations",
                inputs,
                0.0,
                worst,
                Tolerance::AtMost { max: 1e-9 * ts },
            )])
        },
    );
    out.extend(timed("normalization", GROUPS[1].0, "", || {
        let worst = max_of((0..20).map(|i| {
            let b = 0.3 + 1.2 * i as f64 / 19.0;
            log_double_gamma(b, Complex64::new(0.5 * (b + 1.0 / b), 0.0))
                .map(|l| (l.exp() - 1.0).norm())
                .unwrap_or(f64::NAN)
        }));
        Ok(vec![ValidationRecord::new(
            "specfun.normalization",
            GROUPS[1].0,
            "Γ_b((b + 1/b)/2) = 1",
            "20 values of b in [0.3, 1.5]".into(),
            0.0,
            worst,
            Tolerance::AtMost { max: 1e-11 * ts },
        )])
    }));
    out.extend(timed("gauss-summation", "specfun-invariants", "", || {
        // ₂F₁(a, b; c; 1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let worst = max_of(collect_ok(50, || {
            let a = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
            let b = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
            let c = a + b + rng.random_range(0.3..3.0);
            let want = gamma_complex(c)? * gamma_complex(c - a - b)?
                / (gamma_complex(c - a)? * gamma_complex(c - b)?);
            Ok((gauss_2f1_at_one(a, b, c)? - want).norm() / want.norm())
        })?);
        Ok(vec![ValidationRecord::new(
            "specfun.gauss-summation",
            "specfun-invariants",
            "Gauss summation of ₂F₁ at 1",
            "50 random (a, b, c)".into(),
            0.0,
            worst,
            Tolerance::AtMost { max: 1e-10 * ts },
        )])
    }));
    out
}

// ------------------------------------------------------------------ exact

fn exact_checks(cfg: &RunConfig, seed: u64) -> Vec<ValidationRecord> {
    let ts = cfg.tolerance_scale;
    let n = cfg.random_tuples;
    let mut out = Vec::new();

    let g = GROUPS[2].0;
    out.extend(timed("moment-consistency", g, "", || {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 3));
        let draws = collect_ok(n, || {
            let p = random_sle(&mut rng, 0.3, 8.0);
            let zeroth = (sle_derivative_moment(0.0, &p)? - 1.0).abs();
            let s = p.kappa.sqrt();
            let qk = 0.5 * s + 2.0 / s;
            let x = Complex64::new(rng.random_range(0.0..2.0 * qk), rng.random_range(-2.0..2.0));
            let swap = wrap_log(ln_f(x, &p)? - ln_f(2.0 * qk - x, &p)?).norm();
            let lam = rng.random_range(-3.0..p.lambda0() - 0.05);
            let (a1, a2) = alpha_roots(lam, p.kappa);
            let roots = wrap_log(ln_f(a1, &p)? - ln_f(a2, &p)?).norm();
            Ok((zeroth, swap, roots))
        })?;
        let inputs = format!("{n} random (κ, ρ₋, ρ₊), κ ∈ (0.3, 8)");
        Ok(vec![
            ValidationRecord::new(
                "exact.zeroth-moment",
                g,
                "E[ψ'(1)^0] = 1",
                inputs.clone(),
                0.0,
                max_of(draws.iter().map(|d| d.0)),
                Tolerance::AtMost { max: 1e-12 * ts },
            ),
            ValidationRecord::new(
                "exact.root-swap",
                g,
                "F(x) = F(2Q_κ - x)",
                inputs.clone(),
                0.0,
                max_of(draws.iter().map(|d| d.1)),
                Tolerance::AtMost { max: 1e-10 * ts },
            ),
            ValidationRecord::new(
                "exact.both-roots",
                g,
                "the moment does not depend on the choice of α",
                inputs,
                0.0,
                max_of(draws.iter().map(|d| d.2)),
                Tolerance::AtMost { max: 1e-10 * ts },
            ),
        ])
    }));

    let g = GROUPS[3].0;
    out.extend(timed("reflection-identity", g, "", || {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 4));
        let res = collect_ok(100, || {
            let gm = rng.random_range(0.4..1.9);
            let q = background_charge(gm);
            let beta = rng.random_range(0.5 * gm + 0.05..q + 0.5 * gm - 0.05);
            // a third of the draws one-sided, the rest two-sided (complex σ)
            let mu2 = if rng.random_bool(1.0 / 3.0) {
                0.0
            } else {
                rng.random_range(0.2..4.0)
            };
            let c = BoundaryCosmology::new(rng.random_range(0.2..4.0), mu2, gm)?;
            Ok((reflection(beta, &c, gm)? * reflection(2.0 * q - beta, &c, gm)? - 1.0).abs())
        })?;
        let at_q = max_of([0.5, 1.0, 1.5, 1.9].iter().flat_map(|&gm| {
            [(1.0, 0.0), (0.0, 3.0), (1.0, 1.0), (0.3, 2.2)].map(|(m1, m2)| {
                BoundaryCosmology::new(m1, m2, gm)
                    .and_then(|c| reflection_bar(background_charge(gm), &c, gm))
                    .map(|v| (v - 1.0).abs())
                    .unwrap_or(f64::NAN)
            })
        }));
        Ok(vec![
            ValidationRecord::new(
                "exact.reflection",
                g,
                "R(β)R(2Q - β) = 1",
                "100 random (γ, β, μ₁, μ₂), two-sided included".into(),
                0.0,
                max_of(res),
                Tolerance::AtMost { max: 1e-8 * ts },
            ),
            ValidationRecord::new(
                "exact.reflection-at-q",
                g,
                "R̄(Q, μ₁, μ₂) = 1",
                "γ ∈ {0.5, 1, 1.5, 1.9} × 4 cosmologies".into(),
                0.0,
                at_q,
                Tolerance::AtMost { max: 1e-8 * ts },
            ),
        ])
    }));

    let g = GROUPS[4].0;
    out.extend(timed("three-point-reflection", g, "", || {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 5));
        let res = collect_ok(100, || {
            let gm = rng.random_range(0.5..1.8);
            let q = background_charge(gm);
            let beta = rng.random_range(0.3..q + 0.4 * gm);
            let alpha = rng.random_range(0.3..2.0 * q);
            let one = BoundaryCosmology::one_sided(1.0, gm)?;
            let lhs = h(beta, alpha, gm)?;
            let r = reflection(beta, &one, gm)?;
            let rhs = h(2.0 * q - beta, alpha, gm)?;
            Ok((lhs - r * r * rhs).abs() / lhs.abs().max(1.0))
        })?;
        Ok(vec![ValidationRecord::new(
            "exact.h-reflection",
            g,
            "H^{(β,β,α)} = R(β,1,0)² H^{(2Q-β,2Q-β,α)}",
            "100 random (β, α, γ)".into(),
            0.0,
            max_of(res),
            Tolerance::AtMost { max: 1e-8 * ts },
        )])
    }));

    let g = GROUPS[5].0;
    out.extend(timed("disk-constants", g, "", || {
        let opts = QuadOpts {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_panels: 4000,
        };
        let mut recs = Vec::new();
        for gm in [0.8f64, 1.0, 1.4] {
            let mut err = None;
            let mut mass = |w: f64| {
                integrate_to_infinity(
                    |r| {
                        disk_length_joint_density(w, 1.0, r, gm).unwrap_or_else(|e| {
                            err.get_or_insert(e);
                            f64::NAN
                        })
                    },
                    0.0,
                    opts,
                )
                .map(|q| q.value)
            };
            let m2 = mass(2.0)?;
            let mh = mass(0.5 * gm * gm)?;
            if let Some(e) = err {
                return Err(e);
            }
            let rb = reflection_bar(gm, &BoundaryCosmology::one_sided(1.0, gm)?, gm)?;
            recs.push(ValidationRecord::new(
                "exact.disk-weight-2",
                g,
                "∫ joint density of the weight-2 disk over the right length = R̄(γ, 1, 0)",
                format!("γ = {gm}"),
                rb,
                m2,
                Tolerance::Relative { tol: 1e-8 * ts },
            ));
            recs.push(ValidationRecord::new(
                "exact.disk-weight-gamma2-half",
                g,
                "∫ joint density of the weight-γ²/2 disk over the right length = 1",
                format!("γ = {gm}"),
                1.0,
                mh,
                Tolerance::Relative { tol: 1e-8 * ts },
            ));
        }
        Ok(recs)
    }));

    let g = GROUPS[6].0;
    out.extend(timed("cross-formula", g, "", || {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 6));
        let ratio = collect_ok(100, || {
            let p = random_sle(&mut rng, 0.3, 3.95);
            let lam = rng.random_range(-3.0..p.lambda0() - 0.05);
            let lq = LqgParams::from_sle(&p)?;
            Ok(rel(
                sle_derivative_moment(lam, &p)?,
                m_general(lam, lq.beta_minus, lq.beta_plus, lq.gamma)?,
            ))
        })?;
        let special = collect_ok(100, || {
            let gm = rng.random_range(0.4..1.95);
            let bp = rng.random_range(-1.0..background_charge(gm) + 0.5 * gm - 0.05);
            let lam = rng.random_range(-3.0..lambda0_beta(bp, gm) - 0.05);
            let mut worst = 0.0f64;
            for which in [Insertion::Gamma, Insertion::Q] {
                let s = m_special(which, lam, bp, gm)?;
                worst = worst.max(rel(s, m_general(lam, which.beta_minus(gm), bp, gm)?));
                // the hypergeometric form has its own (narrower) domain
                if let Ok(hg) = m_special_hypergeometric(which, lam, bp, gm) {
                    worst = worst.max(rel(s, hg));
                }
            }
            Ok(worst)
        })?;
        let relations = collect_ok(100, || {
            let gm = rng.random_range(0.5..1.9);
            let q = background_charge(gm);
            let top = q + 0.5 * gm;
            let (bm, bp) = (
                rng.random_range(-0.5..top - 0.1),
                rng.random_range(-0.5..top - 0.1),
            );
            let lam = rng.random_range(-2.5..-0.05);
            let base = m_general(lam, bm, bp, gm)?;
            let mut worst = 0.0f64;
            for (by, s) in [
                (ShiftBy::TwoOverGamma, 2.0 / gm),
                (ShiftBy::HalfGamma, 0.5 * gm),
            ] {
                worst = worst.max(rel(
                    m_general(lam, bm - s, bp, gm)? / base,
                    m_shift_ratio(by, lam, bm, bp, gm)?,
                ));
            }
            let beta = rng.random_range(-0.5..top - 0.1);
            let lhs = m_general(lam, beta + bm - q - 0.5 * gm, bp, gm)?;
            let rhs = m_general(lam, beta, bm + bp - q - 0.5 * gm, gm)? * base;
            Ok((worst, rel(lhs, rhs)))
        })?;
        let duality = collect_ok(100, || {
            let kappa = rng.random_range(4.05..16.0);
            let p = SleParams {
                kappa,
                rho_minus: rng.random_range(-1.9..3.0),
                rho_plus: rng.random_range(0.5 * kappa - 3.9..0.5 * kappa),
            };
            let d = duality_map(&p)?;
            let lam = rng.random_range(-2.0..p.lambda0().min(1.0) - 0.05);
            Ok(rel(
                sle_derivative_moment(lam, &p)?,
                sle_derivative_moment(lam, &d)?,
            ))
        })?;
        Ok(vec![
            ValidationRecord::new(
                "exact.ratio-vs-product",
                g,
                "F-ratio form = Liouville product form",
                "100 random tuples, λ < λ₀".into(),
                0.0,
                max_of(ratio),
                Tolerance::AtMost { max: 1e-9 * ts },
            ),
            ValidationRecord::new(
                "exact.special-insertions",
                g,
                "β₋ ∈ {γ, Q}: Γ-ratio = product = hypergeometric form",
                "100 random (γ, β₊, λ)".into(),
                0.0,
                max_of(special),
                Tolerance::AtMost { max: 1e-9 * ts },
            ),
            ValidationRecord::new(
                "exact.shift-relations",
                g,
                "shift relations of the moment in β₋",
                "100 random (γ, β±, λ)".into(),
                0.0,
                max_of(relations.iter().map(|r| r.0)),
                Tolerance::AtMost { max: 1e-8 * ts },
            ),
            ValidationRecord::new(
                "exact.composition",
                g,
                "composition relation of the moment",
                "100 random (γ, β, β±, λ)".into(),
                0.0,
                max_of(relations.iter().map(|r| r.1)),
                Tolerance::AtMost { max: 1e-8 * ts },
            ),
            ValidationRecord::new(
                "exact.duality",
                g,
                "moment invariant under κ ↦ 16/κ",
                "100 random tuples, κ ∈ (4, 16]".into(),
                0.0,
                max_of(duality),
                Tolerance::AtMost { max: 1e-10 * ts },
            ),
        ])
    }));
    out
}

// ------------------------------------------------------------------ loewner

fn loewner_checks(
    cfg: &RunConfig,
    seed: u64,
    tables: &mut Vec<(String, Table)>,
) -> Vec<ValidationRecord> {
    let ts = cfg.tolerance_scale;
    let h = &cfg.headline;
    let n = cfg.samples_for(h.samples);
    let g = GROUPS[7].0;
    let mut out = Vec::new();
    for (k, t) in h.tuples.iter().enumerate() {
        let sd = sub_seed(seed, 100 + k as u64);
        out.extend(timed("moment-mc", g, "", || {
            let p = t.params()?;
            let s = sample_psi_prime(&p, n, &cfg.sim, sd)?;
            let mut recs = Vec::new();
            for &lam in &h.lambdas {
                let exact = sle_derivative_moment(lam, &p)?;
                let m = s.moment(lam);
                let inputs = format!(
                    "κ = {}, ρ₋ = {}, ρ₊ = {}, λ = {lam}, N = {n}, seed = {sd}",
                    t.kappa, t.rho_minus, t.rho_plus
                );
                let mut r = ValidationRecord::new(
                    "loewner.moment",
                    g,
                    "E[ψ'(1)^λ] = F(α)/F(√κ)",
                    inputs.clone(),
                    exact,
                    m.mean,
                    Tolerance::Sigma {
                        k: h.z_max * ts,
                        stderr: m.stderr,
                    },
                );
                if m.flagged {
                    r.status = super::record::Status::Fail;
                    r.note = format!("acceptance {:.3} below threshold", m.acceptance);
                }
                recs.push(r);
                recs.push(ValidationRecord::new(
                    "loewner.moment-precision",
                    g,
                    "standard error relative to the exact moment",
                    inputs,
                    0.0,
                    m.stderr / exact,
                    Tolerance::AtMost {
                        max: h.rel_stderr_max * ts,
                    },
                ));
            }
            Ok(recs)
        }));
    }

    let t = &cfg.tail;
    let g = GROUPS[8].0;
    out.extend(timed("tail-law", g, "", || {
        let p = t.tuple.params()?;
        let n = cfg.samples_for(t.samples);
        let sd = sub_seed(seed, 200);
        let s = sample_psi_prime(&p, n, &cfg.sim, sd)?;
        let fit = s.tail_fit(t.y_lo, t.y_hi, t.points);
        let l0 = p.lambda0();
        let mut table = Table::new(&["y", "survival", "fit", "reference"]);
        if let (Some(&y0), Some(&s0)) = (fit.levels.first(), fit.survival.first()) {
            for (&y, &sv) in fit.levels.iter().zip(&fit.survival) {
                table.rows.push(vec![
                    y,
                    sv,
                    s0 * (y / y0).powf(fit.slope),
                    s0 * (y / y0).powf(-l0),
                ]);
            }
        }
        tables.push(("tail-law".into(), table));
        let inputs = format!(
            "κ = {}, ρ₋ = {}, ρ₊ = {}, N = {n}, y ∈ ({}, {}), seed = {sd}",
            t.tuple.kappa, t.tuple.rho_minus, t.tuple.rho_plus, t.y_lo, t.y_hi
        );
        Ok(vec![ValidationRecord::new(
            "loewner.tail-slope",
            g,
            "P[ψ'(1) > y] = y^{-λ₀ + o(1)}",
            inputs,
            -l0,
            fit.slope,
            Tolerance::Relative {
                tol: t.rel_tol * ts,
            },
        )])
    }));
    out
}

// ------------------------------------------------------------------ fieldsim

fn fieldsim_checks(cfg: &RunConfig, seed: u64) -> Vec<ValidationRecord> {
    let ts = cfg.tolerance_scale;
    let e = &cfg.equivalence;
    let g = GROUPS[9].0;
    let mut out = Vec::new();
    out.extend(timed("tail-time-integral", g, "", || {
        let worst = max_of(e.tail_drifts.iter().map(|&a| {
            gaussian_tail_time_integral(a)
                .map(|v| (v * 2.0 * a * a - 1.0).abs())
                .unwrap_or(f64::NAN)
        }));
        Ok(vec![ValidationRecord::new(
            "fieldsim.tail-time-integral",
            g,
            "∫₀^∞ P[Z > a√t] dt = 1/(2a²)",
            format!("a ∈ {:?}", e.tail_drifts),
            0.0,
            worst,
            Tolerance::AtMost {
                max: e.tail_tol * ts,
            },
        )])
    }));
    let n = cfg.samples_for(e.samples);
    for (k, &(a, m)) in e.pairs.iter().enumerate() {
        let sd = sub_seed(seed, 300 + k as u64);
        out.extend(timed("equivalence", g, "", || {
            let r = equivalence_test(a, m, n, sd)?;
            let inputs = format!(
                "a = {a}, M = {m}, n = {n}, seed = {sd}, p = {:?}",
                r.p_values
            );
            Ok(vec![ValidationRecord::new(
                "fieldsim.equivalence",
                g,
                "X₂ given X₂(0) > -M agrees in law with A^M recentred at a uniform time above -M",
                inputs,
                e.p_min,
                r.min_p(),
                Tolerance::AtLeast { min: e.p_min / ts },
            )])
        }));
    }

    let gc = &cfg.gmc;
    let g = GROUPS[10].0;
    let n = cfg.samples_for(gc.samples);
    let strip = StripSampler::new(gc.strip);
    for (k, r) in gc.reflection.iter().enumerate() {
        let sd = sub_seed(seed, 400 + k as u64);
        out.extend(timed("reflection-moment", g, "", || {
            let sampler = strip.as_ref().map_err(|e| Error::Config(e.to_string()))?;
            let c = BoundaryCosmology::new(r.mu1, r.mu2, r.gamma)?;
            let est = mc_reflection_moment_with(sampler, r.beta, &c, r.gamma, n, sd)?;
            let exact = reflection_bar(r.beta, &c, r.gamma)?;
            let inputs = format!(
                "γ = {}, β = {:.6}, μ = ({}, {}), L = {}, cells = {}, n = {n}, seed = {sd}, fine = {:.6}, coarse = {:.6}, stderr = {:.3e}",
                r.gamma, r.beta, r.mu1, r.mu2, gc.strip.half_width, gc.strip.cells, est.fine.mean, est.coarse.mean, est.extrapolated.stderr
            );
            let mut rec = ValidationRecord::new(
                "fieldsim.reflection-moment",
                g,
                "E[(μ₁ν(ℝ) + μ₂ν(ℝ+πi))^{(2/γ)(Q-β)}] = R̄(β, μ₁, μ₂)",
                inputs,
                exact,
                est.extrapolated.mean,
                Tolerance::Relative { tol: gc.rel_tol * ts },
            );
            if est.variance_flag {
                rec.note = "relative standard error above 0.2".into();
            }
            Ok(vec![rec])
        }));
    }
    let interval = IntervalSampler::new(gc.interval_grid);
    for (k, i) in gc.interval.iter().enumerate() {
        let sd = sub_seed(seed, 500 + k as u64);
        out.extend(timed("interval-moment", g, "", || {
            let sampler = interval.as_ref().map_err(|e| Error::Config(e.to_string()))?;
            let est = mc_interval_moment_with(sampler, i.beta, i.alpha, i.gamma, n, sd)?;
            let exact = h_bar(i.beta, i.alpha, i.gamma)?;
            let inputs = format!(
                "γ = {}, β = {}, α = {}, cells = {}, n = {n}, seed = {sd}, fine = {:.6}, coarse = {:.6}, stderr = {:.3e}",
                i.gamma, i.beta, i.alpha, gc.interval_grid.cells, est.fine.mean, est.coarse.mean, est.extrapolated.stderr
            );
            let mut rec = ValidationRecord::new(
                "fieldsim.interval-moment",
                g,
                "E[ν((0,1))^{(2/γ)(Q-β-α/2)}] = H̄^{(β,β,α)}",
                inputs,
                exact,
                est.extrapolated.mean,
                Tolerance::Relative { tol: gc.rel_tol * ts },
            );
            if est.variance_flag {
                rec.note = "relative standard error above 0.2".into();
            }
            Ok(vec![rec])
        }));
    }
    out
}

/// Run one suite (or all of them). The config must already be validated
/// and carry a seed.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let seed = cfg
        .seed
        .ok_or_else(|| Error::Config("run_suite needs a resolved seed".into()))?;
    let mut records = Vec::new();
    let mut tables = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Specfun {
        records.extend(specfun_checks(cfg));
    }
    if all || suite == Suite::Exact {
        records.extend(exact_checks(cfg, seed));
    }
    if all || suite == Suite::Loewner {
        records.extend(loewner_checks(cfg, seed, &mut tables));
    }
    if all || suite == Suite::Fieldsim {
        records.extend(fieldsim_checks(cfg, seed));
    }
    let passed = records.iter().filter(|r| r.passed()).count();
    Ok(SuiteReport {
        suite,
        seed,
        passed,
        failed: records.len() - passed,
        records,
        tables,
    })
}
