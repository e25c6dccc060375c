//! Run configuration: JSON file, overridden by command-line flags.
//!
//! Precedence, lowest first: built-in defaults, the config file, then
//! `--seed`, `--samples`, `--tolerance-scale` and `--out`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{background_charge, BoundaryCosmology, SleParams};
use crate::fieldsim::{
    interval_exponent, reflection_exponent, IntervalGrid, StripGrid, MAX_REFLECTION_EXPONENT,
};
use crate::loewner::SimConfig;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SleTuple {
    pub kappa: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
}

impl SleTuple {
    pub fn params(&self) -> Result<SleParams> {
        SleParams::new(self.kappa, self.rho_minus, self.rho_plus)
    }
}

/// Monte Carlo check of the moment formula on a parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeadlineConfig {
    pub tuples: Vec<SleTuple>,
    pub lambdas: Vec<f64>,
    pub samples: usize,
    /// Largest accepted `|z|`.
    pub z_max: f64,
    /// Largest accepted `stderr / exact`.
    pub rel_stderr_max: f64,
}

impl Default for HeadlineConfig {
    fn default() -> Self {
        let mut tuples = Vec::new();
        for kappa in [2.0, 3.0] {
            for rho_minus in [0.0, 1.0] {
                for rho_plus in [0.5 * kappa - 1.5, 2.0] {
                    tuples.push(SleTuple {
                        kappa,
                        rho_minus,
                        rho_plus,
                    });
                }
            }
        }
        HeadlineConfig {
            tuples,
            lambdas: vec![-1.0, -0.5],
            samples: 100_000,
            z_max: 3.0,
            rel_stderr_max: 0.02,
        }
    }
}

/// Power-law tail of `ψ'(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TailConfig {
    pub tuple: SleTuple,
    pub samples: usize,
    pub y_lo: f64,
    pub y_hi: f64,
    pub points: usize,
    /// Relative tolerance of the fitted slope against `-λ₀`.
    pub rel_tol: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig {
            tuple: SleTuple {
                kappa: 2.0,
                rho_minus: 0.0,
                rho_plus: -0.9,
            },
            samples: 100_000,
            y_lo: 10.0,
            y_hi: 1000.0,
            points: 12,
            rel_tol: 0.15,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquivalenceConfig {
    /// `(a, M)` pairs.
    pub pairs: Vec<(f64, f64)>,
    pub samples: usize,
    pub p_min: f64,
    /// Drifts at which the tail-time integral is checked.
    pub tail_drifts: Vec<f64>,
    pub tail_tol: f64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        EquivalenceConfig {
            pairs: vec![(0.5, 1.0), (1.0, 0.5), (2.0, 2.0)],
            samples: 5000,
            p_min: 0.01,
            tail_drifts: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            tail_tol: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectionPoint {
    pub gamma: f64,
    pub beta: f64,
    pub mu1: f64,
    pub mu2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalPoint {
    pub gamma: f64,
    pub beta: f64,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GmcConfig {
    pub reflection: Vec<ReflectionPoint>,
    pub strip: StripGrid,
    pub interval: Vec<IntervalPoint>,
    pub interval_grid: IntervalGrid,
    pub samples: usize,
    pub rel_tol: f64,
}

impl Default for GmcConfig {
    fn default() -> Self {
        let q = |g: f64| background_charge(g);
        GmcConfig {
            reflection: vec![
                ReflectionPoint {
                    gamma: 1.5,
                    beta: 0.9 * q(1.5),
                    mu1: 1.0,
                    mu2: 0.0,
                },
                ReflectionPoint {
                    gamma: 1.0,
                    beta: 0.9 * q(1.0),
                    mu1: 1.0,
                    mu2: 1.0,
                },
            ],
            strip: StripGrid {
                half_width: 200.0,
                cells: 8192,
                both_lines: true,
            },
            interval: vec![
                IntervalPoint {
                    gamma: 1.0,
                    beta: 0.5,
                    alpha: 2.5,
                },
                IntervalPoint {
                    gamma: 1.2,
                    beta: 0.6,
                    alpha: 2.4,
                },
            ],
            interval_grid: IntervalGrid {
                cells: 1024,
                grading: 2.0,
            },
            samples: 4000,
            rel_tol: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exact,
    Mc,
    #[default]
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    pub kappa: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub points: Vec<SweepPoint>,
    pub mode: SweepMode,
    pub samples: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let mut points = Vec::new();
        for (kappa, rho_minus, rho_plus) in [(2.0, 0.0, 0.5), (3.0, 1.0, 2.0)] {
            for lambda in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0] {
                points.push(SweepPoint {
                    kappa,
                    rho_minus,
                    rho_plus,
                    lambda,
                });
            }
        }
        SweepConfig {
            points,
            mode: SweepMode::Both,
            samples: 20_000,
        }
    }
}

/// Everything a run needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; drawn from entropy (and recorded) when absent.
    pub seed: Option<u64>,
    /// Output directory.
    pub out: Option<PathBuf>,
    /// Overrides every Monte Carlo sample count.
    pub samples: Option<usize>,
    /// Multiplies every tolerance.
    pub tolerance_scale: f64,
    /// Random parameter tuples per exact property check.
    pub random_tuples: usize,
    pub sim: SimConfig,
    pub headline: HeadlineConfig,
    pub tail: TailConfig,
    pub equivalence: EquivalenceConfig,
    pub gmc: GmcConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: None,
            out: None,
            samples: None,
            tolerance_scale: 1.0,
            random_tuples: 200,
            sim: SimConfig::default(),
            headline: HeadlineConfig::default(),
            tail: TailConfig::default(),
            equivalence: EquivalenceConfig::default(),
            gmc: GmcConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

fn bad(msg: String) -> Error {
    Error::Config(msg)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| bad(format!("config: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Sample count for a block, after the global override.
    pub fn samples_for(&self, block: usize) -> usize {
        self.samples.unwrap_or(block)
    }

    /// Seed to use, drawing one from entropy if none was given.
    pub fn resolve_seed(&mut self) -> u64 {
        *self.seed.get_or_insert_with(rand::random)
    }

    /// Check every numeric field against the preconditions of the module
    /// that will consume it.
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |x: f64| x.is_finite() && x > 0.0;
        if !finite_pos(self.tolerance_scale) {
            return Err(bad(format!(
                "tolerance_scale = {} must be positive",
                self.tolerance_scale
            )));
        }
        if self.samples == Some(0) || self.random_tuples == 0 {
            return Err(bad("sample and tuple counts must be positive".into()));
        }
        self.sim.validate()?;

        let h = &self.headline;
        if h.samples < 2
            || h.lambdas.iter().any(|l| !l.is_finite())
            || !finite_pos(h.z_max)
            || !finite_pos(h.rel_stderr_max)
        {
            return Err(bad(
                "headline: need ≥ 2 samples, finite λ and positive tolerances".into(),
            ));
        }
        for t in &h.tuples {
            let p = t
                .params()
                .map_err(|e| bad(format!("headline tuple {t:?}: {e}")))?;
            if !p.non_touching() {
                return Err(bad(format!(
                    "headline tuple {t:?} is in the touching regime"
                )));
            }
        }
        let t = &self.tail;
        let p = t
            .tuple
            .params()
            .map_err(|e| bad(format!("tail tuple: {e}")))?;
        if !p.non_touching()
            || t.samples < 2
            || !(finite_pos(t.y_lo) && t.y_hi > t.y_lo)
            || t.points < 2
            || !finite_pos(t.rel_tol)
        {
            return Err(bad(format!("tail block invalid: {t:?}")));
        }
        let e = &self.equivalence;
        if e.samples < 10 || !(e.p_min > 0.0 && e.p_min < 1.0) || !finite_pos(e.tail_tol) {
            return Err(bad("equivalence: need ≥ 10 samples, p_min in (0, 1)".into()));
        }
        if e.pairs
            .iter()
            .any(|&(a, m)| !finite_pos(a) || !m.is_finite())
            || e.tail_drifts.iter().any(|&a| !finite_pos(a))
        {
            return Err(bad(
                "equivalence: drifts must be positive and M finite".into()
            ));
        }
        let g = &self.gmc;
        if g.samples < 2 || !finite_pos(g.rel_tol) {
            return Err(bad("gmc: need ≥ 2 samples and a positive tolerance".into()));
        }
        g.strip.validate()?;
        g.interval_grid.validate()?;
        for r in &g.reflection {
            let gm = r.gamma;
            BoundaryCosmology::new(r.mu1, r.mu2, gm)
                .map_err(|e| bad(format!("gmc point {r:?}: {e}")))?;
            let q = background_charge(gm);
            if !(gm > 0.0 && gm < 2.0 && r.beta > 0.5 * gm && r.beta < q)
                || reflection_exponent(r.beta, gm) > MAX_REFLECTION_EXPONENT + 1e-12
            {
                return Err(bad(format!(
                    "gmc point {r:?}: need β ∈ (γ/2, Q) with exponent ≤ {MAX_REFLECTION_EXPONENT}"
                )));
            }
            if r.mu1 > 0.0 && r.mu2 > 0.0 && !g.strip.both_lines {
                return Err(bad(format!(
                    "gmc point {r:?} is two-sided but the strip grid has one line"
                )));
            }
        }
        for i in &g.interval {
            let q = background_charge(i.gamma);
            let ok = i.gamma > 0.0
                && i.gamma < 2.0
                && i.alpha > 0.0
                && 0.5 * i.alpha + i.beta > 0.5 * i.gamma
                && i.beta < q
                && 0.5 * i.gamma * i.beta < 1.0;
            if !ok || !interval_exponent(i.beta, i.alpha, i.gamma).is_finite() {
                return Err(bad(format!(
                    "gmc interval point {i:?} violates α > 0, α/2 + β > γ/2, β < Q, γβ/2 < 1"
                )));
            }
        }
        let s = &self.sweep;
        if s.samples < 2 {
            return Err(bad("sweep: need ≥ 2 samples".into()));
        }
        for p in &s.points {
            if !p.lambda.is_finite() {
                return Err(bad(format!("sweep point {p:?}: λ must be finite")));
            }
            SleParams::new(p.kappa, p.rho_minus, p.rho_plus)
                .map_err(|e| bad(format!("sweep point {p:?}: {e}")))?;
        }
        Ok(())
    }
}
