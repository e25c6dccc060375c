//! Monte Carlo estimation of `E[ψ'(1)^λ]`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::driving::{StepEvent, Stepper};
use super::flow::PointState;
use super::SimConfig;
use crate::error::{domain, Result};
use crate::exact::SleParams;
use crate::mc::{pairwise_sum, par_map, stream_rng, MeanStats};

/// Fate of one simulated path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathOutcome {
    Accepted {
        psi: f64,
        diag: f64,
    },
    /// Tail diagnostic above tolerance; sample discarded.
    NotConverged {
        psi: f64,
        diag: f64,
    },
    /// The point 1 was swallowed at this capacity time.
    Swallowed {
        time: f64,
    },
    /// Step budget exhausted (force point collision below resolution).
    Rejected,
}

/// Fused driving + point integration for one path.
struct PathRun {
    s: Stepper,
    pt: PointState,
    decade: f64,
    ln_ratio_decade: Option<f64>,
    steps: usize,
    outcome: Option<PathOutcome>,
}

impl PathRun {
    fn new(p: &SleParams, cfg: &SimConfig, dt: f64) -> Self {
        Self::from_stepper(Stepper::with_clock_step(p, cfg, dt), cfg)
    }

    fn from_stepper(s: Stepper, cfg: &SimConfig) -> Self {
        let pt = PointState::new(1.0 - s.v_plus);
        PathRun {
            s,
            pt,
            decade: 0.1 * cfg.t_max,
            ln_ratio_decade: None,
            steps: 0,
            outcome: None,
        }
    }

    fn running(&self) -> bool {
        self.outcome.is_none()
    }

    fn advance(&mut self, z: f64, cfg: &SimConfig) {
        let s = &mut self.s;
        if s.t >= cfg.t_max {
            let lr = self.pt.ln_ratio();
            let diag = (lr - self.ln_ratio_decade.unwrap_or(0.0)).exp_m1().abs();
            let psi = lr.exp();
            self.outcome = Some(if diag < cfg.tail_tol {
                PathOutcome::Accepted { psi, diag }
            } else {
                PathOutcome::NotConverged { psi, diag }
            });
            return;
        }
        if self.steps >= cfg.max_steps {
            self.outcome = Some(PathOutcome::Rejected);
            return;
        }
        self.steps += 1;
        if self.ln_ratio_decade.is_none() && s.t > self.decade {
            self.ln_ratio_decade = Some(self.pt.ln_ratio());
        }
        let (x0, q0) = (s.x, s.rate);
        let (_, event) = s.step_with(z);
        self.pt
            .advance(x0, s.x, 0.5 * s.dtau * q0, 0.5 * s.dtau * s.rate);
        if event == StepEvent::HitPlus && self.pt.gap() < cfg.swallow_eps {
            self.outcome = Some(PathOutcome::Swallowed { time: s.t });
        }
    }
}

/// Simulate one path and read off `ψ'(1)` without storing the trajectory.
///
/// Uses exactly the stepper of [`super::sample_driving`], so the value agrees
/// with `psi_prime(track_point(sample_driving(..)))` up to rounding.
pub fn simulate_psi_prime(p: &SleParams, cfg: &SimConfig, seed: u64, index: u64) -> PathOutcome {
    let mut rng = stream_rng(seed, index);
    let mut run = PathRun::new(p, cfg, cfg.dt);
    while run.running() {
        let z: f64 = rng.sample(StandardNormal);
        run.advance(z, cfg);
    }
    run.outcome.expect("finished")
}

/// The same path at clock steps `dt` and `dt/2`, driven by the same
/// Brownian motion (each coarse increment is the sum of two fine ones).
pub fn simulate_psi_prime_pair(
    p: &SleParams,
    cfg: &SimConfig,
    seed: u64,
    index: u64,
) -> (PathOutcome, PathOutcome) {
    let mut rng = stream_rng(seed, index);
    let mut coarse = PathRun::new(p, cfg, cfg.dt);
    let mut fine = PathRun::new(p, cfg, 0.5 * cfg.dt);
    while coarse.running() || fine.running() {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        if coarse.running() {
            coarse.advance((z1 + z2) * std::f64::consts::FRAC_1_SQRT_2, cfg);
        }
        for z in [z1, z2] {
            if fine.running() {
                fine.advance(z, cfg);
            }
        }
    }
    (
        coarse.outcome.expect("finished"),
        fine.outcome.expect("finished"),
    )
}

/// Start-offset study: the same path started from `(0, ±ε)` and from
/// `(0, ±ε/factor)`. The second run first evolves on an independent stream
/// until its gaps reach size `ε`, then both consume the same increments.
pub fn simulate_psi_prime_start_pair(
    p: &SleParams,
    cfg: &SimConfig,
    factor: f64,
    seed: u64,
    index: u64,
) -> (PathOutcome, PathOutcome) {
    let eps = cfg.start_eps();
    let small = SimConfig {
        start_eps: Some(eps / factor),
        ..*cfg
    };
    let mut burn = stream_rng(seed, index | (1 << 63));
    let mut s = Stepper::new(p, &small);
    while (s.x * s.y).sqrt() < eps && s.t < cfg.t_max {
        s.step(&mut burn);
    }
    let mut a = PathRun::new(p, cfg, cfg.dt);
    let mut b = PathRun::from_stepper(s, cfg);
    let mut rng = stream_rng(seed, index);
    while a.running() || b.running() {
        let z: f64 = rng.sample(StandardNormal);
        for run in [&mut a, &mut b] {
            if run.running() {
                run.advance(z, cfg);
            }
        }
    }
    (a.outcome.expect("finished"), b.outcome.expect("finished"))
}

/// Accepted `ψ'(1)` samples of a run plus bookkeeping.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PsiSample {
    pub params: SleParams,
    pub seed: u64,
    /// Requested number of paths.
    pub n: usize,
    /// Accepted values, in sample-index order.
    pub values: Vec<f64>,
    pub not_converged: usize,
    pub swallowed: usize,
    pub rejected: usize,
    /// Largest tail diagnostic among accepted samples.
    pub diag_max: f64,
}

/// Minimum accepted fraction before a run is flagged.
pub const MIN_ACCEPTANCE: f64 = 0.95;

impl PsiSample {
    pub fn acceptance(&self) -> f64 {
        self.values.len() as f64 / self.n.max(1) as f64
    }

    pub fn flagged(&self) -> bool {
        self.acceptance() < MIN_ACCEPTANCE
    }

    /// Sample mean of `ψ'(1)^λ` over the accepted paths.
    pub fn moment(&self, lambda: f64) -> MomentEstimate {
        let v: Vec<f64> = self.values.iter().map(|x| x.powf(lambda)).collect();
        let s = MeanStats::of(&v);
        MomentEstimate {
            lambda,
            mean: s.mean,
            stderr: s.stderr,
            n: s.n,
            truncation_diag: self.diag_max,
            seed: self.seed,
            acceptance: self.acceptance(),
            flagged: self.flagged(),
            heavy_tailed: lambda > 0.0,
        }
    }

    /// Empirical survival function `P[ψ'(1) > y]` at the given levels.
    pub fn survival(&self, levels: &[f64]) -> Vec<f64> {
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        let n = self.n as f64;
        levels
            .iter()
            .map(|&y| (sorted.len() - sorted.partition_point(|&v| v <= y)) as f64 / n)
            .collect()
    }

    /// Least-squares slope of `ln P[ψ' > y]` against `ln y` on `points`
    /// log-spaced levels in `[lo, hi]` (levels with no exceedances dropped).
    pub fn tail_fit(&self, lo: f64, hi: f64, points: usize) -> TailFit {
        let levels: Vec<f64> = (0..points)
            .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
            .collect();
        let surv = self.survival(&levels);
        let pts: Vec<(f64, f64)> = levels
            .iter()
            .zip(&surv)
            .filter(|(_, &s)| s > 0.0)
            .map(|(&y, &s)| (y, s))
            .collect();
        let slope = if pts.len() < 2 {
            f64::NAN
        } else {
            let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
            let m = xs.len() as f64;
            let (mx, my) = (pairwise_sum(&xs) / m, pairwise_sum(&ys) / m);
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            sxy / sxx
        };
        TailFit {
            slope,
            levels: pts.iter().map(|p| p.0).collect(),
            survival: pts.iter().map(|p| p.1).collect(),
        }
    }
}

/// Power-law fit to the upper tail of `ψ'(1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailFit {
    pub slope: f64,
    pub levels: Vec<f64>,
    pub survival: Vec<f64>,
}

/// Monte Carlo estimate of `E[ψ'(1)^λ]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub lambda: f64,
    pub mean: f64,
    pub stderr: f64,
    /// Accepted samples.
    pub n: usize,
    /// Max relative change of the estimator over the last decade of capacity.
    pub truncation_diag: f64,
    pub seed: u64,
    pub acceptance: f64,
    /// Acceptance below [`MIN_ACCEPTANCE`].
    pub flagged: bool,
    /// `λ > 0`: the estimator is unbounded and may have infinite variance.
    pub heavy_tailed: bool,
}

/// Simulate `n` independent paths (in parallel; result independent of the
/// worker count).
pub fn sample_psi_prime(p: &SleParams, n: usize, cfg: &SimConfig, seed: u64) -> Result<PsiSample> {
    p.validate()?;
    cfg.validate()?;
    if !p.non_touching() {
        return domain(format!(
            "ρ+ = {} < κ/2 - 2: the curve touches (0, ∞) and ψ'(1) is not estimated",
            p.rho_plus
        ));
    }
    let outcomes = par_map(n, |i| simulate_psi_prime(p, cfg, seed, i as u64));
    Ok(collect(p, seed, outcomes))
}

fn collect(p: &SleParams, seed: u64, outcomes: Vec<PathOutcome>) -> PsiSample {
    let n = outcomes.len();
    let mut out = PsiSample {
        params: *p,
        seed,
        n,
        values: Vec::with_capacity(n),
        not_converged: 0,
        swallowed: 0,
        rejected: 0,
        diag_max: 0.0,
    };
    for o in outcomes {
        match o {
            PathOutcome::Accepted { psi, diag } => {
                out.values.push(psi);
                out.diag_max = out.diag_max.max(diag);
            }
            PathOutcome::NotConverged { .. } => out.not_converged += 1,
            PathOutcome::Swallowed { .. } => out.swallowed += 1,
            PathOutcome::Rejected => out.rejected += 1,
        }
    }
    out
}

/// Two runs over the same Brownian paths.
#[derive(Clone, Debug)]
pub struct PairedSample {
    pub first: PsiSample,
    pub second: PsiSample,
    pub outcomes: Vec<(PathOutcome, PathOutcome)>,
}

impl PairedSample {
    fn new(p: &SleParams, seed: u64, outcomes: Vec<(PathOutcome, PathOutcome)>) -> Self {
        let (a, b): (Vec<_>, Vec<_>) = outcomes.iter().copied().unzip();
        PairedSample {
            first: collect(p, seed, a),
            second: collect(p, seed, b),
            outcomes,
        }
    }

    /// Mean and standard error of `first^λ - second^λ` over paths accepted
    /// in both runs.
    pub fn difference(&self, lambda: f64) -> MeanStats {
        let d: Vec<f64> = self
            .outcomes
            .iter()
            .filter_map(|pair| match *pair {
                (PathOutcome::Accepted { psi: u, .. }, PathOutcome::Accepted { psi: v, .. }) => {
                    Some(u.powf(lambda) - v.powf(lambda))
                }
                _ => None,
            })
            .collect();
        MeanStats::of(&d)
    }
}

/// Start-offset study: `ψ'(1)` with the default `ε` and with `ε/factor`,
/// coupled as in [`simulate_psi_prime_start_pair`].
pub fn sample_psi_prime_start_study(
    p: &SleParams,
    n: usize,
    cfg: &SimConfig,
    factor: f64,
    seed: u64,
) -> Result<PairedSample> {
    p.validate()?;
    cfg.validate()?;
    if !(factor >= 1.0) || !p.non_touching() {
        return domain("start study needs factor ≥ 1 and the non-touching regime");
    }
    let pairs = par_map(n, |i| {
        simulate_psi_prime_start_pair(p, cfg, factor, seed, i as u64)
    });
    Ok(PairedSample::new(p, seed, pairs))
}

/// Coupled step-halving study: `ψ'(1)` samples at `dt` (first) and at `dt/2`
/// (second) on the same Brownian paths.
pub fn sample_psi_prime_refined(
    p: &SleParams,
    n: usize,
    cfg: &SimConfig,
    seed: u64,
) -> Result<PairedSample> {
    p.validate()?;
    cfg.validate()?;
    if !p.non_touching() {
        return domain("step refinement needs the non-touching regime");
    }
    let pairs = par_map(n, |i| simulate_psi_prime_pair(p, cfg, seed, i as u64));
    Ok(PairedSample::new(p, seed, pairs))
}

/// `E[ψ'(1)^λ]` from `n` paths.
pub fn estimate_moment(
    p: &SleParams,
    lambda: f64,
    n: usize,
    cfg: &SimConfig,
    seed: u64,
) -> Result<MomentEstimate> {
    if !lambda.is_finite() {
        return domain(format!("λ = {lambda} must be finite"));
    }
    Ok(sample_psi_prime(p, n, cfg, seed)?.moment(lambda))
}
