//! Discrete boundary chaos measures and Monte Carlo moment estimators.
//!
//! An atom on a cell of width `Δ` carries `Δ·exp((γ/2)(Y + h̄) - (γ²/8)Var h̄)`
//! where `h̄` is the cell average of the lateral field. Because the lateral
//! kernels have zero offset against `-2 log|x-y|`, no further correction is
//! needed. Every estimator reports the fine grid, the same draw on merged
//! cell pairs, and the Richardson combination `2·fine - coarse`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use super::field::{BoundaryFieldGrid, IntervalGrid, IntervalSampler, StripGrid, StripSampler};
use crate::error::{domain, Error, Result};
use crate::exact::{background_charge, BoundaryCosmology};
use crate::mc::{par_map, stream_rng, MeanStats};
use crate::quad::{integrate, QuadOpts};

/// Relative standard error above which an estimate is flagged.
pub const VARIANCE_FLAG: f64 = 0.2;

/// Largest moment exponent the strip estimator accepts.
pub const MAX_REFLECTION_EXPONENT: f64 = 1.2;

/// Atoms of the chaos on one or both strip boundary lines, stored as log
/// weights so that no draw overflows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GmcMeasure {
    pub locations: Vec<f64>,
    pub resolution: f64,
    pub gamma: f64,
    pub log_lower: Vec<f64>,
    pub log_upper: Option<Vec<f64>>,
}

fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

impl GmcMeasure {
    /// `(location, weight)` on the lower line.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        self.locations
            .iter()
            .zip(&self.log_lower)
            .map(|(&x, &l)| (x, l.exp()))
            .collect()
    }

    pub fn upper_atoms(&self) -> Option<Vec<(f64, f64)>> {
        self.log_upper.as_ref().map(|u| {
            self.locations
                .iter()
                .zip(u)
                .map(|(&x, &l)| (x, l.exp()))
                .collect()
        })
    }

    pub fn ln_mass_lower(&self) -> f64 {
        log_sum_exp(&self.log_lower)
    }

    pub fn ln_mass_upper(&self) -> Option<f64> {
        self.log_upper.as_deref().map(log_sum_exp)
    }

    /// `ln(μ₁ ν(ℝ) + μ₂ ν(ℝ + πi))`.
    pub fn ln_weighted_mass(&self, mu1: f64, mu2: f64) -> f64 {
        let mut terms = Vec::with_capacity(2);
        if mu1 > 0.0 {
            terms.push(mu1.ln() + self.ln_mass_lower());
        }
        if mu2 > 0.0 {
            // one line only: the upper line has the same law, use the lower
            terms.push(mu2.ln() + self.ln_mass_upper().unwrap_or_else(|| self.ln_mass_lower()));
        }
        log_sum_exp(&terms)
    }
}

/// Chaos measure of a sampled strip boundary field.
pub fn gmc_boundary_measure(f: &BoundaryFieldGrid, gamma: f64) -> Result<GmcMeasure> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return domain(format!("γ = {gamma} must lie in (0, 2)"));
    }
    let base = f.spacing.ln() - gamma * gamma / 8.0 * f.lateral_var;
    let logs = |h: &[f64]| -> Result<Vec<f64>> {
        let v: Vec<f64> = h
            .iter()
            .zip(&f.radial_at_centers)
            .map(|(h, y)| base + 0.5 * gamma * (y + h))
            .collect();
        if v.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
            return Err(Error::Overflow(
                v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ));
        }
        Ok(v)
    };
    Ok(GmcMeasure {
        locations: f.centers.clone(),
        resolution: f.spacing,
        gamma,
        log_lower: logs(&f.lower)?,
        log_upper: f.upper.as_deref().map(logs).transpose()?,
    })
}

/// Moment estimate at two resolutions from the same draws.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GmcEstimate {
    pub exponent: f64,
    pub fine: MeanStats,
    pub coarse: MeanStats,
    /// `2·fine - coarse`, with the paired standard error.
    pub extrapolated: MeanStats,
    pub n: usize,
    pub seed: u64,
    /// Fine cell width (the finest cell for graded grids).
    pub spacing: f64,
    pub variance_flag: bool,
}

impl GmcEstimate {
    fn from_pairs(exponent: f64, pairs: &[(f64, f64)], seed: u64, spacing: f64) -> Result<Self> {
        let fine: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let coarse: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let rich: Vec<f64> = pairs.iter().map(|p| 2.0 * p.0 - p.1).collect();
        if fine.iter().chain(&coarse).any(|v| !v.is_finite()) {
            return Err(Error::Overflow(f64::INFINITY));
        }
        let extrapolated = MeanStats::of(&rich);
        Ok(GmcEstimate {
            exponent,
            fine: MeanStats::of(&fine),
            coarse: MeanStats::of(&coarse),
            extrapolated,
            n: pairs.len(),
            seed,
            spacing,
            variance_flag: !(extrapolated.stderr <= VARIANCE_FLAG * extrapolated.mean.abs()),
        })
    }
}

/// `(2/γ)(Q - β)`.
pub fn reflection_exponent(beta: f64, gamma: f64) -> f64 {
    2.0 / gamma * (background_charge(gamma) - beta)
}

/// `(2/γ)(Q - β - α/2)`.
pub fn interval_exponent(beta: f64, alpha: f64, gamma: f64) -> f64 {
    2.0 / gamma * (background_charge(gamma) - beta - 0.5 * alpha)
}

fn check_reflection(beta: f64, gamma: f64, n: usize) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return domain(format!("γ = {gamma} must lie in (0, 2)"));
    }
    let q = background_charge(gamma);
    if !(beta > 0.5 * gamma && beta < q) {
        return domain(format!(
            "β = {beta} must lie in (γ/2, Q) = ({}, {q})",
            0.5 * gamma
        ));
    }
    let p = reflection_exponent(beta, gamma);
    if p > MAX_REFLECTION_EXPONENT + 1e-12 {
        return domain(format!(
            "moment exponent {p} exceeds {MAX_REFLECTION_EXPONENT}"
        ));
    }
    if n < 2 {
        return domain("need at least 2 samples");
    }
    Ok(p)
}

/// One strip field on `grid` for insertion `β`.
pub fn sample_strip_boundary_field(
    beta: f64,
    grid: StripGrid,
    gamma: f64,
    seed: u64,
) -> Result<BoundaryFieldGrid> {
    let q = background_charge(gamma);
    if !(gamma > 0.0 && gamma < 2.0 && beta < q) {
        return domain(format!("need γ ∈ (0, 2) and β < Q (β = {beta}, Q = {q})"));
    }
    let sampler = StripSampler::new(grid)?;
    Ok(sampler.sample(q - beta, &mut stream_rng(seed, 0)))
}

/// Monte Carlo estimate of `E[(μ₁ν(ℝ) + μ₂ν(ℝ+πi))^{(2/γ)(Q-β)}]`.
pub fn mc_reflection_moment(
    beta: f64,
    cosmo: &BoundaryCosmology,
    gamma: f64,
    n: usize,
    grid: StripGrid,
    seed: u64,
) -> Result<GmcEstimate> {
    check_reflection(beta, gamma, n)?;
    let grid = StripGrid {
        both_lines: !cosmo.is_one_sided(),
        ..grid
    };
    let sampler = StripSampler::new(grid)?;
    mc_reflection_moment_with(&sampler, beta, cosmo, gamma, n, seed)
}

/// As [`mc_reflection_moment`] with a prebuilt sampler (reused across
/// parameter points on the same grid). A two-sided cosmology needs a
/// sampler with both lines.
pub fn mc_reflection_moment_with(
    sampler: &StripSampler,
    beta: f64,
    cosmo: &BoundaryCosmology,
    gamma: f64,
    n: usize,
    seed: u64,
) -> Result<GmcEstimate> {
    let p = check_reflection(beta, gamma, n)?;
    if !cosmo.is_one_sided() && !sampler.grid.both_lines {
        return Err(Error::Config(
            "two-sided cosmology needs a grid with both lines".into(),
        ));
    }
    let a = background_charge(gamma) - beta;
    let pairs = par_map(n, |i| -> Result<(f64, f64)> {
        let mut rng = stream_rng(seed, i as u64);
        let f = sampler.sample(a, &mut rng);
        let fine = gmc_boundary_measure(&f, gamma)?;
        let coarse = gmc_boundary_measure(&f.coarsen(sampler.coarse_var), gamma)?;
        let m = |g: &GmcMeasure| (p * g.ln_weighted_mass(cosmo.mu1, cosmo.mu2)).exp();
        Ok((m(&fine), m(&coarse)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    GmcEstimate::from_pairs(p, &pairs, seed, sampler.grid.spacing())
}

/// `E[e^{c Y_t}]` for the radial process `Y_t = B_{2t} - a t` conditioned
/// negative: `-Y_t` is the norm of a 3-d Gaussian with mean `a t` and
/// variance `2t` per coordinate.
pub fn radial_exp_moment(a: f64, c: f64, t: f64) -> Result<f64> {
    if !(a > 0.0 && c >= 0.0 && t >= 0.0) {
        return domain(format!(
            "need a > 0, c ≥ 0, t ≥ 0 (a = {a}, c = {c}, t = {t})"
        ));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let (m, s) = (a * t, (2.0 * t).sqrt());
    let norm = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let density = |r: f64| {
        if m < 1e-8 * s {
            // χ₃ limit
            2.0 * r * r / (s * s * s) * norm(r / s)
        } else {
            r / (m * s) * (norm((r - m) / s) - norm((r + m) / s))
        }
    };
    let hi = m + 40.0 * s;
    let opts = QuadOpts {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_panels: 4000,
    };
    let cuts = [0.0, (m - 8.0 * s).max(0.0), m, m + 8.0 * s, hi];
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(|r: f64| (-c * r).exp() * density(r), w[0], w[1], opts)?.value;
    }
    Ok(total)
}

/// `E ν([-L, L])` on one strip line: `∫ E e^{(γ/2)Y_x} dx`.
pub fn strip_mean_mass(beta: f64, gamma: f64, half_width: f64) -> Result<f64> {
    let a = background_charge(gamma) - beta;
    if !(a > 0.0 && half_width > 0.0) {
        return domain(format!(
            "need β < Q and L > 0 (β = {beta}, L = {half_width})"
        ));
    }
    let c = 0.5 * gamma;
    let mut err = None;
    let opts = QuadOpts {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_panels: 2000,
    };
    let v = integrate(
        |t: f64| match radial_exp_moment(a, c, t) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        half_width,
        opts,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(2.0 * v?.value)
}

/// Monte Carlo mean of the total chaos mass on the lower line.
pub fn mc_strip_mass(
    beta: f64,
    gamma: f64,
    n: usize,
    grid: StripGrid,
    seed: u64,
) -> Result<GmcEstimate> {
    let a = background_charge(gamma) - beta;
    if !(a > 0.0) || n < 2 {
        return domain(format!("need β < Q and n ≥ 2 (β = {beta}, n = {n})"));
    }
    let sampler = StripSampler::new(StripGrid {
        both_lines: false,
        ..grid
    })?;
    let pairs = par_map(n, |i| -> Result<(f64, f64)> {
        let f = sampler.sample(a, &mut stream_rng(seed, i as u64));
        let fine = gmc_boundary_measure(&f, gamma)?;
        let coarse = gmc_boundary_measure(&f.coarsen(sampler.coarse_var), gamma)?;
        Ok((fine.ln_mass_lower().exp(), coarse.ln_mass_lower().exp()))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    GmcEstimate::from_pairs(1.0, &pairs, seed, sampler.grid.spacing())
}

fn check_interval(beta: f64, alpha: f64, gamma: f64, n: usize) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return domain(format!("γ = {gamma} must lie in (0, 2)"));
    }
    let q = background_charge(gamma);
    if !(alpha > 0.0 && 0.5 * alpha + beta > 0.5 * gamma && beta < q) {
        return domain(format!(
            "need α > 0, α/2 + β > γ/2, β < Q (α = {alpha}, β = {beta})"
        ));
    }
    if !(0.5 * gamma * beta < 1.0) {
        return domain(format!(
            "endpoint weight x^(-γβ/2) is not integrable at γβ/2 = {}",
            0.5 * gamma * beta
        ));
    }
    if n < 2 {
        return domain("need at least 2 samples");
    }
    Ok(interval_exponent(beta, alpha, gamma))
}

/// `∫` of `x^{-s}(1-x)^{-s}` over each cell between consecutive `edges`.
pub fn interval_cell_weights(edges: &[f64], s: f64) -> Vec<f64> {
    let a = 1.0 - s;
    let total = ln_beta(a, a).exp();
    // regularized incomplete beta, mirrored so that the small tail is used
    let tail = |x: f64| {
        if x <= 0.5 {
            beta_reg(a, a, x)
        } else {
            1.0 - beta_reg(a, a, 1.0 - x)
        }
    };
    edges
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let d = if hi <= 0.5 {
                beta_reg(a, a, hi) - beta_reg(a, a, lo)
            } else if lo >= 0.5 {
                beta_reg(a, a, 1.0 - lo) - beta_reg(a, a, 1.0 - hi)
            } else {
                tail(hi) - tail(lo)
            };
            total * d
        })
        .collect()
}

/// `E ν((0,1)) = B(1-s, 1-s)` with `s = γβ/2`.
pub fn interval_mean_mass(beta: f64, gamma: f64) -> f64 {
    let a = 1.0 - 0.5 * gamma * beta;
    ln_beta(a, a).exp()
}

/// Monte Carlo estimate of `E[ν((0,1))^{(2/γ)(Q-β-α/2)}]` for the chaos of
/// `-2 log|x-y|` with density `x^{-γβ/2}(1-x)^{-γβ/2}`.
pub fn mc_interval_moment(
    beta: f64,
    alpha: f64,
    gamma: f64,
    n: usize,
    grid: IntervalGrid,
    seed: u64,
) -> Result<GmcEstimate> {
    check_interval(beta, alpha, gamma, n)?;
    let sampler = IntervalSampler::new(grid)?;
    mc_interval_moment_with(&sampler, beta, alpha, gamma, n, seed)
}

/// As [`mc_interval_moment`] with a prebuilt sampler.
pub fn mc_interval_moment_with(
    sampler: &IntervalSampler,
    beta: f64,
    alpha: f64,
    gamma: f64,
    n: usize,
    seed: u64,
) -> Result<GmcEstimate> {
    let p = check_interval(beta, alpha, gamma, n)?;
    let s = 0.5 * gamma * beta;
    let fine_w = interval_cell_weights(&sampler.edges, s);
    let coarse_w: Vec<f64> = fine_w.chunks(2).map(|c| c[0] + c[1]).collect();
    let log_base = |w: &[f64], var: &[f64]| -> Vec<f64> {
        w.iter()
            .zip(var)
            .map(|(w, v)| w.ln() - gamma * gamma / 8.0 * v)
            .collect()
    };
    let (fine_b, coarse_b) = (
        log_base(&fine_w, &sampler.fine_var),
        log_base(&coarse_w, &sampler.coarse_var),
    );
    let ln_mass = |base: &[f64], h: &[f64]| {
        let l: Vec<f64> = base
            .iter()
            .zip(h)
            .map(|(b, h)| b + 0.5 * gamma * h)
            .collect();
        log_sum_exp(&l)
    };
    let pairs: Vec<(f64, f64)> = par_map(n, |i| {
        let mut rng = stream_rng(seed, i as u64);
        let h = sampler.sample(&mut rng);
        let hc = sampler.coarsen(&h);
        (
            (p * ln_mass(&fine_b, &h)).exp(),
            (p * ln_mass(&coarse_b, &hc)).exp(),
        )
    });
    let spacing = sampler.edges[1] - sampler.edges[0];
    GmcEstimate::from_pairs(p, &pairs, seed, spacing)
}

/// Draw one interval field directly (for inspection).
pub fn sample_interval_field<R: Rng>(sampler: &IntervalSampler, rng: &mut R) -> Vec<f64> {
    sampler.sample(rng)
}
