//! Drifted Brownian motions conditioned to stay negative, and the two
//! constructions of the two-sided drifted process whose laws are compared
//! by [`equivalence_test`].
//!
//! A Brownian motion `σB_t - μt` conditioned to stay below 0 forever is
//! sampled exactly: `-(σB_t - μt)/σ` conditioned positive is the norm of a
//! three-dimensional Brownian motion with drift `μ/σ` (Rogers–Pitman), so
//! its values on any time grid come from Gaussian increments with no
//! rejection and no discretization error.

use rand::Rng;
use rand_distr::{Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::mc::{par_map, stream_rng};
use crate::quad::{integrate_to_infinity, QuadOpts};
use crate::stats::{ks_one_sample, ks_two_sample};

/// Which construction produced a [`ProcessSample`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProcessKind {
    /// One-sided drifted BM conditioned to stay negative.
    Conditioned,
    /// `B_t - a|t| + c'` with `c'` above `-M`.
    TwoSided,
    /// `A^M` recentred at a uniform time above `-M`.
    Recentred,
}

/// A path on a time grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcessSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: ProcessKind,
}

/// Values at `times` (increasing, ≥ 0) of `σB_t - μt` conditioned to stay
/// negative for all `t > 0`, started from 0.
pub(crate) fn conditioned_path<R: Rng>(
    mu: f64,
    sigma: f64,
    times: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    let drift = mu / sigma;
    let (mut w, mut t0) = ([0.0f64; 3], 0.0);
    times
        .iter()
        .map(|&t| {
            let sd = (t - t0).sqrt();
            for c in w.iter_mut() {
                *c += sd * rng.sample::<f64, _>(StandardNormal);
            }
            t0 = t;
            let x = w[0] + drift * t;
            -sigma * (x * x + w[1] * w[1] + w[2] * w[2]).sqrt()
        })
        .collect()
}

/// `B_{2t} - a t` conditioned on staying negative for all `t > 0`, on the
/// grid `0, dt, …, horizon`.
pub fn sample_conditioned_drift_bm(
    a: f64,
    horizon: f64,
    dt: f64,
    seed: u64,
) -> Result<ProcessSample> {
    if !(a > 0.0 && a.is_finite() && horizon > 0.0 && dt > 0.0 && dt <= horizon) {
        return domain(format!(
            "need a > 0 and 0 < dt ≤ horizon (a = {a}, horizon = {horizon}, dt = {dt})"
        ));
    }
    let n = (horizon / dt).round() as usize;
    let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
    let mut rng = stream_rng(seed, 0);
    let mut values = vec![0.0];
    values.extend(conditioned_path(
        a,
        std::f64::consts::SQRT_2,
        &times[1..],
        &mut rng,
    ));
    Ok(ProcessSample {
        times,
        values,
        kind: ProcessKind::Conditioned,
    })
}

/// `∫₀^∞ P[Z > a√t] dt` for standard normal `Z` (equals `1/(2a²)`).
pub fn gaussian_tail_time_integral(a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("a = {a} must be positive"));
    }
    // t = u²
    let f = |u: f64| u * statrs::function::erf::erfc(a * u * std::f64::consts::FRAC_1_SQRT_2);
    let opts = QuadOpts {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        ..QuadOpts::default()
    };
    Ok(integrate_to_infinity(f, 0.0, opts)?.value)
}

/// The four path functionals compared between the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Functionals {
    pub value_at_zero: f64,
    pub max: f64,
    pub max_minus_value: f64,
    /// Lebesgue time spent above `-M`.
    pub time_above: f64,
}

/// Drifted walk `x₀ + B_t - a t` on the grid `dt` until it is `depth` below
/// `-M` (after which a return above `-M` has probability `e^{-2a·depth}`).
/// Returns the continuous-time maximum (bridge maxima between grid points
/// are sampled exactly), the number of grid points above `-M` excluding the
/// start, and the path if requested.
fn free_side<R: Rng>(
    x0: f64,
    a: f64,
    m: f64,
    depth: f64,
    dt: f64,
    keep: bool,
    rng: &mut R,
) -> (f64, usize, Vec<f64>) {
    let sd = dt.sqrt();
    let (mut x, mut max, mut above) = (x0, x0, 0usize);
    let mut path = Vec::new();
    if keep {
        path.push(x0);
    }
    while x > -m - depth {
        let x1 = x + sd * rng.sample::<f64, _>(StandardNormal) - a * dt;
        // the bridge overshoots max(x, x1) by more than 6√dt with
        // probability below e^{-72}
        if x.max(x1) + 6.0 * sd > max {
            let u: f64 = rng.random();
            let d = x1 - x;
            max = max.max(0.5 * (x + x1 + (d * d - 2.0 * dt * (1.0 - u).ln()).sqrt()));
        }
        x = x1;
        if x > -m {
            above += 1;
        }
        if keep {
            path.push(x);
        }
    }
    (max, above, path)
}

/// Continue a drifted walk until it has `len` points.
fn extend_walk<R: Rng>(path: &mut Vec<f64>, len: usize, a: f64, dt: f64, rng: &mut R) {
    while path.len() < len {
        let last = *path.last().expect("nonempty");
        path.push(last + dt.sqrt() * rng.sample::<f64, _>(StandardNormal) - a * dt);
    }
}

/// Setup shared by both constructions.
#[derive(Clone, Copy, Debug)]
struct Setup {
    a: f64,
    m: f64,
    dt: f64,
    depth: f64,
    /// Size-bias cap for the Lebesgue time above `-M`.
    l_max: f64,
}

impl Setup {
    fn new(a: f64, m: f64) -> Self {
        Setup {
            a,
            m,
            dt: 0.01 / (a * a),
            depth: (1e6f64).ln() / (2.0 * a),
            // P[time above > 25/a²] is below 1e-6
            l_max: 25.0 / (a * a),
        }
    }
}

/// `X₂` given `X₂(0) > -M`: `c' = -M + Exp(2a)` and independent drifted
/// walks on both sides.
fn draw_two_sided<R: Rng>(s: &Setup, keep: bool, rng: &mut R) -> (Functionals, Vec<f64>, Vec<f64>) {
    let c: f64 = -s.m + rng.sample(Exp::new(2.0 * s.a).expect("rate > 0"));
    let (m1, n1, right) = free_side(c, s.a, s.m, s.depth, s.dt, keep, rng);
    let (m2, n2, left) = free_side(c, s.a, s.m, s.depth, s.dt, keep, rng);
    let max = m1.max(m2);
    let f = Functionals {
        value_at_zero: c,
        max,
        max_minus_value: max - c,
        time_above: s.dt * (n1 + n2 + 1) as f64,
    };
    (f, left, right)
}

/// One accepted draw of `A^M` recentred at a uniform grid time above `-M`,
/// with the law of `A^M` size-biased by its time above `-M` (rejection
/// against `l_max`). Also returns the number of proposals and whether the
/// cap was exceeded.
struct Recentred {
    f: Functionals,
    /// Positive side of `A^M` and the recentring index into it.
    path: Vec<f64>,
    tau: usize,
    proposals: usize,
    overflow: bool,
    /// Time above `-M` of every proposal (unbiased draws of `A^M`).
    raw_time_above: Vec<f64>,
    raw_max: Vec<f64>,
}

fn draw_recentred<R: Rng>(s: &Setup, rng: &mut R) -> Recentred {
    let mut raw_time_above = Vec::new();
    let mut raw_max = Vec::new();
    loop {
        let u: f64 = rng.random();
        let (max, above, path) = free_side(-s.m, s.a, s.m, s.depth, s.dt, true, rng);
        let l = s.dt * above as f64;
        raw_time_above.push(l);
        raw_max.push(max);
        if l > u * s.l_max {
            let k = rng.random_range(0..above);
            let tau = path
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > -s.m)
                .nth(k)
                .expect("k < above")
                .0;
            let v = path[tau];
            return Recentred {
                f: Functionals {
                    value_at_zero: v,
                    max,
                    max_minus_value: max - v,
                    time_above: l,
                },
                path,
                tau,
                proposals: raw_time_above.len(),
                overflow: l > s.l_max,
                raw_time_above,
                raw_max,
            };
        }
    }
}

fn check_am(a: f64, m: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() && m.is_finite() {
        Ok(())
    } else {
        domain(format!("need a > 0 and finite M (a = {a}, M = {m})"))
    }
}

/// `X₂ = B_t - a|t| + c'` conditioned on `X₂(0) > -M`, on `[-window, window]`.
pub fn sample_two_sided(a: f64, m: f64, window: f64, seed: u64) -> Result<ProcessSample> {
    check_am(a, m)?;
    let s = Setup::new(a, m);
    let mut rng = stream_rng(seed, 0);
    let (_, mut left, mut right) = draw_two_sided(&s, true, &mut rng);
    let k = (window / s.dt).round() as usize;
    extend_walk(&mut left, k + 1, a, s.dt, &mut rng);
    extend_walk(&mut right, k + 1, a, s.dt, &mut rng);
    let times = (-(k as i64)..=k as i64).map(|j| j as f64 * s.dt).collect();
    let values = left[1..=k]
        .iter()
        .rev()
        .chain(&right[..=k])
        .copied()
        .collect();
    Ok(ProcessSample {
        times,
        values,
        kind: ProcessKind::TwoSided,
    })
}

/// `A^M_{t+τ}` on `[-window, window]`: `A^M` is a drifted walk from `-M` for
/// `t ≥ 0` and a conditioned drifted BM below `-M` for `t < 0`, size-biased
/// by its time above `-M`, and `τ` is uniform over that time.
pub fn sample_recentred(a: f64, m: f64, window: f64, seed: u64) -> Result<ProcessSample> {
    check_am(a, m)?;
    let s = Setup::new(a, m);
    let mut rng = stream_rng(seed, 0);
    let r = draw_recentred(&s, &mut rng);
    let k = (window / s.dt).round() as usize;
    // negative side of A^M, needed for grid times before -τ
    let back = k.saturating_sub(r.tau);
    let neg_times: Vec<f64> = (1..=back).map(|i| i as f64 * s.dt).collect();
    let neg = conditioned_path(a, 1.0, &neg_times, &mut rng);
    let mut path = r.path;
    extend_walk(&mut path, r.tau + k + 1, a, s.dt, &mut rng);
    let mut times = Vec::with_capacity(2 * k + 1);
    let mut values = Vec::with_capacity(2 * k + 1);
    for j in -(k as i64)..=(k as i64) {
        let i = r.tau as i64 + j;
        times.push(j as f64 * s.dt);
        values.push(if i < 0 {
            neg[(-i - 1) as usize] - m
        } else {
            path[i as usize]
        });
    }
    Ok(ProcessSample {
        times,
        values,
        kind: ProcessKind::Recentred,
    })
}

/// KS comparison of the two constructions of the two-sided process.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub a: f64,
    pub m: f64,
    pub n: usize,
    pub dt: f64,
    /// Two-sample KS p-values for value at 0, global max, max minus value
    /// at 0, and time above `-M`.
    pub p_values: [f64; 4],
    /// Mean time above `-M` of the unbiased `A^M` draws (expected `1/(2a²)`).
    pub mean_time_above: f64,
    pub expected_time_above: f64,
    /// `P[X₁(0) > -M]` under the infinite measure, estimated as
    /// `e^{2aM}/(2a) · mean_time_above` (expected `e^{2aM}/(4a³)`).
    pub mass_above: f64,
    pub expected_mass_above: f64,
    /// One-sample KS p-value of the unbiased `A^M` maximum against
    /// `-M + Exp(2a)`.
    pub max_law_p: f64,
    /// Accepted / proposed `A^M` paths in the size-biased rejection step.
    pub acceptance: f64,
    /// Accepted paths whose time above `-M` exceeded the rejection cap.
    pub overflow: usize,
}

pub const FUNCTIONAL_NAMES: [&str; 4] = [
    "value at 0",
    "global max",
    "max minus value at 0",
    "time above -M",
];

impl EquivalenceReport {
    pub fn min_p(&self) -> f64 {
        self.p_values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn draw_both(s: &Setup, n: usize, seed: u64) -> (Vec<Recentred>, Vec<Functionals>) {
    let x2 = par_map(n, |i| {
        draw_two_sided(s, false, &mut stream_rng(seed, 2 * i as u64)).0
    });
    let x1 = par_map(n, |i| {
        draw_recentred(s, &mut stream_rng(seed, 2 * i as u64 + 1))
    });
    (x1, x2)
}

/// The functionals behind [`equivalence_test`] (same streams):
/// `(recentred A^M, two-sided X₂)`.
pub fn equivalence_functionals(
    a: f64,
    m: f64,
    n: usize,
    seed: u64,
) -> Result<(Vec<Functionals>, Vec<Functionals>)> {
    check_am(a, m)?;
    let (x1, x2) = draw_both(&Setup::new(a, m), n, seed);
    Ok((x1.into_iter().map(|r| r.f).collect(), x2))
}

/// Draw `n` samples of each construction and compare four functionals.
///
/// All four functionals only see `A^M` for `t ≥ 0` (on `t < 0` it stays
/// below `-M`), so the conditioned negative side is not simulated here.
pub fn equivalence_test(a: f64, m: f64, n: usize, seed: u64) -> Result<EquivalenceReport> {
    check_am(a, m)?;
    if n < 10 {
        return domain(format!("n = {n} is too small for a KS comparison"));
    }
    let s = Setup::new(a, m);
    let (x1, x2) = draw_both(&s, n, seed);
    let pick = |f: fn(&Functionals) -> f64| -> (Vec<f64>, Vec<f64>) {
        (
            x1.iter().map(|r| f(&r.f)).collect(),
            x2.iter().map(f).collect(),
        )
    };
    let fs: [fn(&Functionals) -> f64; 4] = [
        |f| f.value_at_zero,
        |f| f.max,
        |f| f.max_minus_value,
        |f| f.time_above,
    ];
    let mut p_values = [0.0; 4];
    for (p, f) in p_values.iter_mut().zip(fs) {
        let (u, v) = pick(f);
        *p = ks_two_sample(&u, &v).p_value;
    }
    let raw_l: Vec<f64> = x1
        .iter()
        .flat_map(|r| r.raw_time_above.iter().copied())
        .collect();
    let raw_max: Vec<f64> = x1.iter().flat_map(|r| r.raw_max.iter().copied()).collect();
    let proposals: usize = x1.iter().map(|r| r.proposals).sum();
    let mean_l = crate::mc::MeanStats::of(&raw_l).mean;
    let rate = 2.0 * a;
    let max_law_p = ks_one_sample(&raw_max, |x| {
        if x <= -m {
            0.0
        } else {
            -(-rate * (x + m)).exp_m1()
        }
    })
    .p_value;
    Ok(EquivalenceReport {
        a,
        m,
        n,
        dt: s.dt,
        p_values,
        mean_time_above: mean_l,
        expected_time_above: 1.0 / (2.0 * a * a),
        mass_above: (2.0 * a * m).exp() / (2.0 * a) * mean_l,
        expected_mass_above: (2.0 * a * m).exp() / (4.0 * a * a * a),
        max_law_p,
        acceptance: n as f64 / proposals as f64,
        overflow: x1.iter().filter(|r| r.overflow).count(),
    })
}
