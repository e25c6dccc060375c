//! The Loewner flow at the boundary point 1 and the normalized derivative.
//!
//! With `δ = g_t(1) - V⁺_t` and `x = V⁺ - W`,
//!
//! ```text
//! d ln δ  = -2 / (x (x + δ)) dt,      d ln g' = -2 / (x + δ)² dt,
//! ```
//!
//! so `ln(g'/δ)` increases at rate `2δ / (x (x+δ)²) > 0`. The limit of
//! `g'_T(1)/δ_T` as `T → ∞` is `ψ'(1)`.

use super::driving::DrivingProcess;
use super::SimConfig;

/// `(ln δ, ln g')` of the tracked point.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PointState {
    pub ln_gap: f64,
    pub ln_gprime: f64,
}

impl PointState {
    pub fn new(gap: f64) -> Self {
        PointState {
            ln_gap: gap.ln(),
            ln_gprime: 0.0,
        }
    }

    pub fn gap(&self) -> f64 {
        self.ln_gap.exp()
    }

    pub fn ln_ratio(&self) -> f64 {
        self.ln_gprime - self.ln_gap
    }

    /// Heun step with gaps `x0 → x1`; the time integral is the quadrature
    /// `w0·f(t₀) + w1·f(t₁)` (the trapezoid in whichever clock the driving
    /// path was built on).
    #[inline]
    pub fn advance(&mut self, x0: f64, x1: f64, w0: f64, w1: f64) {
        let d0 = self.ln_gap.exp();
        let s0 = x0 + d0;
        let kd0 = -2.0 / (x0 * s0);
        let kg0 = -2.0 / (s0 * s0);
        let dp = d0 * ((w0 + w1) * kd0).exp();
        let s1 = x1 + dp;
        let kd1 = -2.0 / (x1 * s1);
        let kg1 = -2.0 / (s1 * s1);
        self.ln_gap += w0 * kd0 + w1 * kd1;
        self.ln_gprime += w0 * kg0 + w1 * kg1;
    }
}

/// Path of `(g_t(1), g'_t(1))` on the driving grid.
#[derive(Clone, Debug)]
pub struct TrackedPoint {
    pub times: Vec<f64>,
    pub g: Vec<f64>,
    pub gprime: Vec<f64>,
    /// `g_t(1) - V⁺_t`, integrated directly.
    pub gap: Vec<f64>,
    /// Time at which 1 was swallowed, if it was.
    pub swallowed: Option<f64>,
}

/// Integrate `dg = 2/(g-W) dt`, `dg' = -2g'/(g-W)² dt` from `g_0 = 1`,
/// `g'_0 = 1` along the substeps of `d`.
///
/// 1 counts as swallowed when `V⁺` collides with `W` while
/// `g - V⁺ < swallow_eps`.
pub fn track_point(d: &DrivingProcess, swallow_eps: f64) -> TrackedPoint {
    let n = d.len();
    let mut st = PointState::new(1.0 - d.v_plus[0]);
    let mut tp = TrackedPoint {
        times: Vec::with_capacity(n),
        g: Vec::with_capacity(n),
        gprime: Vec::with_capacity(n),
        gap: Vec::with_capacity(n),
        swallowed: None,
    };
    let push = |tp: &mut TrackedPoint, i: usize, st: &PointState| {
        let gap = st.gap();
        tp.times.push(d.times[i]);
        tp.g.push(d.v_plus[i] + gap);
        tp.gprime.push(st.ln_gprime.exp());
        tp.gap.push(gap);
    };
    push(&mut tp, 0, &st);
    for i in 1..n {
        let (w0, w1) = d.weights(i);
        st.advance(d.gap_plus[i - 1], d.gap_plus[i], w0, w1);
        push(&mut tp, i, &st);
        if d.hits.binary_search(&i).is_ok() && st.gap() < swallow_eps {
            tp.swallowed = Some(d.times[i]);
            break;
        }
    }
    tp
}

/// Estimate of `ψ'(1) = lim g'_T(1) / (g_T(1) - V⁺_T)` with its
/// convergence diagnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiPrime {
    pub value: f64,
    /// Relative change of the ratio over the last decade of capacity time.
    pub diag: f64,
    pub converged: bool,
}

/// Read off `ψ'(1)` at the end of a tracked path. `None` if 1 was swallowed.
///
/// The diagnostic compares against the first grid time past `cfg.t_max/10`,
/// and is accepted below `cfg.tail_tol`.
pub fn psi_prime(tp: &TrackedPoint, cfg: &SimConfig) -> Option<PsiPrime> {
    if tp.swallowed.is_some() || tp.times.is_empty() {
        return None;
    }
    let n = tp.times.len() - 1;
    let ratio = |i: usize| tp.gprime[i].ln() - tp.gap[i].ln();
    let k = tp.times.partition_point(|&t| t <= 0.1 * cfg.t_max).min(n);
    let diag = (ratio(n) - ratio(k)).exp_m1().abs();
    Some(PsiPrime {
        value: ratio(n).exp(),
        diag,
        converged: diag < cfg.tail_tol,
    })
}
