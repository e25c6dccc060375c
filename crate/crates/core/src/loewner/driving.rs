//! The driving triple `(W, V⁻, V⁺)`.
//!
//! The solver works with the gaps `x = V⁺ - W` and `y = W - V⁻` in log
//! coordinates, so they stay positive. A substep covers capacity time
//! `≈ dt·x²y²/(κ(x²+y²)) ≤ dt·min(x², y²)/κ`, which keeps the log-increments
//! of size `O(√dt)` and makes the number of steps grow only logarithmically
//! in the horizon. The last substep may overshoot `T` slightly.

use rand::Rng;
use rand_distr::StandardNormal;

use super::SimConfig;
use crate::error::{domain, Result};
use crate::exact::SleParams;
use crate::mc::stream_rng;

/// Gap (relative to `√(κt)`) below which a force point counts as hit; only
/// used when the corresponding gap process has dimension below 2.
pub(crate) const COLLISION: f64 = 1e-9;

/// Discretized solution of the driving SDE on its adaptive substep grid.
#[derive(Clone, Debug)]
pub struct DrivingProcess {
    pub times: Vec<f64>,
    pub w: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub v_plus: Vec<f64>,
    /// `V⁺ - W` as integrated (more accurate than the difference).
    pub gap_plus: Vec<f64>,
    /// `W - V⁻` as integrated.
    pub gap_minus: Vec<f64>,
    pub params: SleParams,
    pub seed: u64,
    /// Clock step `Δτ` and rates `dt/dτ` per grid point; empty for paths
    /// given directly in capacity time.
    pub dtau: f64,
    pub rates: Vec<f64>,
    /// Grid indices at which `V⁺` collided with `W` (touching regime only).
    pub hits: Vec<usize>,
    /// The step budget ran out before the horizon.
    pub truncated: bool,
}

impl DrivingProcess {
    /// Build from explicit samples of `W` and `V±` (e.g. a deterministic
    /// driving function).
    pub fn from_path(
        params: SleParams,
        times: Vec<f64>,
        w: Vec<f64>,
        v_minus: Vec<f64>,
        v_plus: Vec<f64>,
    ) -> Result<Self> {
        let n = times.len();
        if n < 2 || w.len() != n || v_minus.len() != n || v_plus.len() != n {
            return domain("driving path arrays must have equal length ≥ 2");
        }
        if times.windows(2).any(|t| t[1] <= t[0]) {
            return domain("times must be strictly increasing");
        }
        let gap_plus = v_plus.iter().zip(&w).map(|(v, w)| v - w).collect();
        let gap_minus = w.iter().zip(&v_minus).map(|(w, v)| w - v).collect();
        Ok(DrivingProcess {
            times,
            w,
            v_minus,
            v_plus,
            gap_plus,
            gap_minus,
            params,
            seed: 0,
            dtau: 0.0,
            rates: Vec::new(),
            hits: Vec::new(),
            truncated: false,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    /// Trapezoid weights for a time integral over substep `i-1 → i`.
    pub fn weights(&self, i: usize) -> (f64, f64) {
        if self.rates.len() == self.times.len() {
            (
                0.5 * self.dtau * self.rates[i - 1],
                0.5 * self.dtau * self.rates[i],
            )
        } else {
            let h = 0.5 * (self.times[i] - self.times[i - 1]);
            (h, h)
        }
    }
}

/// One-substep integrator.
///
/// Time is run on the clock `dτ = κ(1/x² + 1/y²) dt`, in which
///
/// ```text
/// d ln x = [(2+ρ₊-κ/2)/(κ(1+e^{2r})) - ρ₋/(2κ cosh r)] dτ - (1+e^{2r})^{-1/2} dB
/// d ln y = [(2+ρ₋-κ/2)/(κ(1+e^{-2r})) - ρ₊/(2κ cosh r)] dτ + (1+e^{-2r})^{-1/2} dB
/// ```
///
/// with `r = ln x - ln y`: bounded coefficients depending on `r` only, so a
/// constant step `Δτ = dt·min(1, κ/2)` is well behaved. Capacity time
/// `t = ∫ x²y²/(κ(x²+y²)) dτ` and `V±` are integrated by the trapezoid rule.
#[derive(Clone, Debug)]
pub(crate) struct Stepper {
    kappa: f64,
    a_plus: f64,
    a_minus: f64,
    c_plus: f64,
    c_minus: f64,
    pub dtau: f64,
    sqrt_dtau: f64,
    restart: f64,
    // Bessel dimension < 2: the gap really hits 0 and must be restarted
    touch_plus: bool,
    touch_minus: bool,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub v_plus: f64,
    pub v_minus: f64,
    /// `dt/dτ` at the current state.
    pub rate: f64,
}

/// What happened during a substep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum StepEvent {
    Normal,
    /// `x` fell to the collision threshold and was restarted.
    HitPlus,
}

impl Stepper {
    pub fn new(p: &SleParams, cfg: &SimConfig) -> Self {
        Self::with_clock_step(p, cfg, cfg.dt)
    }

    pub fn with_clock_step(p: &SleParams, cfg: &SimConfig, dt: f64) -> Self {
        let eps = cfg.start_eps();
        let k = p.kappa;
        // drift coefficients grow like 1/κ; keep the per-step drift O(dt)
        let dtau = dt * (0.5 * k).min(1.0);
        let mut s = Stepper {
            kappa: k,
            a_plus: (2.0 + p.rho_plus - 0.5 * k) / k,
            a_minus: (2.0 + p.rho_minus - 0.5 * k) / k,
            c_plus: p.rho_plus / k,
            c_minus: p.rho_minus / k,
            dtau,
            sqrt_dtau: dtau.sqrt(),
            restart: eps,
            touch_plus: p.rho_plus < 0.5 * k - 2.0,
            touch_minus: p.rho_minus < 0.5 * k - 2.0,
            t: 0.0,
            x: eps,
            y: eps,
            v_plus: eps,
            v_minus: -eps,
            rate: 0.0,
        };
        s.rate = s.time_rate(eps, eps);
        s
    }

    fn time_rate(&self, x: f64, y: f64) -> f64 {
        let (x2, y2) = (x * x, y * y);
        x2 * y2 / (self.kappa * (x2 + y2))
    }

    pub fn w(&self) -> f64 {
        self.v_plus - self.x
    }

    /// Drift and diffusion of `(ln x, ln y)` at gap ratio `x/y`.
    #[inline]
    fn coefficients(&self, ratio: f64) -> [f64; 4] {
        let r2 = ratio * ratio;
        let px = 1.0 / (1.0 + r2);
        let py = r2 * px;
        let sech_half = ratio * px;
        [
            self.a_plus * px - self.c_minus * sech_half,
            self.a_minus * py - self.c_plus * sech_half,
            -px.sqrt(),
            py.sqrt(),
        ]
    }

    /// Advance by one clock step `Δτ`; returns `(Δt, event)`.
    ///
    /// Explicit weak order-2 scheme for scalar noise (Platen), so the
    /// discretization bias of moments is `O(Δτ²)`.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> (f64, StepEvent) {
        let z: f64 = rng.sample(StandardNormal);
        self.step_with(z)
    }

    /// [`Stepper::step`] with the standard normal increment supplied.
    pub fn step_with(&mut self, z: f64) -> (f64, StepEvent) {
        let (x0, y0, q0) = (self.x, self.y, self.rate);
        let d = self.dtau;
        let sd = self.sqrt_dtau;
        let ratio = x0 / y0;
        let [ax, ay, bx, by] = self.coefficients(ratio);
        let dw = sd * z;
        // supporting values: predictor and the two ±√Δτ diffusion probes
        let bar = self.coefficients(ratio * ((ax - ay) * d + (bx - by) * dw).exp());
        let up = self.coefficients(ratio * ((ax - ay) * d + (bx - by) * sd).exp());
        let dn = self.coefficients(ratio * ((ax - ay) * d - (bx - by) * sd).exp());
        let ito = (dw * dw - d) / sd;
        let lx = 0.5 * (bar[0] + ax) * d
            + 0.25 * (up[2] + dn[2] + 2.0 * bx) * dw
            + 0.25 * (up[2] - dn[2]) * ito;
        let ly = 0.5 * (bar[1] + ay) * d
            + 0.25 * (up[3] + dn[3] + 2.0 * by) * dw
            + 0.25 * (up[3] - dn[3]) * ito;
        let mut x1 = x0 * lx.exp();
        let mut y1 = y0 * ly.exp();
        let mut q1 = self.time_rate(x1, y1);
        let mut h = 0.5 * d * (q0 + q1);
        let mut event = StepEvent::Normal;
        let floor = COLLISION * (self.kappa * (self.t + h)).sqrt();
        let hit_plus = self.touch_plus && x1 < floor;
        let hit_minus = self.touch_minus && y1 < floor;
        if hit_plus || hit_minus {
            // The gap process reflects at 0; restart it at a small but
            // resolvable distance.
            let reset = self.restart * (1.0 + (self.t + h).sqrt());
            if hit_plus {
                x1 = reset;
                event = StepEvent::HitPlus;
            }
            if hit_minus {
                y1 = reset;
            }
            q1 = self.time_rate(x1, y1);
            h = 0.5 * d * (q0 + q1);
        }
        self.t += h;
        // dV± = ±2/x± dt = ±2 q/x± dτ
        self.v_plus += d * (q0 / x0 + q1 / x1);
        self.v_minus -= d * (q0 / y0 + q1 / y1);
        self.x = x1;
        self.y = y1;
        self.rate = q1;
        (h, event)
    }
}

/// Simulate the driving triple up to `cfg.t_max`, recording every substep.
pub fn sample_driving(p: &SleParams, cfg: &SimConfig, seed: u64) -> Result<DrivingProcess> {
    sample_driving_stream(p, cfg, seed, 0)
}

/// [`sample_driving`] for sample `index` of a run (independent RNG stream).
pub fn sample_driving_stream(
    p: &SleParams,
    cfg: &SimConfig,
    seed: u64,
    index: u64,
) -> Result<DrivingProcess> {
    p.validate()?;
    cfg.validate()?;
    let mut rng = stream_rng(seed, index);
    let mut s = Stepper::new(p, cfg);
    let cap = cfg.max_steps.min(50_000_000);
    let mut d = DrivingProcess {
        times: vec![0.0],
        w: vec![s.w()],
        v_minus: vec![s.v_minus],
        v_plus: vec![s.v_plus],
        gap_plus: vec![s.x],
        gap_minus: vec![s.y],
        params: *p,
        seed,
        dtau: s.dtau,
        rates: vec![s.rate],
        hits: Vec::new(),
        truncated: false,
    };
    while s.t < cfg.t_max {
        if d.times.len() > cap {
            d.truncated = true;
            break;
        }
        let (_, event) = s.step(&mut rng);
        if event == StepEvent::HitPlus {
            d.hits.push(d.times.len());
        }
        d.times.push(s.t);
        d.w.push(s.w());
        d.v_minus.push(s.v_minus);
        d.v_plus.push(s.v_plus);
        d.gap_plus.push(s.x);
        d.gap_minus.push(s.y);
        d.rates.push(s.rate);
    }
    Ok(d)
}
