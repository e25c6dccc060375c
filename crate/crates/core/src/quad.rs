//! Adaptive Gauss–Kronrod (7/15) quadrature for real and complex integrands,
//! plus fixed Gauss–Legendre rules.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: a vector space over `f64` with a norm.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn norm(self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel; returns (estimate, error estimate).
pub fn gk15<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k = k + s * WGK[j];
        if j % 2 == 1 {
            g = g + s * WG[j / 2];
        }
    }
    let res = k * h;
    let err = ((k - g) * h).norm();
    (res, err)
}

/// Tolerances and limits for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct QuadOpts {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_panels: 4000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

/// Globally adaptive bisection on `[a, b]`: always split the panel with the
/// largest error until the total error meets the tolerance.
pub fn integrate<T: Integrand, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOpts,
) -> Result<Quadrature<T>> {
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: 0.0,
            panels: 0,
        });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= target {
            break;
        }
        if panels.len() >= opts.max_panels {
            return Err(Error::Quadrature {
                achieved: err,
                target,
            });
        }
        let (imax, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (pa, pb, pv, pe) = panels.swap_remove(imax);
        let m = 0.5 * (pa + pb);
        if m <= pa || m >= pb {
            // Panel can no longer be split in floating point.
            return Err(Error::Quadrature {
                achieved: err,
                target,
            });
        }
        let (v1, e1) = gk15(&mut f, pa, m);
        let (v2, e2) = gk15(&mut f, m, pb);
        total = total - pv + v1 + v2;
        err = err - pe + e1 + e2;
        panels.push((pa, m, v1, e1));
        panels.push((m, pb, v2, e2));
    }
    // Re-sum to shed accumulated update rounding.
    let value = panels.iter().fold(T::zero(), |acc, p| acc + p.2);
    let error = panels.iter().map(|p| p.3).sum();
    Ok(Quadrature {
        value,
        error,
        panels: panels.len(),
    })
}

/// Integral over `[a, ∞)`: `[a, a+1]` directly, the rest through
/// `t = a + e^u` with `u = v/(1-v)`, which reaches far enough out for slowly
/// (algebraically) decaying integrands. Contributions beyond `t = a + 1e100`
/// are dropped.
pub fn integrate_to_infinity<T: Integrand, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    opts: QuadOpts,
) -> Result<Quadrature<T>> {
    let head = integrate(&mut f, a, a + 1.0, opts)?;
    let tail = integrate(
        |v: f64| {
            let w = 1.0 - v;
            let u = v / w;
            if u > 230.0 {
                return T::zero();
            }
            let eu = u.exp();
            let t = a + eu;
            let y = f(t);
            if y.norm() == 0.0 {
                y
            } else {
                y * (eu / (w * w))
            }
        },
        0.0,
        1.0,
        opts,
    )?;
    Ok(Quadrature {
        value: head.value + tail.value,
        error: head.error + tail.error,
        panels: head.panels + tail.panels,
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton on the recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
