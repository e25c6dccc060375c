//! Boundary covariance kernels and their exact cell averages.
//!
//! On the strip `S = ℝ × (0, π)` the free-boundary GFF restricted to the
//! boundary has covariance `G_S`. Removing the radial part (the average on
//! vertical segments, `B_{2t}`, with covariance `2 min(|x|,|y|)` for `x, y`
//! of the same sign) leaves a stationary lateral kernel:
//!
//! ```text
//! same line:   -2 log(1 - e^{-|x-y|})
//! cross lines: -2 log(1 + e^{-|x-y|})
//! ```
//!
//! Both have `lim (K_ε + 2 log ε) = 0` under the semicircle average, so the
//! lateral part contributes no extra density to the chaos. On `(0, 1) ⊂ ∂ℍ`
//! the kernel is `-2 log|x-y|`, again with zero offset.

use crate::quad::{gauss_legendre, integrate, QuadOpts};

/// `G_S` between boundary points `x + iπ·upper_x` and `y + iπ·upper_y`.
pub fn strip_green(x: f64, upper_x: bool, y: f64, upper_y: bool) -> f64 {
    let cross = upper_x != upper_y;
    // |e^z - e^w| = |e^x ∓ e^y|, and the two log terms coincide on the boundary
    let m = x.max(y);
    let d = (x - y).abs();
    let inner = if cross {
        (-d).exp().ln_1p()
    } else {
        (-(-d).exp_m1()).ln()
    };
    -2.0 * (m + inner) + 2.0 * x.max(0.0) + 2.0 * y.max(0.0)
}

/// Covariance of the radial part `Y` at `x` and `y` (`B_{2t}` on each side).
pub fn radial_covariance(x: f64, y: f64) -> f64 {
    if x * y > 0.0 {
        2.0 * x.abs().min(y.abs())
    } else {
        0.0
    }
}

/// Lateral strip kernel at separation `d`.
pub fn lateral_kernel(d: f64, cross: bool) -> f64 {
    let d = d.abs();
    if cross {
        -2.0 * (-d).exp().ln_1p()
    } else {
        -2.0 * (-(-d).exp_m1()).ln()
    }
}

/// `lateral_kernel + 2 log|d|` (same line): bounded, `|d| + O(d²)` near 0.
fn lateral_regular(d: f64) -> f64 {
    let d = d.abs();
    if d < 1e-300 {
        return 0.0;
    }
    -2.0 * (-(-d).exp_m1() / d).ln()
}

/// Second antiderivative of `log|x|`.
fn log_g2(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x * (0.5 * x.abs().ln() - 0.75)
    }
}

fn quad_opts() -> QuadOpts {
    QuadOpts {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_panels: 2000,
    }
}

/// `(1/Δ²) ∫∫ f(s - t)` over two cells of width `Δ` whose centres are `d`
/// apart, i.e. `∫ f(d+u)(Δ-|u|)/Δ² du` over `(-Δ, Δ)`. `f` may have a kink
/// at 0.
fn triangle_average<F: Fn(f64) -> f64>(f: F, d: f64, delta: f64) -> f64 {
    let g = |u: f64| f(d + u) * (delta - u.abs());
    let mut cuts = vec![-delta, 0.0, delta];
    if (-d).abs() < delta && d != 0.0 {
        cuts.push(-d);
    }
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(g, w[0], w[1], quad_opts())
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
    }
    total / (delta * delta)
}

/// Cell-averaged lateral covariance between cells of width `delta` whose
/// centres are `d` apart.
pub fn lateral_cell_cov(d: f64, delta: f64, cross: bool) -> f64 {
    let d = d.abs();
    if cross {
        return triangle_average(|v| lateral_kernel(v, true), d, delta);
    }
    if d >= 2.5 * delta {
        return triangle_average(|v| lateral_kernel(v, false), d, delta);
    }
    // split off the log singularity: -2 log|v| averages in closed form
    let log_part =
        -2.0 * (log_g2(d + delta) - 2.0 * log_g2(d) + log_g2(d - delta)) / (delta * delta);
    log_part + triangle_average(lateral_regular, d, delta)
}

/// `∫_a^b ∫_c^d log|s - t| dt ds`.
fn log_double_integral(a: f64, b: f64, c: f64, d: f64) -> f64 {
    log_g2(b - c) - log_g2(a - c) - log_g2(b - d) + log_g2(a - d)
}

/// Cell-averaged `-2 log|s-t|` between the cells `[a, b]` and `[c, d]`.
pub fn log_cell_cov(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let (wi, wj) = (b - a, d - c);
    let gap = (c - b).max(a - d);
    let w = wi.max(wj);
    let mean = if gap >= 2.0 * w {
        // well separated: the integrand is smooth on the product of cells,
        // and fewer nodes suffice the further apart they are
        let (x, wt) = if gap < 10.0 * w {
            gl(8)
        } else if gap < 100.0 * w {
            gl(4)
        } else {
            gl(2)
        };
        let mut s = 0.0;
        for (xi, wi_) in x.iter().zip(wt) {
            let si = 0.5 * (a + b) + 0.5 * (b - a) * xi;
            for (xj, wj_) in x.iter().zip(wt) {
                let tj = 0.5 * (c + d) + 0.5 * (d - c) * xj;
                s += wi_ * wj_ * (si - tj).abs().ln();
            }
        }
        0.25 * s
    } else {
        log_double_integral(a, b, c, d) / (wi * wj)
    };
    -2.0 * mean
}

fn gl(n: usize) -> (&'static [f64], &'static [f64]) {
    use std::sync::OnceLock;
    static GL: OnceLock<[(Vec<f64>, Vec<f64>); 3]> = OnceLock::new();
    let t = GL.get_or_init(|| [gauss_legendre(2), gauss_legendre(4), gauss_legendre(8)]);
    let r = &t[match n {
        2 => 0,
        4 => 1,
        _ => 2,
    }];
    (&r.0, &r.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lateral_is_green_minus_radial() {
        for &(x, y) in &[(0.3, 1.7), (-2.0, 0.5), (-0.4, -3.1), (4.0, -4.0)] {
            for (ux, uy) in [(false, false), (false, true), (true, true)] {
                let lhs = strip_green(x, ux, y, uy) - radial_covariance(x, y);
                let rhs = lateral_kernel(x - y, ux != uy);
                assert!(
                    (lhs - rhs).abs() < 1e-12,
                    "{x} {y} {ux} {uy}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn diagonal_cell_average_has_the_log_constant() {
        // -2 log Δ + 3 + O(Δ)
        let delta = 1e-3;
        let c = lateral_cell_cov(0.0, delta, false);
        assert!((c - (-2.0 * delta.ln() + 3.0)).abs() < 2.0 * delta, "{c}");
        let i = log_cell_cov(0.2, 0.2 + delta, 0.2, 0.2 + delta);
        assert!((i - (-2.0 * delta.ln() + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn adjacent_cells_agree_between_methods() {
        // -2 log|s-t| averaged by the closed form vs the lateral route with
        // a regular part that vanishes
        let delta = 0.01;
        for k in 0..4 {
            let d = k as f64 * delta;
            let closed = log_cell_cov(0.0, delta, d, d + delta);
            let direct =
                -2.0 * (log_g2(d + delta) - 2.0 * log_g2(d) + log_g2(d - delta)) / (delta * delta);
            assert!((closed - direct).abs() < 1e-10, "{k}");
        }
    }
}
