use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};
use weldbench::exact::{background_charge, h_bar, reflection_bar, BoundaryCosmology};
use weldbench::fieldsim::*;
use weldbench::mc::{stream_rng, MeanStats};
use weldbench::quad::{integrate, QuadOpts};
use weldbench::stats::ks_one_sample;

fn cosmo(mu1: f64, mu2: f64, gamma: f64) -> BoundaryCosmology {
    BoundaryCosmology::new(mu1, mu2, gamma).unwrap()
}

/// Density at `y < 0` of `B_{2t} - a t` conditioned to stay negative, as the
/// `x₀ → 0⁻` limit of the killed transition density times
/// `h(y)/h(x₀)` with `h(x) = 1 - e^{ax}`.
fn h_transform_density(a: f64, t: f64, y: f64) -> f64 {
    let var = 2.0 * t;
    let g = (-y * y / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt();
    (-0.5 * a * y - 0.25 * a * a * t).exp() * (-y / (a * t)) * g * (-(a * y).exp_m1())
}

#[test]
fn tail_time_integral_is_one_over_two_a_squared() {
    for a in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let v = gaussian_tail_time_integral(a).unwrap();
        assert!((v * 2.0 * a * a - 1.0).abs() < 1e-10, "a = {a}: {v}");
    }
    assert!(gaussian_tail_time_integral(0.0).is_err());
}

#[test]
fn conditioned_process_matches_the_h_transform() {
    let (a, t) = (0.5, 1.0);
    let opts = QuadOpts::default();
    let mass = integrate(|y| h_transform_density(a, t, y), -60.0, 0.0, opts)
        .unwrap()
        .value;
    assert!((mass - 1.0).abs() < 1e-9, "{mass}");
    let mean = integrate(|y| y * h_transform_density(a, t, y), -60.0, 0.0, opts)
        .unwrap()
        .value;

    let n = 20_000;
    let mut at_t = Vec::with_capacity(n);
    for i in 0..n {
        let p = sample_conditioned_drift_bm(a, 2.0, 0.25, i as u64).unwrap();
        assert_eq!(p.kind, ProcessKind::Conditioned);
        assert_eq!(p.values[0], 0.0);
        assert!(p.values[1..].iter().all(|&v| v < 0.0));
        at_t.push(p.values[4]);
    }
    let s = MeanStats::of(&at_t);
    assert!((s.mean - mean).abs() < 4.0 * s.stderr, "{s:?} vs {mean}");
    // and the whole law at t
    let cdf = |x: f64| {
        if x >= 0.0 {
            1.0
        } else {
            integrate(|y| h_transform_density(a, t, y), -60.0, x, opts)
                .unwrap()
                .value
        }
    };
    let ks = ks_one_sample(&at_t[..4000], cdf);
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn strong_drift_makes_the_conditioning_invisible() {
    let t = 1.0;
    let dist = |a: f64| {
        let x: Vec<f64> = (0..3000)
            .map(|i| {
                sample_conditioned_drift_bm(a, t, t, 100 + i)
                    .unwrap()
                    .values[1]
            })
            .collect();
        let free = Normal::new(-a * t, (2.0 * t).sqrt()).unwrap();
        ks_one_sample(&x, |v| free.cdf(v))
    };
    // the conditioning tilts the density at t by about -y/(a t), a relative
    // spread of √(2t)/(a t), so the distance closes like 1/a
    let d: Vec<_> = [0.5, 4.0, 16.0, 64.0].iter().map(|&a| dist(a)).collect();
    assert!(d[0].p_value < 1e-6, "{d:?}");
    assert!(d.windows(2).all(|w| w[1].d < w[0].d), "{d:?}");
    assert!(d[3].p_value > 0.01, "{d:?}");
}

#[test]
fn two_sided_process_has_drifted_increments() {
    let (a, m) = (1.0, 0.5);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for seed in 0..400 {
        let p = sample_two_sided(a, m, 2.0, seed).unwrap();
        assert_eq!(p.kind, ProcessKind::TwoSided);
        let k = p.times.iter().position(|&t| t == 0.0).unwrap();
        assert!(p.values[k] > -m);
        let dt = p.times[1] - p.times[0];
        // increments over [0, 1] and [-1, 0]
        let j = (1.0 / dt).round() as usize;
        right.push(p.values[k + j] - p.values[k]);
        left.push(p.values[k - j] - p.values[k]);
    }
    for x in [&left, &right] {
        let s = MeanStats::of(x);
        assert!((s.mean + a).abs() < 4.0 * s.stderr, "{s:?}");
        let var = x.iter().map(|v| (v - s.mean).powi(2)).sum::<f64>() / (x.len() - 1) as f64;
        assert!((var - 1.0).abs() < 0.2, "{var}");
    }
}

#[test]
fn recentred_process_stays_below_on_the_conditioned_side() {
    let (a, m) = (1.0, 0.5);
    for seed in 0..50 {
        let p = sample_recentred(a, m, 3.0, seed).unwrap();
        assert_eq!(p.kind, ProcessKind::Recentred);
        let k = p.times.iter().position(|&t| t == 0.0).unwrap();
        assert!(p.values[k] > -m);
        // somewhere to the left the path entered from below -M and never
        // returned above it before that
        let first_above = p.values.iter().position(|&v| v > -m).unwrap();
        assert!(first_above <= k);
    }
}

#[test]
fn the_two_constructions_agree_in_law() {
    for (i, &(a, m)) in [(0.5, 1.0), (1.0, 0.5), (2.0, 2.0)].iter().enumerate() {
        let r = equivalence_test(a, m, 5000, 40 + i as u64).unwrap();
        for (p, name) in r.p_values.iter().zip(FUNCTIONAL_NAMES) {
            assert!(*p > 0.01, "(a, M) = ({a}, {m}) {name}: p = {p}");
        }
        assert!(r.max_law_p > 0.01, "{r:?}");
        // time above -M of A^M has mean 1/(2a²); its mass normalization e^{2aM}/(4a³)
        assert!(
            (r.mean_time_above / r.expected_time_above - 1.0).abs() < 0.05,
            "{r:?}"
        );
        assert!(
            (r.mass_above / r.expected_mass_above - 1.0).abs() < 0.05,
            "{r:?}"
        );
        assert_eq!(r.overflow, 0);
    }
}

#[test]
fn separated_points_see_the_closed_form_kernel() {
    let l = 8.0;
    let (x, y) = (-0.5 * l, 0.5 * l);
    assert_eq!(radial_covariance(x, y), 0.0);
    for cross in [false, true] {
        let g = strip_green(x, false, y, cross);
        assert!((lateral_kernel(y - x, cross) - g).abs() < 1e-12);
        let delta = 2.0f64.powi(-10);
        assert!((lateral_cell_cov(y - x, delta, cross) - g).abs() < 1e-8);
    }
}

#[test]
fn lateral_field_has_the_kernel_covariance() {
    let grid = StripGrid::new(4.0, 256, true).unwrap();
    let s = StripSampler::new(grid).unwrap();
    assert!(s.clipped < 1e-10);
    // the Toeplitz covariance itself is positive definite
    let n = grid.cells;
    let cov = DMatrix::from_fn(n, n, |i, j| s.lag_same[i.abs_diff(j)]);
    let dense = DenseGaussian::new(cov.clone()).unwrap();
    assert!(dense.jitter <= 1e-10 * cov.trace() / n as f64);

    let draws: Vec<BoundaryFieldGrid> = (0..2000)
        .map(|i| s.sample(1.0, &mut stream_rng(3, i)))
        .collect();
    let emp = |f: &dyn Fn(&BoundaryFieldGrid) -> f64| {
        draws.iter().map(f).sum::<f64>() / draws.len() as f64
    };
    for (i, j, cross) in [
        (10usize, 10usize, false),
        (100, 101, false),
        (50, 60, false),
        (128, 128, true),
        (20, 30, true),
    ] {
        let want = if cross {
            s.lag_cross[i.abs_diff(j)]
        } else {
            s.lag_same[i.abs_diff(j)]
        };
        let got = emp(&|f| {
            f.lower[i]
                * if cross {
                    f.upper.as_ref().unwrap()[j]
                } else {
                    f.lower[j]
                }
        });
        // standard error of a product moment is about √(C_ii C_jj + C_ij²)/√n
        let se = ((s.lag_same[0].powi(2) + want * want) / draws.len() as f64).sqrt();
        assert!(
            (got - want).abs() < 4.0 * se,
            "({i}, {j}, {cross}): {got} vs {want}"
        );
    }
    // Gaussian marginals at three cells
    let sd = s.lateral_var().sqrt();
    for i in [5, 128, 250] {
        let x: Vec<f64> = draws
            .iter()
            .map(|f| f.upper.as_ref().unwrap()[i] / sd)
            .collect();
        let ks = ks_one_sample(&x, |v| Normal::standard().cdf(v));
        assert!(ks.p_value > 0.01, "cell {i}: {ks:?}");
    }
}

#[test]
fn full_field_variance_grows_like_two_abs_x() {
    // Var(lateral cell average) = -2 log Δ + 3 + o(1) and the radial part adds
    // 2|x|, so the full field's excess over the log term is 2|x| + 3 + o(1)
    for cells in [1024, 4096] {
        let grid = StripGrid::new(8.0, cells, false).unwrap();
        let s = StripSampler::new(grid).unwrap();
        let delta = grid.spacing();
        for x in [1.0f64, 2.0, 4.0] {
            let full = s.lateral_var() + radial_covariance(x, x);
            let excess = full - (-2.0 * delta.ln() + 3.0);
            assert!(
                (excess / (2.0 * x) - 1.0).abs() < 0.05,
                "Δ = {delta}, x = {x}: {excess}"
            );
        }
    }
}

#[test]
fn interval_covariance_factors_with_negligible_jitter() {
    let s = IntervalSampler::new(IntervalGrid::new(512, 2.0).unwrap()).unwrap();
    let trace: f64 = s.fine_var.iter().sum();
    assert!(s.jitter() <= 1e-10 * trace / s.fine_var.len() as f64);
    // graded grid and weights are mirror-symmetric
    let e = &s.edges;
    for i in 0..e.len() {
        assert!((e[i] + e[e.len() - 1 - i] - 1.0).abs() < 1e-14);
    }
    let w = interval_cell_weights(e, 0.3);
    for i in 0..w.len() {
        assert!((w[i] / w[w.len() - 1 - i] - 1.0).abs() < 1e-9, "{i}");
    }
    assert!((w.iter().sum::<f64>() / interval_mean_mass(0.6, 1.0) - 1.0).abs() < 1e-12);
    assert!(IntervalGrid::new(7, 2.0).is_err());
}

#[test]
fn chaos_weights_are_finite_and_reproducible() {
    let grid = StripGrid::new(8.0, 1024, true).unwrap();
    let f = sample_strip_boundary_field(1.9, grid, 1.0, 5).unwrap();
    let g = sample_strip_boundary_field(1.9, grid, 1.0, 5).unwrap();
    assert_eq!(f.lower, g.lower);
    assert_eq!(f.radial.values, g.radial.values);
    assert!(f.radial.values.iter().all(|&y| y <= 0.0));
    let m = gmc_boundary_measure(&f, 1.0).unwrap();
    let atoms = m.atoms();
    assert_eq!(atoms.len(), grid.cells);
    assert!(atoms
        .iter()
        .chain(&m.upper_atoms().unwrap())
        .all(|&(_, w)| w.is_finite() && w >= 0.0));
    assert!(m.ln_mass_lower().is_finite() && m.ln_mass_upper().unwrap().is_finite());

    let c = cosmo(1.0, 0.5, 1.0);
    let a = mc_reflection_moment(1.9, &c, 1.0, 64, grid, 9).unwrap();
    let b = mc_reflection_moment(1.9, &c, 1.0, 64, grid, 9).unwrap();
    assert_eq!(a.extrapolated.mean.to_bits(), b.extrapolated.mean.to_bits());
}

#[test]
fn first_moment_matches_the_mean_density() {
    // L = 8, Δ = 2^-10: E ν is unbiased, so this isolates normalization
    let (beta, gamma) = (1.9, 1.0);
    let grid = StripGrid::new(8.0, 16_384, false).unwrap();
    let e = mc_strip_mass(beta, gamma, 1500, grid, 21).unwrap();
    let exact = strip_mean_mass(beta, gamma, 8.0).unwrap();
    assert!(
        (e.fine.mean / exact - 1.0).abs() < 0.05,
        "{:?} vs {exact}",
        e.fine
    );
    // halving the resolution on the same draws barely moves it
    assert!((e.coarse.mean / e.fine.mean - 1.0).abs() < 0.02, "{e:?}");
    // the radial moment reduces to 1 at t = 0 and decays
    assert_eq!(radial_exp_moment(0.6, 0.5, 0.0).unwrap(), 1.0);
    assert!(radial_exp_moment(0.6, 0.5, 10.0).unwrap() < radial_exp_moment(0.6, 0.5, 1.0).unwrap());
}

#[test]
fn reflection_moment_matches_the_closed_form() {
    let (beta, gamma) = (1.9, 1.0);
    let grid = StripGrid::new(60.0, 8192, true).unwrap();
    let sampler = StripSampler::new(grid).unwrap();
    for (mu2, seed) in [(0.0, 1), (1.0, 2)] {
        let c = cosmo(1.0, mu2, gamma);
        let e = mc_reflection_moment_with(&sampler, beta, &c, gamma, 2000, seed).unwrap();
        let exact = reflection_bar(beta, &c, gamma).unwrap();
        assert!(!e.variance_flag);
        assert!(
            (e.extrapolated.mean / exact - 1.0).abs() < 0.1,
            "μ₂ = {mu2}: {e:?} vs {exact}"
        );
    }
}

#[test]
fn reflection_moment_is_homogeneous_in_mu() {
    let (beta, gamma) = (1.9, 1.0);
    let grid = StripGrid::new(30.0, 2048, false).unwrap();
    let one = mc_reflection_moment(beta, &cosmo(1.0, 0.0, gamma), gamma, 200, grid, 4).unwrap();
    let two = mc_reflection_moment(beta, &cosmo(2.0, 0.0, gamma), gamma, 200, grid, 4).unwrap();
    let p = reflection_exponent(beta, gamma);
    assert!((two.fine.mean / one.fine.mean / 2f64.powf(p) - 1.0).abs() < 1e-12);
}

#[test]
fn zeroth_moment_limit_is_one() {
    let gamma = 1.0;
    let beta = background_charge(gamma) - 1e-3;
    let grid = StripGrid::new(60.0, 4096, false).unwrap();
    let e = mc_reflection_moment(beta, &cosmo(1.0, 0.0, gamma), gamma, 400, grid, 6).unwrap();
    assert!((e.extrapolated.mean - 1.0).abs() < 0.05, "{e:?}");
    assert!((reflection_bar(beta, &cosmo(1.0, 0.0, gamma), gamma).unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn doubling_the_window_barely_changes_the_moment() {
    // the same draws on [-2L, 2L], with the measure restricted to [-L, L]
    let (beta, gamma, l) = (1.9, 1.0, 60.0);
    let grid = StripGrid::new(2.0 * l, 16_384, false).unwrap();
    let s = StripSampler::new(grid).unwrap();
    let p = reflection_exponent(beta, gamma);
    let (mut inner, mut outer) = (Vec::new(), Vec::new());
    for i in 0..300 {
        let f = s.sample(background_charge(gamma) - beta, &mut stream_rng(12, i));
        let m = gmc_boundary_measure(&f, gamma).unwrap();
        let atoms = m.atoms();
        let all: f64 = atoms.iter().map(|a| a.1).sum();
        let part: f64 = atoms.iter().filter(|a| a.0.abs() < l).map(|a| a.1).sum();
        outer.push(all.powf(p));
        inner.push(part.powf(p));
    }
    let (a, b) = (MeanStats::of(&inner).mean, MeanStats::of(&outer).mean);
    assert!((b / a - 1.0).abs() < 0.01, "{a} vs {b}");
}

#[test]
fn interval_moments_match_the_closed_form() {
    let s = IntervalSampler::new(IntervalGrid::new(512, 2.0).unwrap()).unwrap();
    for (beta, alpha, gamma, seed) in [(0.5, 2.5, 1.0, 3), (0.6, 2.4, 1.2, 4)] {
        let e = mc_interval_moment_with(&s, beta, alpha, gamma, 20_000, seed).unwrap();
        let exact = h_bar(beta, alpha, gamma).unwrap();
        assert!(!e.variance_flag);
        assert!(
            (e.extrapolated.mean / exact - 1.0).abs() < 0.1,
            "({beta}, {alpha}, {gamma}): {e:?} vs {exact}"
        );
        assert!((e.coarse.mean / e.fine.mean - 1.0).abs() < 0.02, "{e:?}");
    }
    // zeroth moment
    let gamma = 1.0;
    let beta = 0.5;
    let alpha = 2.0 * (background_charge(gamma) - beta);
    let e = mc_interval_moment_with(&s, beta, alpha, gamma, 50, 1).unwrap();
    assert_eq!(e.exponent, 0.0);
    assert!((e.extrapolated.mean - 1.0).abs() < 1e-12);
}

#[test]
fn estimators_reject_invalid_parameters() {
    let grid = StripGrid::new(10.0, 256, false).unwrap();
    let c = cosmo(1.0, 0.0, 1.0);
    // β ≤ γ/2, β ≥ Q, exponent above the cap
    for beta in [0.4, 2.6, 1.0] {
        assert!(
            mc_reflection_moment(beta, &c, 1.0, 10, grid, 0).is_err(),
            "{beta}"
        );
    }
    let ig = IntervalGrid::new(16, 2.0).unwrap();
    assert!(mc_interval_moment(0.5, 0.0, 1.0, 10, ig, 0).is_err());
    assert!(mc_interval_moment(2.1, 1.0, 1.0, 10, ig, 0).is_err()); // γβ/2 ≥ 1
    assert!(mc_interval_moment(-1.0, 1.0, 1.0, 10, ig, 0).is_err()); // α/2 + β ≤ γ/2
    assert!(StripGrid::new(10.0, 6, false).is_err());
    let two_sided = cosmo(1.0, 1.0, 1.0);
    let one_line = StripSampler::new(grid).unwrap();
    assert!(mc_reflection_moment_with(&one_line, 1.9, &two_sided, 1.0, 10, 0).is_err());
}
