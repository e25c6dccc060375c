use statrs::distribution::{ChiSquared, ContinuousCDF};
use weldbench::exact::{sle_derivative_moment, SleParams};
use weldbench::loewner::*;
use weldbench::stats::{ks_one_sample, ks_two_sample};

fn sle(kappa: f64, rho_minus: f64, rho_plus: f64) -> SleParams {
    SleParams::new(kappa, rho_minus, rho_plus).unwrap()
}

fn horizon(t_max: f64) -> SimConfig {
    SimConfig {
        t_max,
        ..SimConfig::default()
    }
}

/// The same driving function on a grid with the clock step halved: gaps are
/// interpolated log-linearly in the clock, and time and `V±` re-integrated.
fn refine(d: &DrivingProcess) -> DrivingProcess {
    let k = d.params.kappa;
    let rate = |x: f64, y: f64| x * x * y * y / (k * (x * x + y * y));
    let h = 0.5 * d.dtau;
    let mut gx = vec![d.gap_plus[0]];
    let mut gy = vec![d.gap_minus[0]];
    for i in 1..d.len() {
        gx.extend([(d.gap_plus[i - 1] * d.gap_plus[i]).sqrt(), d.gap_plus[i]]);
        gy.extend([(d.gap_minus[i - 1] * d.gap_minus[i]).sqrt(), d.gap_minus[i]]);
    }
    let q: Vec<f64> = gx.iter().zip(&gy).map(|(&x, &y)| rate(x, y)).collect();
    let (mut t, mut vp, mut vm) = (vec![d.times[0]], vec![d.v_plus[0]], vec![d.v_minus[0]]);
    for j in 1..q.len() {
        t.push(t[j - 1] + 0.5 * h * (q[j - 1] + q[j]));
        vp.push(vp[j - 1] + h * (q[j - 1] / gx[j - 1] + q[j] / gx[j]));
        vm.push(vm[j - 1] - h * (q[j - 1] / gy[j - 1] + q[j] / gy[j]));
    }
    let w = vp.iter().zip(&gx).map(|(v, x)| v - x).collect();
    DrivingProcess {
        times: t,
        w,
        v_minus: vm,
        v_plus: vp,
        gap_plus: gx,
        gap_minus: gy,
        dtau: h,
        rates: q,
        hits: Vec::new(),
        ..d.clone()
    }
}

// ------------------------------------------------------------ deterministic

#[test]
fn zero_driving_has_closed_form_flow() {
    // W ≡ 0, V± = ±2√t: g_t(1) = √(1+4t), g'_t(1) = (1+4t)^{-1/2}.
    let times: Vec<f64> = (0..=40_000)
        .map(|i| 1e-12 * 10f64.powf(i as f64 * 16.0 / 40_000.0))
        .collect();
    let w = vec![0.0; times.len()];
    let vp: Vec<f64> = times.iter().map(|t| 2.0 * t.sqrt()).collect();
    let vm: Vec<f64> = vp.iter().map(|v| -v).collect();
    let d = DrivingProcess::from_path(sle(2.0, 0.0, 0.0), times, w, vm, vp).unwrap();
    let tp = track_point(&d, 1e-6);
    assert!(tp.swallowed.is_none());
    for i in (0..tp.times.len()).step_by(997) {
        let s = (1.0 + 4.0 * tp.times[i]).sqrt();
        assert!((tp.g[i] / s - 1.0).abs() < 1e-6, "g at t = {}", tp.times[i]);
        assert!(
            (tp.gprime[i] * s - 1.0).abs() < 1e-6,
            "g' at t = {}",
            tp.times[i]
        );
    }
    assert!(tp.gprime.windows(2).all(|w| w[1] <= w[0]));
    let psi = psi_prime(&tp, &horizon(1e4)).unwrap();
    assert!((psi.value - 2.0).abs() < 1e-3, "{}", psi.value);
    assert!(psi.value > 1.0);
}

#[test]
fn from_path_rejects_bad_grids() {
    let p = sle(2.0, 0.0, 0.0);
    let z = vec![0.0; 3];
    assert!(
        DrivingProcess::from_path(p, vec![0.0, 1.0, 1.0], z.clone(), z.clone(), z.clone()).is_err()
    );
    assert!(DrivingProcess::from_path(p, vec![0.0, 1.0], z.clone(), z.clone(), z.clone()).is_err());
}

// ------------------------------------------------------------ driving process

#[test]
fn driving_is_ordered_monotone_and_reproducible() {
    let p = sle(2.5, 1.0, 0.5);
    let cfg = horizon(100.0);
    let d = sample_driving(&p, &cfg, 3).unwrap();
    assert!(d.final_time() >= 100.0 && !d.truncated);
    for i in 0..d.len() {
        assert!(
            d.v_minus[i] < d.w[i] && d.w[i] < d.v_plus[i],
            "ordering at {i}"
        );
        assert!(d.gap_plus[i] > 0.0 && d.gap_minus[i] > 0.0);
    }
    assert!(d.v_plus.windows(2).all(|v| v[1] >= v[0]));
    assert!(d.v_minus.windows(2).all(|v| v[1] <= v[0]));
    assert!(d.times.windows(2).all(|t| t[1] > t[0]));
    let again = sample_driving(&p, &cfg, 3).unwrap();
    assert_eq!(d.w, again.w);
    let other = sample_driving(&p, &cfg, 4).unwrap();
    assert_ne!(d.w.last(), other.w.last());
}

#[test]
fn plain_driving_has_brownian_variance() {
    let kappa = 2.0;
    let p = sle(kappa, 0.0, 0.0);
    let cfg = horizon(1.0);
    let n = 8000;
    let z: Vec<f64> = (0..n)
        .map(|i| {
            let d = sample_driving_stream(&p, &cfg, 21, i).unwrap();
            d.w.last().unwrap() / d.final_time().sqrt()
        })
        .collect();
    let var = z.iter().map(|v| v * v).sum::<f64>() / n as f64;
    // Var of the sample second moment of a normal is 2σ⁴/n
    let tol = 4.0 * (2.0 / n as f64).sqrt();
    assert!((var / kappa - 1.0).abs() < tol, "Var W_1 = {var}");
    assert!(
        ks_one_sample(&z, |v| 0.5
            * statrs::function::erf::erfc(-v / (2.0 * kappa).sqrt()))
        .p_value
            > 1e-3
    );
}

#[test]
fn driving_is_scale_invariant() {
    let p = sle(3.0, 1.0, 0.5);
    let sample = |t: f64, seed: u64| -> Vec<f64> {
        (0..3000)
            .map(|i| {
                let d = sample_driving_stream(&p, &horizon(t), seed, i).unwrap();
                d.w.last().unwrap() / d.final_time().sqrt()
            })
            .collect()
    };
    let ks = ks_two_sample(&sample(1.0, 5), &sample(4.0, 6));
    assert!(ks.p_value > 1e-3, "{ks:?}");
}

#[test]
fn force_point_gap_is_a_bessel_process() {
    // κ = 2, ρ₊ = 2: (V⁺ - W)/√κ is Bessel of dimension 1 + 2(ρ₊+2)/κ = 5.
    let p = sle(2.0, 0.0, 2.0);
    let cfg = horizon(1.0);
    let u: Vec<f64> = (0..3000)
        .map(|i| {
            let d = sample_driving_stream(&p, &cfg, 8, i).unwrap();
            d.gap_plus.last().unwrap().powi(2) / (2.0 * d.final_time())
        })
        .collect();
    let chi = ChiSquared::new(5.0).unwrap();
    let ks = ks_one_sample(&u, |v| chi.cdf(v));
    assert!(ks.p_value > 1e-3, "{ks:?}");
}

// ------------------------------------------------------------ the flow at 1

#[test]
fn halving_the_step_barely_moves_the_flow() {
    // the rough path makes the quadrature error O(dt) overall, and close
    // approaches of V⁺ to W dominate it, so the comparison needs a fine step
    let p = sle(2.0, 1.0, 0.0);
    let cfg = SimConfig {
        t_max: 1e3,
        dt: 1e-4,
        ..SimConfig::default()
    };
    for seed in 0..5 {
        let d = sample_driving(&p, &cfg, seed).unwrap();
        let coarse = track_point(&d, cfg.swallow_eps);
        let fine = track_point(&refine(&d), cfg.swallow_eps);
        let (k, i) = (coarse.times.len() - 1, fine.times.len() - 1);
        assert_eq!(i, 2 * k);
        for (a, b, what) in [
            (fine.g[i], coarse.g[k], "g"),
            (fine.gprime[i], coarse.gprime[k], "g'"),
        ] {
            assert!(
                (a / b - 1.0).abs() < 1e-4,
                "{what}, seed {seed}: {}",
                a / b - 1.0
            );
        }
    }
}

#[test]
fn fused_simulation_matches_recorded_path() {
    let p = sle(2.0, 1.0, 0.5);
    let cfg = SimConfig::default();
    for i in 0..8 {
        let d = sample_driving_stream(&p, &cfg, 13, i).unwrap();
        let psi = psi_prime(&track_point(&d, cfg.swallow_eps), &cfg).unwrap();
        match simulate_psi_prime(&p, &cfg, 13, i) {
            PathOutcome::Accepted { psi: v, diag } | PathOutcome::NotConverged { psi: v, diag } => {
                assert!(
                    (v / psi.value - 1.0).abs() < 1e-10,
                    "path {i}: {v} vs {}",
                    psi.value
                );
                assert!((diag - psi.diag).abs() < 1e-9);
                assert!(v > 1.0);
            }
            o => panic!("path {i}: {o:?}"),
        }
    }
}

#[test]
fn small_kappa_approaches_the_vertical_slit() {
    // κ → 0 with ρ = 0 is the straight slit, for which ψ'(1) = 2.
    let p = sle(0.01, 0.0, 0.0);
    let s = sample_psi_prime(&p, 40, &horizon(1e4), 2).unwrap();
    assert_eq!(s.values.len(), 40);
    let m = s.moment(1.0);
    assert!((m.mean - 2.0).abs() < 0.03, "{m:?}");
    assert!(s.values.iter().all(|&v| v > 1.0));
}

#[test]
fn touching_regime_swallows_the_point() {
    let p = sle(4.0, 0.0, -1.5);
    let cfg = horizon(1e3);
    let swallowed = (0..100)
        .filter(|&i| {
            let d = sample_driving_stream(&p, &cfg, 17, i).unwrap();
            track_point(&d, cfg.swallow_eps).swallowed.is_some()
        })
        .count();
    assert!(swallowed > 50, "{swallowed}");
    assert!(sample_psi_prime(&p, 10, &cfg, 1).is_err());
}

// ------------------------------------------------------------ moments

#[test]
fn zeroth_moment_is_exactly_one() {
    let m = estimate_moment(&sle(2.0, 0.0, 0.0), 0.0, 200, &SimConfig::default(), 1).unwrap();
    assert_eq!((m.mean, m.stderr), (1.0, 0.0));
    assert!(!m.flagged && !m.heavy_tailed);
}

#[test]
fn estimates_are_seed_deterministic() {
    let p = sle(3.0, 1.0, 0.0);
    let cfg = SimConfig::default();
    let a = estimate_moment(&p, -0.5, 300, &cfg, 42).unwrap();
    let b = estimate_moment(&p, -0.5, 300, &cfg, 42).unwrap();
    assert_eq!(a, b);
    assert!(estimate_moment(&p, f64::NAN, 10, &cfg, 42).is_err());
    assert!(estimate_moment(&p, -0.5, 10, &SimConfig { dt: -1.0, ..cfg }, 42).is_err());
}

#[test]
fn moment_matches_closed_form() {
    let p = sle(2.0, 1.0, 0.5);
    let s = sample_psi_prime(&p, 20_000, &SimConfig::default(), 5).unwrap();
    assert!(!s.flagged());
    for lambda in [-1.0, -0.5] {
        let m = s.moment(lambda);
        let exact = sle_derivative_moment(lambda, &p).unwrap();
        assert!(
            (m.mean - exact).abs() < 4.0 * m.stderr,
            "λ = {lambda}: {m:?} vs {exact}"
        );
    }
}

#[test]
fn halving_the_step_moves_moments_less_than_noise() {
    let p = sle(2.0, 0.0, 0.0);
    let s = sample_psi_prime_refined(&p, 6000, &SimConfig::default(), 7).unwrap();
    for lambda in [-1.0, -0.5] {
        let shift = s.difference(lambda).mean.abs();
        assert!(
            shift < s.first.moment(lambda).stderr,
            "λ = {lambda}: shift {shift}"
        );
    }
}

#[test]
fn start_offset_bias_is_below_noise() {
    let p = sle(2.0, 0.0, 0.0);
    let s = sample_psi_prime_start_study(&p, 6000, &SimConfig::default(), 10.0, 7).unwrap();
    for lambda in [-1.0, -0.5] {
        let shift = s.difference(lambda).mean.abs();
        assert!(
            shift < s.first.moment(lambda).stderr,
            "λ = {lambda}: shift {shift}"
        );
    }
}

#[test]
fn moments_compose_across_force_points() {
    // For κ = 2: m(ρa+ρb+2, ρ₊) = m(ρa, ρb+ρ₊+2) · m(ρb, ρ₊).
    let lambda = -1.0;
    let cfg = SimConfig::default();
    let est = |p: SleParams, seed| {
        sample_psi_prime(&p, 15_000, &cfg, seed)
            .unwrap()
            .moment(lambda)
    };
    let (lhs_p, r1, r2) = (sle(2.0, 1.0, 0.0), sle(2.0, -0.5, 1.5), sle(2.0, -0.5, 0.0));
    let exact = |p: &SleParams| sle_derivative_moment(lambda, p).unwrap();
    assert!((exact(&lhs_p) / (exact(&r1) * exact(&r2)) - 1.0).abs() < 1e-10);
    let (l, a, b) = (est(lhs_p, 1), est(r1, 2), est(r2, 3));
    let rhs = a.mean * b.mean;
    let rel_se =
        ((l.stderr / l.mean).powi(2) + (a.stderr / a.mean).powi(2) + (b.stderr / b.mean).powi(2))
            .sqrt();
    assert!(
        (l.mean / rhs).ln().abs() < 4.0 * rel_se,
        "{} vs {rhs} (rel se {rel_se})",
        l.mean
    );
}

#[test]
fn tail_fit_recovers_a_power_law() {
    let p = sle(2.0, 0.0, 0.0);
    let s = sample_psi_prime(&p, 400, &SimConfig::default(), 9).unwrap();
    let fit = s.tail_fit(1.0, 1e6, 10);
    assert!(fit.survival.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(s.survival(&[0.5])[0], s.acceptance());
}
