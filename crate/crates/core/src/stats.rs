//! Kolmogorov–Smirnov tests.

/// Statistic and asymptotic p-value of a KS test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub d: f64,
    pub p_value: f64,
}

/// `P[K > λ]` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn p_value(d: f64, ne: f64) -> f64 {
    // Stephens' small-sample correction
    let sq = ne.sqrt();
    kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample test of `a` and `b` coming from the same law.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    KsResult {
        d,
        p_value: p_value(d, na * nb / (na + nb)),
    }
}

/// One-sample test of `x` against the continuous CDF `cdf`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(x: &[f64], cdf: F) -> KsResult {
    let x = sorted(x);
    let n = x.len() as f64;
    let mut d = 0.0f64;
    for (i, &v) in x.iter().enumerate() {
        let f = cdf(v);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    KsResult {
        d,
        p_value: p_value(d, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_reference_points() {
        // classical critical values: P[K > 1.36] ≈ 0.05, P[K > 1.63] ≈ 0.01
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.628) - 0.01).abs() < 5e-4);
    }

    #[test]
    fn identical_samples_have_zero_distance() {
        let a: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let r = ks_two_sample(&a, &a);
        assert_eq!(r.d, 0.0);
        assert_eq!(r.p_value, 1.0);
        let u: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!(ks_one_sample(&u, |x| x).d <= 0.005 + 1e-12);
    }
}
