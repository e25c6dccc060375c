//! Monte Carlo plumbing shared by the simulation engines: counter-based
//! per-sample RNG streams, an order-independent reduction, and the worker pool.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Environment variable that caps the number of worker threads.
pub const THREADS_ENV: &str = "WELDBENCH_THREADS";

/// Independent generator for sample `index` of a run seeded with `seed`.
///
/// The stream depends only on `(seed, index)`, never on scheduling.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Pairwise (cascade) summation; the result does not depend on how the
/// samples were produced, only on their order.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if x.len() <= LEAF {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Sample mean and standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanStats {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl MeanStats {
    pub fn of(x: &[f64]) -> MeanStats {
        let n = x.len();
        if n == 0 {
            return MeanStats {
                mean: f64::NAN,
                stderr: f64::NAN,
                n,
            };
        }
        let mean = pairwise_sum(x) / n as f64;
        if n == 1 {
            return MeanStats {
                mean,
                stderr: f64::NAN,
                n,
            };
        }
        let dev: Vec<f64> = x.iter().map(|v| (v - mean) * (v - mean)).collect();
        let var = pairwise_sum(&dev) / (n - 1) as f64;
        MeanStats {
            mean,
            stderr: (var / n as f64).sqrt(),
            n,
        }
    }
}

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let cap = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok());
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cap.filter(|&n| n > 0) {
            b = b.num_threads(n);
        }
        b.build().expect("worker pool")
    })
}

/// Number of workers used by [`par_map`].
pub fn workers() -> usize {
    pool().current_num_threads()
}

/// `(0..n).map(f)` evaluated on the worker pool; output is in index order.
pub fn par_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    pool().install(|| (0..n).into_par_iter().map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_of_order() {
        let a: Vec<u64> = (0..4).map(|i| stream_rng(9, i).random()).collect();
        let b: Vec<u64> = par_map(4, |i| stream_rng(9, i as u64).random());
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let x: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&x), 499_500.0);
        let s = MeanStats::of(&[1.0; 10]);
        assert_eq!((s.mean, s.stderr), (1.0, 0.0));
    }
}
