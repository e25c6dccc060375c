//! Gaussian samplers for the boundary fields.
//!
//! The lateral strip field is stationary, so it is drawn exactly by
//! circulant embedding (one FFT per line pair). The two boundary lines are
//! decoupled as `(U ± V)/√2` with `U`, `V` independent stationary fields of
//! covariance `C_same ± C_cross`. The interval field is not stationary on
//! a graded grid and uses a dense Cholesky factor.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::brownian::{conditioned_path, ProcessKind, ProcessSample};
use super::kernel::{lateral_cell_cov, log_cell_cov};
use crate::error::{domain, Error, Result};
use crate::mc::par_map;

/// Largest grid the samplers accept (cells per line).
pub const MAX_CELLS: usize = 1 << 16;

/// Uniform cells on `[-L, L]` on the lower boundary line and optionally on
/// the upper one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripGrid {
    pub half_width: f64,
    /// Cells per line (even, so 0 is a cell boundary and pairs coarsen).
    pub cells: usize,
    pub both_lines: bool,
}

impl StripGrid {
    pub fn new(half_width: f64, cells: usize, both_lines: bool) -> Result<Self> {
        let g = StripGrid {
            half_width,
            cells,
            both_lines,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite())
            || self.cells < 4
            || self.cells % 4 != 0
            || self.cells > MAX_CELLS
        {
            return Err(Error::Config(format!(
                "strip grid needs L > 0 and a multiple of 4 cells ≤ {MAX_CELLS}: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.cells as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.cells)
            .map(|i| -self.half_width + (i as f64 + 0.5) * h)
            .collect()
    }
}

/// One draw of the field on the strip boundary: radial part `Y` and the
/// lateral part on each line, averaged over the grid cells.
#[derive(Clone, Debug)]
pub struct BoundaryFieldGrid {
    pub grid: StripGrid,
    pub spacing: f64,
    pub centers: Vec<f64>,
    /// `Y` at the cell centres.
    pub radial_at_centers: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Option<Vec<f64>>,
    /// Variance of each lateral cell average (the same for every cell).
    pub lateral_var: f64,
    /// `Y` on the half-cell grid `-L + kΔ/2` (all centres at this and the
    /// next coarser resolution are on it).
    pub radial: ProcessSample,
}

impl BoundaryFieldGrid {
    /// Lateral covariance matrix entry between cells `i` and `j`.
    pub fn lateral_cov(sampler: &StripSampler, i: usize, j: usize, cross: bool) -> f64 {
        let k = i.abs_diff(j);
        if cross {
            sampler.lag_cross[k]
        } else {
            sampler.lag_same[k]
        }
    }

    /// The same draw on cells of twice the width: lateral averages of cell
    /// pairs and `Y` at the new centres.
    pub fn coarsen(&self, lateral_var: f64) -> BoundaryFieldGrid {
        let pair = |v: &Vec<f64>| v.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect::<Vec<_>>();
        let cells = self.grid.cells / 2;
        let grid = StripGrid { cells, ..self.grid };
        // coarse centre j sits at half-grid index 4j + 2
        let radial_at_centers = (0..cells).map(|j| self.radial.values[4 * j + 2]).collect();
        BoundaryFieldGrid {
            grid,
            spacing: 2.0 * self.spacing,
            centers: grid.centers(),
            radial_at_centers,
            lower: pair(&self.lower),
            upper: self.upper.as_ref().map(pair),
            lateral_var,
            radial: self.radial.clone(),
        }
    }
}

/// Sampler for a fixed [`StripGrid`]; the covariance and its spectrum are
/// computed once and shared by all draws.
pub struct StripSampler {
    pub grid: StripGrid,
    /// Cell-averaged lateral covariance by lag (same line / cross lines).
    pub lag_same: Vec<f64>,
    pub lag_cross: Vec<f64>,
    /// `√(λ/N)` of the circulant embeddings of `C_same ± C_cross`.
    sqrt_u: Vec<f64>,
    sqrt_v: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    /// Variance of the lateral average over a coarse (doubled) cell.
    pub coarse_var: f64,
    /// Most negative embedding eigenvalue relative to the largest (clipped).
    pub clipped: f64,
}

impl std::fmt::Debug for StripSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StripSampler")
            .field("grid", &self.grid)
            .field("embedding", &self.sqrt_u.len())
            .finish()
    }
}

fn embedding_spectrum(lags: &[f64], fft: &Arc<dyn Fft<f64>>) -> Vec<f64> {
    let n = fft.len();
    let mut buf: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(lags[k.min(n - k)], 0.0))
        .collect();
    fft.process(&mut buf);
    buf.iter().map(|c| c.re).collect()
}

impl StripSampler {
    pub fn new(grid: StripGrid) -> Result<Self> {
        grid.validate()?;
        let h = grid.spacing();
        let n = grid.cells;
        let mut planner = FftPlanner::new();
        // grow the embedding until its spectrum is nonnegative
        let mut size = (2 * n).next_power_of_two();
        loop {
            let half = size / 2;
            let lag_same: Vec<f64> = (0..=half)
                .map(|k| lateral_cell_cov(k as f64 * h, h, false))
                .collect();
            let lag_cross: Vec<f64> = (0..=half)
                .map(|k| lateral_cell_cov(k as f64 * h, h, true))
                .collect();
            if lag_same.iter().chain(&lag_cross).any(|v| !v.is_finite()) {
                return Err(Error::Consistency(
                    "lateral covariance quadrature failed".into(),
                ));
            }
            let fft = planner.plan_fft_forward(size);
            let u: Vec<f64> = lag_same
                .iter()
                .zip(&lag_cross)
                .map(|(s, c)| s + c)
                .collect();
            let v: Vec<f64> = lag_same
                .iter()
                .zip(&lag_cross)
                .map(|(s, c)| s - c)
                .collect();
            let (eu, ev) = (embedding_spectrum(&u, &fft), embedding_spectrum(&v, &fft));
            let top = eu.iter().chain(&ev).fold(0.0f64, |m, &x| m.max(x));
            let low = eu.iter().chain(&ev).fold(0.0f64, |m, &x| m.min(x));
            if low >= -1e-10 * top {
                let scale = 1.0 / size as f64;
                let root = |e: &[f64]| {
                    e.iter()
                        .map(|&x| (x.max(0.0) * scale).sqrt())
                        .collect::<Vec<_>>()
                };
                let coarse_var = 0.5 * (lag_same[0] + lag_same[1]);
                return Ok(StripSampler {
                    grid,
                    sqrt_u: root(&eu),
                    sqrt_v: root(&ev),
                    lag_same,
                    lag_cross,
                    fft,
                    coarse_var,
                    clipped: -low / top,
                });
            }
            if size >= 16 * n.next_power_of_two() {
                return Err(Error::NotPositiveDefinite {
                    pivot: 0,
                    value: low,
                });
            }
            size *= 2;
        }
    }

    pub fn lateral_var(&self) -> f64 {
        self.lag_same[0]
    }

    fn stationary<R: Rng>(&self, root: &[f64], rng: &mut R) -> Vec<f64> {
        let mut buf: Vec<Complex64> = root
            .iter()
            .map(|&r| {
                Complex64::new(
                    r * rng.sample::<f64, _>(StandardNormal),
                    r * rng.sample::<f64, _>(StandardNormal),
                )
            })
            .collect();
        self.fft.process(&mut buf);
        buf[..self.grid.cells].iter().map(|c| c.re).collect()
    }

    /// Draw the lateral field and the radial part for insertion `β`
    /// (drift `a = Q - β` of `Y`).
    pub fn sample<R: Rng>(&self, a: f64, rng: &mut R) -> BoundaryFieldGrid {
        let g = self.grid;
        let h = g.spacing();
        let u = self.stationary(&self.sqrt_u, rng);
        let (lower, upper) = if g.both_lines {
            let v = self.stationary(&self.sqrt_v, rng);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            (
                u.iter().zip(&v).map(|(a, b)| s * (a + b)).collect(),
                Some(u.iter().zip(&v).map(|(a, b)| s * (a - b)).collect()),
            )
        } else {
            // one line only: U/√2 + V/√2 has covariance C_same; draw it directly
            (self.stationary_same(rng), None)
        };
        // Y on the half-cell grid, independent conditioned processes on each side
        let n = g.cells;
        let side_times: Vec<f64> = (1..=n).map(|k| 0.5 * h * k as f64).collect();
        let sqrt2 = std::f64::consts::SQRT_2;
        let right = conditioned_path(a, sqrt2, &side_times, rng);
        let left = conditioned_path(a, sqrt2, &side_times, rng);
        let times: Vec<f64> = (0..=2 * n)
            .map(|k| -g.half_width + 0.5 * h * k as f64)
            .collect();
        let values: Vec<f64> = left
            .iter()
            .rev()
            .copied()
            .chain(std::iter::once(0.0))
            .chain(right.iter().copied())
            .collect();
        let radial_at_centers = (0..n).map(|i| values[2 * i + 1]).collect();
        BoundaryFieldGrid {
            grid: g,
            spacing: h,
            centers: g.centers(),
            radial_at_centers,
            lower,
            upper,
            lateral_var: self.lateral_var(),
            radial: ProcessSample {
                times,
                values,
                kind: ProcessKind::Conditioned,
            },
        }
    }

    fn stationary_same<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = self.stationary(&self.sqrt_u, rng);
        let v = self.stationary(&self.sqrt_v, rng);
        u.iter().zip(&v).map(|(a, b)| s * (a + b)).collect()
    }
}

/// Dense Gaussian vector with a given covariance, via Cholesky.
#[derive(Clone, Debug)]
pub struct DenseGaussian {
    n: usize,
    /// Lower factor, row-major packed.
    rows: Vec<Vec<f64>>,
    /// Jitter added to the diagonal (0 if none was needed).
    pub jitter: f64,
}

impl DenseGaussian {
    /// Factor `cov`; on failure retry with diagonal jitter up to
    /// `1e-10·trace/n`.
    pub fn new(cov: DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        if n == 0 || cov.ncols() != n {
            return domain("covariance must be square and nonempty");
        }
        let scale = cov.trace() / n as f64;
        for jitter in [0.0, 1e-14 * scale, 1e-12 * scale, 1e-10 * scale] {
            let mut m = cov.clone();
            for i in 0..n {
                m[(i, i)] += jitter;
            }
            if let Some(ch) = m.cholesky() {
                let l = ch.l();
                let rows = (0..n)
                    .map(|i| (0..=i).map(|j| l[(i, j)]).collect())
                    .collect();
                return Ok(DenseGaussian { n, rows, jitter });
            }
        }
        let min_diag = (0..n).map(|i| cov[(i, i)]).fold(f64::INFINITY, f64::min);
        Err(Error::NotPositiveDefinite {
            pivot: n,
            value: min_diag,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.n).map(|_| rng.sample(StandardNormal)).collect();
        self.rows
            .iter()
            .map(|r| r.iter().zip(&z).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Cells on `(0, 1)` graded towards both endpoints: edges
/// `φ(k/n)` with `φ(u) = u^g / (u^g + (1-u)^g)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalGrid {
    pub cells: usize,
    pub grading: f64,
}

impl IntervalGrid {
    pub fn new(cells: usize, grading: f64) -> Result<Self> {
        let g = IntervalGrid { cells, grading };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells < 4
            || self.cells % 2 != 0
            || self.cells > 8192
            || !(self.grading >= 1.0 && self.grading <= 4.0)
        {
            return Err(Error::Config(format!("interval grid needs an even cell count in [4, 8192] and grading in [1, 4]: {self:?}")));
        }
        Ok(())
    }

    pub fn edges(&self) -> Vec<f64> {
        let g = self.grading;
        (0..=self.cells)
            .map(|k| {
                let u = k as f64 / self.cells as f64;
                let (a, b) = (u.powf(g), (1.0 - u).powf(g));
                a / (a + b)
            })
            .collect()
    }
}

/// Covariance matrix of the averages of `-2 log|x-y|` over the cells
/// between consecutive `edges`.
pub fn log_cell_matrix(edges: &[f64]) -> DMatrix<f64> {
    let n = edges.len() - 1;
    let rows = par_map(n, |i| {
        (0..=i)
            .map(|j| log_cell_cov(edges[i], edges[i + 1], edges[j], edges[j + 1]))
            .collect::<Vec<_>>()
    });
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Sampler for the field `-2 log|x-y|` averaged over the cells of an
/// [`IntervalGrid`]; also reports the same draw on the grid with cell pairs
/// merged.
#[derive(Clone, Debug)]
pub struct IntervalSampler {
    pub grid: IntervalGrid,
    pub edges: Vec<f64>,
    gauss: DenseGaussian,
    pub fine_var: Vec<f64>,
    pub coarse_var: Vec<f64>,
}

impl IntervalSampler {
    pub fn new(grid: IntervalGrid) -> Result<Self> {
        grid.validate()?;
        let edges = grid.edges();
        let cov = log_cell_matrix(&edges);
        let n = grid.cells;
        let fine_var = (0..n).map(|i| cov[(i, i)]).collect();
        let coarse_var = (0..n / 2)
            .map(|j| {
                let (i, k) = (2 * j, 2 * j + 1);
                let (w1, w2) = (edges[i + 1] - edges[i], edges[k + 1] - edges[k]);
                (w1 * w1 * cov[(i, i)] + 2.0 * w1 * w2 * cov[(i, k)] + w2 * w2 * cov[(k, k)])
                    / ((w1 + w2) * (w1 + w2))
            })
            .collect();
        let gauss = DenseGaussian::new(cov)?;
        Ok(IntervalSampler {
            grid,
            edges,
            gauss,
            fine_var,
            coarse_var,
        })
    }

    pub fn jitter(&self) -> f64 {
        self.gauss.jitter
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.gauss.sample(rng)
    }

    /// Length-weighted averages over merged cell pairs.
    pub fn coarsen(&self, fine: &[f64]) -> Vec<f64> {
        let e = &self.edges;
        (0..fine.len() / 2)
            .map(|j| {
                let (i, k) = (2 * j, 2 * j + 1);
                let (w1, w2) = (e[i + 1] - e[i], e[k + 1] - e[k]);
                (w1 * fine[i] + w2 * fine[k]) / (w1 + w2)
            })
            .collect()
    }
}
