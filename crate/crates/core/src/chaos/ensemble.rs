use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coefficients::ChaosCoefficients;
use super::moments::grid_index;
use super::noise::{Distribution, NoiseSequence};
use super::path::{PathKernel, RescaledPath};
use crate::error::{Error, Result};
use crate::model::ProcessParams;

/// Paths per work unit. Partial sums are formed within a block in path order
/// and blocks are combined in block order, so results do not depend on the
/// number of worker threads.
pub const BLOCK_SIZE: usize = 64;

/// Moments of an ensemble of rescaled paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub params: ProcessParams,
    pub n: usize,
    pub n_paths: usize,
    pub seed: u64,
    pub distribution: Distribution,
    pub truncation: usize,
    pub tail_l2: f64,
    /// Mean of `v[m]`, `m = 0..=N`.
    pub mean_path: Vec<f64>,
    pub mean_se: Vec<f64>,
    pub grid: Vec<f64>,
    /// Centered empirical covariance of `v` on `grid`.
    pub covariance: Vec<Vec<f64>>,
    pub covariance_se: Vec<Vec<f64>>,
}

fn noise_for(kernel: &PathKernel, dist: Distribution, seed: u64, stream: u64) -> NoiseSequence {
    NoiseSequence::generate(kernel.noise_first(), kernel.noise_len(), dist, seed, stream)
}

/// `n_paths` paths; path `i` uses noise stream `i` of `master_seed`.
pub fn simulate_paths(
    params: &ProcessParams,
    n: usize,
    n_paths: usize,
    master_seed: u64,
    dist: Distribution,
    tail_tol: f64,
) -> Result<Vec<RescaledPath>> {
    let kernel = PathKernel::new(ChaosCoefficients::build(params, n, tail_tol)?, n)?;
    (0..n_paths as u64)
        .into_par_iter()
        .map(|i| kernel.path(&noise_for(&kernel, dist, master_seed, i)))
        .collect()
}

struct BlockStats {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    at_grid: Vec<Vec<f64>>,
}

pub fn simulate_ensemble(
    params: &ProcessParams,
    n: usize,
    n_paths: usize,
    master_seed: u64,
    dist: Distribution,
    grid: &[f64],
    tail_tol: f64,
) -> Result<EnsembleSummary> {
    if n_paths == 0 {
        return Err(Error::Config("number of paths must be >= 1".into()));
    }
    let idx = grid.iter().map(|&t| grid_index(t, n)).collect::<Result<Vec<_>>>()?;
    if let Some((&t, _)) = grid.iter().zip(&idx).find(|(_, &i)| i > n) {
        return Err(Error::Domain {
            function: "simulate_ensemble",
            value: t,
            constraint: "grid times in [0, 1]",
        });
    }
    let kernel = PathKernel::new(ChaosCoefficients::build(params, n, tail_tol)?, n)?;
    let n_blocks = n_paths.div_ceil(BLOCK_SIZE);
    let blocks: Vec<BlockStats> = (0..n_blocks)
        .into_par_iter()
        .map(|b| -> Result<BlockStats> {
            let mut st = BlockStats {
                sum: vec![0.0; n + 1],
                sum_sq: vec![0.0; n + 1],
                at_grid: Vec::new(),
            };
            for i in b * BLOCK_SIZE..((b + 1) * BLOCK_SIZE).min(n_paths) {
                let path = kernel.path(&noise_for(&kernel, dist, master_seed, i as u64))?;
                for (m, &v) in path.values.iter().enumerate() {
                    st.sum[m] += v;
                    st.sum_sq[m] += v * v;
                }
                st.at_grid.push(idx.iter().map(|&j| path.values[j]).collect());
            }
            Ok(st)
        })
        .collect::<Result<_>>()?;

    let mut sum = vec![0.0; n + 1];
    let mut sum_sq = vec![0.0; n + 1];
    let mut rows = Vec::with_capacity(n_paths);
    for b in blocks {
        for m in 0..=n {
            sum[m] += b.sum[m];
            sum_sq[m] += b.sum_sq[m];
        }
        rows.extend(b.at_grid);
    }
    let np = n_paths as f64;
    let mean_path: Vec<f64> = sum.iter().map(|s| s / np).collect();
    let mean_se = sum_sq
        .iter()
        .zip(&mean_path)
        .map(|(sq, mu)| {
            if n_paths < 2 {
                return f64::NAN;
            }
            let var = (sq - np * mu * mu).max(0.0) / (np - 1.0);
            (var / np).sqrt()
        })
        .collect();

    let g = grid.len();
    let centre: Vec<f64> = (0..g).map(|a| rows.iter().map(|r| r[a]).sum::<f64>() / np).collect();
    let mut covariance = vec![vec![0.0; g]; g];
    let mut covariance_se = vec![vec![f64::NAN; g]; g];
    for a in 0..g {
        for b in 0..g {
            let prods: Vec<f64> = rows.iter().map(|r| (r[a] - centre[a]) * (r[b] - centre[b])).collect();
            if n_paths < 2 {
                covariance[a][b] = f64::NAN;
                continue;
            }
            let mean = prods.iter().sum::<f64>() / np;
            let var = prods.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (np - 1.0);
            covariance[a][b] = mean * np / (np - 1.0);
            covariance_se[a][b] = (var / np).sqrt();
        }
    }
    Ok(EnsembleSummary {
        params: *params,
        n,
        n_paths,
        seed: master_seed,
        distribution: dist,
        truncation: kernel.coefficients().len(),
        tail_l2: kernel.coefficients().tail_l2(),
        mean_path,
        mean_se,
        grid: grid.to_vec(),
        covariance,
        covariance_se,
    })
}
