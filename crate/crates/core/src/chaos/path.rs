use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::coefficients::ChaosCoefficients;
use super::newton::off_diagonal_from_power_sums;
use super::noise::{Distribution, NoiseSequence};
use crate::error::{Error, Result};
use crate::model::{PathMeta, ProcessParams, SamplePath};

/// `Y(n) = sum' prod_j g[n - i_j] eps_{i_j}` over ordered tuples of distinct
/// indices, evaluated as `k! e_k(a)` with `a_i = g[n-i] eps_i`.
pub fn chaos_value(n: i64, coeffs: &ChaosCoefficients, noise: &NoiseSequence) -> Result<f64> {
    let k = coeffs.params().k() as usize;
    let m = coeffs.len() as i64;
    let eps = noise.window(n - m, n - 1)?;
    let mut p = vec![0.0; k + 1];
    // eps[i] is eps_{n-m+i}, paired with lag m - i.
    for (i, &e) in eps.iter().enumerate() {
        let a = coeffs.values()[(m as usize) - 1 - i] * e;
        let mut ar = 1.0;
        for pr in p.iter_mut().skip(1) {
            ar *= a;
            *pr += ar;
        }
    }
    Ok(off_diagonal_from_power_sums(&p, k))
}

/// `v[m] = N^{-H} sum_{n=1}^{m} Y(n)` for `m = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaledPath {
    pub n: usize,
    pub params: ProcessParams,
    pub values: Vec<f64>,
    pub truncation: usize,
    pub tail_l2: f64,
    pub seed: u64,
    pub stream: u64,
    pub distribution: Distribution,
}

impl RescaledPath {
    /// `(m/N, v[m])` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n as f64;
        self.values.iter().enumerate().map(move |(m, &v)| (m as f64 / n, v))
    }

    pub fn to_sample_path(&self) -> SamplePath {
        SamplePath {
            horizon: 1.0,
            values: self.values.clone(),
            meta: PathMeta {
                params: self.params,
                seed: self.seed,
                stream: self.stream,
                generator: format!("chacha8/{}", self.distribution),
            },
        }
    }
}

/// Precomputed spectra of `g^r`, `r = 1..=k`, for one `(coefficients, N)`
/// pair. Reused across all paths of an ensemble.
pub struct PathKernel {
    coeffs: ChaosCoefficients,
    n: usize,
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    spectra: Vec<Vec<Complex64>>,
}

impl PathKernel {
    pub fn new(coeffs: ChaosCoefficients, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("N must be >= 1".into()));
        }
        let m = coeffs.len();
        // Outputs at indices >= M-1 of a length-`size` circular convolution
        // are free of wrap-around once size >= N + M - 1.
        let size = (n + m - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let k = coeffs.params().k() as usize;
        let spectra = (1..=k)
            .map(|r| {
                let mut buf = vec![Complex64::new(0.0, 0.0); size];
                for (slot, &g) in buf.iter_mut().zip(coeffs.values()) {
                    *slot = Complex64::new(g.powi(r as i32), 0.0);
                }
                forward.process(&mut buf);
                buf
            })
            .collect();
        Ok(PathKernel {
            coeffs,
            n,
            size,
            forward,
            inverse,
            spectra,
        })
    }

    pub fn coefficients(&self) -> &ChaosCoefficients {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// First noise index required, `1 - M`.
    pub fn noise_first(&self) -> i64 {
        1 - self.coeffs.len() as i64
    }

    /// Number of innovations required, `N + M - 1`.
    pub fn noise_len(&self) -> usize {
        self.n + self.coeffs.len() - 1
    }

    /// `Y(1..=N)` from power-sum convolutions.
    pub fn chaos_values(&self, noise: &NoiseSequence) -> Result<Vec<f64>> {
        let m = self.coeffs.len();
        let n = self.n;
        let lo = self.noise_first();
        let eps = noise.window(lo, n as i64 - 1)?;
        let k = self.spectra.len();
        let scale = 1.0 / self.size as f64;
        // p[r][n-1] = sum_j g[j]^r eps_{n-j}^r
        let mut p = vec![vec![0.0; n]; k + 1];
        let mut buf = vec![Complex64::new(0.0, 0.0); self.size];
        for r in 1..=k {
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for (slot, &e) in buf.iter_mut().zip(eps) {
                *slot = Complex64::new(e.powi(r as i32), 0.0);
            }
            self.forward.process(&mut buf);
            for (z, s) in buf.iter_mut().zip(&self.spectra[r - 1]) {
                *z *= s;
            }
            self.inverse.process(&mut buf);
            for (idx, out) in p[r].iter_mut().enumerate() {
                *out = buf[idx + m - 1].re * scale;
            }
        }
        let mut ps = vec![0.0; k + 1];
        Ok((0..n)
            .map(|i| {
                for r in 1..=k {
                    ps[r] = p[r][i];
                }
                off_diagonal_from_power_sums(&ps, k)
            })
            .collect())
    }

    pub fn path(&self, noise: &NoiseSequence) -> Result<RescaledPath> {
        let y = self.chaos_values(noise)?;
        let params = *self.coeffs.params();
        let norm = (self.n as f64).powf(-params.hurst());
        let mut values = Vec::with_capacity(self.n + 1);
        values.push(0.0);
        let mut s = 0.0;
        for v in y {
            s += v;
            values.push(norm * s);
        }
        Ok(RescaledPath {
            n: self.n,
            params,
            values,
            truncation: self.coeffs.len(),
            tail_l2: self.coeffs.tail_l2(),
            seed: noise.seed(),
            stream: noise.stream(),
            distribution: noise.distribution(),
        })
    }
}

/// Rescaled partial-sum path with coefficients tempered by `lambda / N`.
pub fn rescaled_path(params: &ProcessParams, n: usize, noise: &NoiseSequence, tail_tol: f64) -> Result<RescaledPath> {
    let coeffs = ChaosCoefficients::build(params, n, tail_tol)?;
    rescaled_path_with(coeffs, n, noise)
}

pub fn rescaled_path_with(coeffs: ChaosCoefficients, n: usize, noise: &NoiseSequence) -> Result<RescaledPath> {
    PathKernel::new(coeffs, n)?.path(noise)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_moving_average() {
        let p = ProcessParams::new(1, 0.8, 1.0).unwrap();
        let c = ChaosCoefficients::with_length(&p, 0.1, 6).unwrap();
        let e = NoiseSequence::generate(-10, 30, Distribution::Gaussian, 5, 0);
        let n = 4;
        let direct: f64 = (1..=6).map(|j| c.lag(j) * e.get(n - j).unwrap()).sum();
        assert!((chaos_value(n, &c, &e).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn order_two_three_term_window() {
        let p = ProcessParams::new(2, 0.8, 1.0).unwrap();
        let c = ChaosCoefficients::with_length(&p, 0.1, 3).unwrap();
        let e = NoiseSequence::from_values(0, vec![0.5, -1.0, 2.0]);
        let a: Vec<f64> = (0..3).map(|i| c.lag(3 - i) * e.values()[i as usize]).collect();
        let p1: f64 = a.iter().sum();
        let p2: f64 = a.iter().map(|x| x * x).sum();
        assert!((chaos_value(3, &c, &e).unwrap() - (p1 * p1 - p2)).abs() < 1e-14);
        assert!(matches!(chaos_value(4, &c, &e), Err(Error::InsufficientNoise { .. })));
    }

    #[test]
    fn path_matches_double_loop() {
        let p = ProcessParams::new(1, 0.75, 1.0).unwrap();
        let n = 16;
        let c = ChaosCoefficients::with_length(&p, 1.0 / n as f64, 8).unwrap();
        let e = NoiseSequence::generate(-7, n + 7, Distribution::Gaussian, 99, 2);
        let path = rescaled_path_with(c.clone(), n, &e).unwrap();
        assert_eq!(path.values.len(), n + 1);
        assert_eq!(path.values[0], 0.0);
        let norm = (n as f64).powf(-0.75);
        let mut s = 0.0;
        for m in 1..=n as i64 {
            for j in 1..=8 {
                s += c.lag(j) * e.get(m - j).unwrap();
            }
            assert!((path.values[m as usize] - norm * s).abs() < 1e-13);
        }
    }

    #[test]
    fn fft_path_matches_pointwise_chaos() {
        for k in 1..=3 {
            let p = ProcessParams::new(k, 0.8, 1.0).unwrap();
            let n = 40;
            let c = ChaosCoefficients::build(&p, n, 1e-6).unwrap();
            let kernel = PathKernel::new(c.clone(), n).unwrap();
            let e = NoiseSequence::generate(kernel.noise_first(), kernel.noise_len(), Distribution::Rademacher, 3, k as u64);
            let y = kernel.chaos_values(&e).unwrap();
            for (i, &v) in y.iter().enumerate() {
                let direct = chaos_value(i as i64 + 1, &c, &e).unwrap();
                assert!((v - direct).abs() < 1e-10 * (1.0 + direct.abs()), "k={k} n={i}");
            }
        }
    }

    #[test]
    fn deterministic_paths() {
        let p = ProcessParams::new(2, 0.75, 1.0).unwrap();
        let c = ChaosCoefficients::build(&p, 64, 1e-8).unwrap();
        let kernel = PathKernel::new(c, 64).unwrap();
        let gen = || NoiseSequence::generate(kernel.noise_first(), kernel.noise_len(), Distribution::Gaussian, 42, 0);
        let a = kernel.path(&gen()).unwrap();
        let b = kernel.path(&gen()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_sample_path().n_points(), 65);
    }
}
