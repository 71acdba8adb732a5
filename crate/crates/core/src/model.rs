//! Process parameters and the continuous-time kernels: the tempered power
//! kernel `x_+^{d-1} e^{-lambda x_+}`, its integrated form `h_t`, and the
//! closed-form Fourier transform of `h_t`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, Estimate, QuadOptions};
use crate::specfun;

/// `|d - 1/2|` below which the logarithmic (`K_0`) branch is taken.
pub const LOG_CASE_BAND: f64 = 1e-12;

/// Chaos order `k`, Hurst index `H > 1/2`, tempering `lambda > 0`, and the
/// derived kernel exponent `d = 1/2 - (1-H)/k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessParams {
    k: u32,
    hurst: f64,
    lambda: f64,
    d: f64,
}

impl ProcessParams {
    pub fn new(k: u32, hurst: f64, lambda: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParams(format!("order k must be >= 1, got {k}")));
        }
        if !(hurst > 0.5) || !hurst.is_finite() {
            return Err(Error::InvalidParams(format!(
                "Hurst index must satisfy H > 1/2, got H = {hurst}"
            )));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParams(format!(
                "tempering must satisfy lambda > 0, got lambda = {lambda}"
            )));
        }
        let d = 0.5 - (1.0 - hurst) / k as f64;
        Ok(ProcessParams { k, hurst, lambda, d })
    }

    /// Builds the parameters from the kernel exponent `d` instead of `H`.
    pub fn from_exponent(k: u32, d: f64, lambda: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParams(format!("order k must be >= 1, got {k}")));
        }
        let kf = k as f64;
        if !(d > 0.5 - 0.5 / kf) {
            return Err(Error::InvalidParams(format!(
                "exponent must satisfy d > 1/2 - 1/(2k) = {}, got d = {d}",
                0.5 - 0.5 / kf
            )));
        }
        let hurst = 1.0 + kf * d - kf / 2.0;
        let mut p = Self::new(k, hurst, lambda)?;
        p.d = d;
        Ok(p)
    }

    /// Same `k` and `H`, different tempering.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        let mut p = Self::new(self.k, self.hurst, lambda)?;
        p.d = self.d;
        Ok(p)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `k!`
    pub fn k_factorial(&self) -> f64 {
        (1..=self.k).map(f64::from).product()
    }

    /// Exponent of the diagonal singularity `w^{k(2d-1)}` of the covariance
    /// kernel.
    pub fn diagonal_exponent(&self) -> f64 {
        self.k as f64 * (2.0 * self.d - 1.0)
    }

    /// `d = 1/2`, equivalently `H = 1`, where the covariance kernel is a power
    /// of `K_0` with a logarithmic singularity.
    pub fn is_log_case(&self) -> bool {
        (self.d - 0.5).abs() < LOG_CASE_BAND
    }
}

/// Values of a process on the uniform grid `t_m = m * horizon / (n_points-1)`,
/// starting from `Z(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub horizon: f64,
    pub values: Vec<f64>,
    pub meta: PathMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMeta {
    pub params: ProcessParams,
    pub seed: u64,
    pub stream: u64,
    pub generator: String,
}

impl SamplePath {
    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.values.len().saturating_sub(1).max(1) as f64;
        (0..self.values.len()).map(move |i| self.horizon * i as f64 / n)
    }
}

/// `x^{d-1} e^{-lambda x}` for `x > 0`, and `0` otherwise.
pub fn tempered_power_kernel(x: f64, params: &ProcessParams) -> f64 {
    if x > 0.0 {
        x.powf(params.d - 1.0) * (-params.lambda * x).exp()
    } else {
        0.0
    }
}

/// `h_t(y) = int_0^t prod_i (s - y_i)_+^{d-1} e^{-lambda (s - y_i)_+} ds`.
///
/// Returns `+inf` on the diagonal set where several `y_i` coincide inside
/// `(0, t)` and their combined exponent is not integrable.
pub fn h_t(y: &[f64], t: f64, params: &ProcessParams, tol: f64) -> Result<Estimate> {
    if y.len() != params.k as usize {
        return Err(Error::InvalidParams(format!(
            "h_t needs {} coordinates, got {}",
            params.k,
            y.len()
        )));
    }
    let top = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gaps: Vec<f64> = y.iter().map(|&yi| top - yi).collect();
    h_t_from_gaps(top, &gaps, t, params, tol)
}

/// [`h_t`] written in terms of the largest coordinate `top` and the gaps
/// `top - y_i >= 0`, so that coordinates a hair apart are resolved exactly.
pub fn h_t_from_gaps(top: f64, gaps: &[f64], t: f64, params: &ProcessParams, tol: f64) -> Result<Estimate> {
    if !(t > 0.0) {
        return Err(Error::domain("h_t", t, "t > 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("h_t", tol, "tol > 0"));
    }
    if gaps.iter().any(|&g| !(g >= 0.0)) {
        return Err(Error::InvalidParams("h_t gaps must be nonnegative".into()));
    }
    // Integrate over x = s - top.
    let lo = (-top).max(0.0);
    let hi = t - top;
    if hi <= lo {
        return Ok(Estimate::default());
    }
    let dm1 = params.d - 1.0;
    let lambda = params.lambda;
    let integrand = |x: f64| -> f64 {
        let mut log_prod = 0.0;
        let mut sum = 0.0;
        for &g in gaps {
            let u = x + g;
            log_prod += u.ln();
            sum += u;
        }
        (dm1 * log_prod - lambda * sum).exp()
    };
    let opts = QuadOptions::new(tol * 0.5).with_rel_tol(1e-13);

    if lo > 0.0 {
        // s = 0 lies strictly above every y_i: smooth integrand.
        let mut breaks = vec![lo];
        breaks.extend(gaps.iter().map(|g| lo + g).filter(|&b| b > lo && b < hi));
        breaks.push(hi);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        return quad::integrate_breaks(integrand, &breaks, &opts);
    }

    let zero_gaps = gaps.iter().filter(|&&g| g == 0.0).count() as f64;
    let beta = zero_gaps * dm1;
    if beta <= -1.0 {
        return Ok(Estimate::new(f64::INFINITY, 0.0));
    }
    // First panel [0, first positive gap) carries the endpoint singularity;
    // the rest is split at the near-singular scales x = g_i.
    let mut marks: Vec<f64> = gaps.iter().copied().filter(|&g| g > 0.0 && g < hi).collect();
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let first = marks.first().copied().unwrap_or(hi);
    let head = quad::integrate_from_singular(integrand, first, beta, &opts)?;
    if first >= hi {
        return Ok(head);
    }
    let mut breaks = marks;
    breaks.push(hi);
    let tail = quad::integrate_breaks(integrand, &breaks, &opts)?;
    Ok(head + tail)
}

/// `C_{H,k} = (Gamma(d) / sqrt(2 pi))^k`.
pub fn c_hk(params: &ProcessParams) -> Result<f64> {
    Ok((specfun::gamma(params.d)? / (2.0 * PI).sqrt()).powi(params.k as i32))
}

/// `(e^{i x} - 1) / (i x)`, continuous at `x = 0`.
fn phase_ratio(x: f64) -> Complex64 {
    if x.abs() < 1e-5 {
        let x2 = x * x;
        Complex64::new(1.0 - x2 / 6.0 + x2 * x2 / 120.0, x / 2.0 - x * x2 / 24.0)
    } else {
        let half = 0.5 * x;
        Complex64::new(x.sin() / x, 2.0 * half.sin() * half.sin() / x)
    }
}

/// Closed-form Fourier transform of `h_t` under the convention
/// `(2 pi)^{-k/2} int e^{i omega . y} h_t(y) dy`:
/// `C_{H,k} (e^{i t sum omega} - 1)/(i sum omega) prod_j (lambda + i omega_j)^{-d}`.
pub fn h_t_fourier(omega: &[f64], t: f64, params: &ProcessParams) -> Result<Complex64> {
    if omega.len() != params.k as usize {
        return Err(Error::InvalidParams(format!(
            "h_t_fourier needs {} frequencies, got {}",
            params.k,
            omega.len()
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain("h_t_fourier", t, "t > 0"));
    }
    let sigma: f64 = omega.iter().sum();
    let mut value = phase_ratio(t * sigma) * t * c_hk(params)?;
    for &w in omega {
        value *= Complex64::new(params.lambda, w).powf(-params.d);
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(ProcessParams::new(0, 0.7, 1.0).is_err());
        assert!(ProcessParams::new(1, 0.5, 1.0).is_err());
        assert!(ProcessParams::new(1, 0.4, 1.0).is_err());
        assert!(ProcessParams::new(1, 0.7, 0.0).is_err());
        assert!(ProcessParams::new(1, 0.7, -1.0).is_err());
        assert!(ProcessParams::new(2, 1.5, 2.0).is_ok());
        let err = ProcessParams::new(2, 0.4, 1.0).unwrap_err().to_string();
        assert!(err.contains("H > 1/2"), "{err}");
    }

    #[test]
    fn exponent_relation() {
        let p = ProcessParams::new(1, 0.7, 1.0).unwrap();
        assert!((p.d() - 0.2).abs() < 1e-15);
        let p = ProcessParams::new(2, 0.75, 1.0).unwrap();
        assert!((p.d() - 0.375).abs() < 1e-15);
        let p = ProcessParams::new(3, 1.0, 1.0).unwrap();
        assert_eq!(p.d(), 0.5);
        assert!(p.is_log_case());
        let q = ProcessParams::from_exponent(2, 0.75, 1.0).unwrap();
        assert!((q.hurst() - 1.5).abs() < 1e-15);
        assert!(ProcessParams::from_exponent(2, 0.25, 1.0).is_err());
    }

    #[test]
    fn h_above_half_iff_d_above_threshold() {
        for k in 1..=5u32 {
            let kf = k as f64;
            for &h in &[0.51, 0.7, 1.0, 1.3, 2.0] {
                let p = ProcessParams::new(k, h, 1.0).unwrap();
                assert!(p.d() > 0.5 - 0.5 / kf);
            }
        }
    }

    #[test]
    fn kernel_values() {
        let p = ProcessParams::from_exponent(1, 1.0, 2.0).unwrap();
        assert_eq!(tempered_power_kernel(-1.0, &p), 0.0);
        assert_eq!(tempered_power_kernel(0.0, &p), 0.0);
        assert!((tempered_power_kernel(1.0, &p) - (-2f64).exp()).abs() < 1e-16);
        let q = ProcessParams::from_exponent(1, 0.75, 1.0).unwrap();
        let direct = 0.25f64.powf(-0.25) * (-0.25f64).exp();
        assert!((tempered_power_kernel(0.25, &q) - direct).abs() < 1e-15);
    }

    #[test]
    fn h_t_vanishes_when_all_y_at_or_above_t() {
        let p = ProcessParams::new(2, 0.75, 1.0).unwrap();
        assert_eq!(h_t(&[1.0, 2.0], 1.0, &p, 1e-12).unwrap().value, 0.0);
        assert_eq!(h_t(&[1.5, 1.2], 1.0, &p, 1e-12).unwrap().value, 0.0);
    }

    #[test]
    fn h_t_exponential_case() {
        let p = ProcessParams::from_exponent(1, 1.0, 1.0).unwrap();
        let v = h_t(&[0.0], 1.0, &p, 1e-13).unwrap().value;
        assert!((v - (1.0 - (-1f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn h_t_single_coordinate_closed_form() {
        // For lambda -> 0 limit not available; use d with y below 0:
        // k = 1, int_0^t (s - y)^{d-1} e^{-lambda (s-y)} ds checked against
        // a fine midpoint sum of the smooth integrand.
        let p = ProcessParams::new(1, 0.7, 1.3).unwrap();
        let y = -0.4;
        let n = 200_000;
        let h = 1.0 / n as f64;
        let mid: f64 = (0..n)
            .map(|i| tempered_power_kernel((i as f64 + 0.5) * h - y, &p) * h)
            .sum();
        let v = h_t(&[y], 1.0, &p, 1e-12).unwrap().value;
        assert!((v - mid).abs() < 1e-9, "{v} vs {mid}");
    }

    #[test]
    fn h_t_diagonal_is_infinite_when_not_integrable() {
        let p = ProcessParams::new(2, 0.75, 1.0).unwrap();
        assert!(h_t(&[0.2, 0.2], 1.0, &p, 1e-10).unwrap().value.is_infinite());
    }

    #[test]
    fn c_hk_values() {
        let p = ProcessParams::new(1, 1.5, 1.0).unwrap();
        assert!((c_hk(&p).unwrap() - 0.398_942_280_401_432_7).abs() < 1e-15);
        let q = ProcessParams::new(2, 0.75, 1.0).unwrap();
        let g = specfun::gamma(0.375).unwrap() / (2.0 * PI).sqrt();
        assert!((c_hk(&q).unwrap() - g * g).abs() < 1e-14);
    }

    #[test]
    fn fourier_at_origin_is_the_limit_value() {
        let p = ProcessParams::from_exponent(1, 0.7, 1.0).unwrap();
        let v = h_t_fourier(&[0.0], 2.0, &p).unwrap();
        let expected = 2.0 * specfun::gamma(0.7).unwrap() / (2.0 * PI).sqrt();
        assert!((v.re - expected).abs() < 1e-14 && v.im.abs() < 1e-16);
    }

    #[test]
    fn fourier_conjugate_symmetry_and_continuity() {
        let p = ProcessParams::new(2, 0.8, 0.7).unwrap();
        let a = h_t_fourier(&[0.3, -1.1], 1.5, &p).unwrap();
        let b = h_t_fourier(&[-0.3, 1.1], 1.5, &p).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
        let c0 = h_t_fourier(&[0.5, -0.5], 1.5, &p).unwrap();
        let c1 = h_t_fourier(&[0.5, -0.5 + 2e-5], 1.5, &p).unwrap();
        assert!((c0 - c1).norm() < 1e-4);
    }
}
