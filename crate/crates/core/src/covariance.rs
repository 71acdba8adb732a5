//! Second-order structure of the tempered Hermite process.
//!
//! The covariance is
//! `R(t,s) = k! C^k int_0^t int_0^s f(|u-v|) dv du` with
//! `C = Gamma(d) / (sqrt(pi) (2 lambda)^{d-1/2})` and the diagonal kernel
//! `f(w) = [w^{d-1/2} K_{1/2-d}(lambda w)]^k`. Since the integrand depends on
//! `|u-v|` only, the double integral is reduced to one dimension by
//! integrating `f` against the length of the level set `{|u-v| = w}` inside
//! `[0,t] x [0,s]`.

use std::cell::Cell;
use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProcessParams;
use crate::quad::{self, Estimate, QuadOptions};
use crate::specfun;

/// Default absolute tolerance for covariance quadratures.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative accuracy requested from the inner quadratures regardless of the
/// absolute tolerance.
const REL_TOL: f64 = 1e-13;

/// `[w^{d-1/2} K_{1/2-d}(lambda w)]^k` for `w > 0`.
pub fn diagonal_kernel(w: f64, params: &ProcessParams) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::domain("diagonal_kernel", w, "w > 0"));
    }
    let d = params.d();
    let base = w.powf(d - 0.5) * specfun::bessel_k(0.5 - d, params.lambda() * w)?;
    Ok(base.powi(params.k() as i32))
}

fn kernel_or_nan(w: f64, params: &ProcessParams) -> f64 {
    diagonal_kernel(w, params).unwrap_or(f64::NAN)
}

/// `k! [Gamma(d) / (sqrt(pi) (2 lambda)^{d-1/2})]^k`.
pub fn covariance_prefactor(params: &ProcessParams) -> Result<f64> {
    let d = params.d();
    let c = specfun::gamma(d)? / (PI.sqrt() * (2.0 * params.lambda()).powf(d - 0.5));
    Ok(params.k_factorial() * c.powi(params.k() as i32))
}

/// Length of `{(u, v) in [0,t] x [0,s] : |u - v| = w}` per unit `w`.
fn coarea_weight(w: f64, t: f64, s: f64) -> f64 {
    (t - w).min(s).max(0.0) + t.min(s - w).max(0.0)
}

fn check_times(t: f64, s: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("covariance", t, "t >= 0"));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::domain("covariance", s, "s >= 0"));
    }
    Ok(())
}

/// `R(t, s)` with absolute error at most `tol`.
pub fn covariance_r(t: f64, s: f64, params: &ProcessParams, tol: f64) -> Result<Estimate> {
    check_times(t, s)?;
    if t == 0.0 || s == 0.0 {
        return Ok(Estimate::default());
    }
    let pref = covariance_prefactor(params)?;
    let opts = QuadOptions::new(0.25 * tol / pref).with_rel_tol(REL_TOL);
    let integrand = |w: f64| kernel_or_nan(w, params) * coarea_weight(w, t, s);

    let mut breaks = vec![0.0, (t - s).abs(), t.min(s), t.max(s)];
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.retain(|&b| b > 0.0);
    let head = quad::integrate_from_singular(integrand, breaks[0], params.diagonal_exponent(), &opts)?;
    let tail = if breaks.len() > 1 {
        quad::integrate_breaks(integrand, &breaks, &opts)?
    } else {
        Estimate::default()
    };
    let total = (head + tail).scale(pref);
    if !total.value.is_finite() {
        return Err(Error::NoConvergence {
            subdivisions: 0,
            estimate: total.value,
            abs_err: total.abs_err,
            target: tol,
        });
    }
    Ok(total)
}

/// `E[Z(t)^2]` along the variance chain: the inner integral runs in the
/// rescaled variable `z = lambda u` and the outer one over `s in [0, t]`,
/// `2 k! [Gamma(d) / (sqrt(pi) 2^{d-1/2} lambda^{2d-1})]^k / lambda
///  * int_0^t ds int_0^{lambda (t-s)} [z^{d-1/2} K_{1/2-d}(z)]^k dz`.
pub fn variance_formula(t: f64, params: &ProcessParams, tol: f64) -> Result<Estimate> {
    check_times(t, t)?;
    if t == 0.0 {
        return Ok(Estimate::default());
    }
    let d = params.d();
    let lambda = params.lambda();
    let k = params.k() as i32;
    let c = specfun::gamma(d)? / (PI.sqrt() * 2f64.powf(d - 0.5) * lambda.powf(2.0 * d - 1.0));
    let pref = 2.0 * params.k_factorial() * c.powi(k) / lambda;

    let unit = params.with_lambda(1.0)?;
    let beta = params.diagonal_exponent();
    let outer_tol = 0.25 * tol / pref;
    let inner_opts = QuadOptions::new(0.25 * outer_tol / t).with_rel_tol(REL_TOL);
    let inner_err = Cell::new(0.0f64);
    let failed = Cell::new(false);
    let inner = |x: f64| -> f64 {
        match quad::integrate_from_singular(|z| kernel_or_nan(z, &unit), x, beta, &inner_opts) {
            Ok(e) => {
                inner_err.set(inner_err.get().max(e.abs_err));
                e.value
            }
            Err(_) => {
                failed.set(true);
                f64::NAN
            }
        }
    };
    // sigma = t - s; the inner integral behaves like sigma^{beta+1} at 0.
    let outer = quad::integrate_from_singular(
        |sigma| inner(lambda * sigma),
        t,
        beta + 1.0,
        &QuadOptions::new(outer_tol).with_rel_tol(REL_TOL),
    )?;
    if failed.get() {
        return Err(Error::NoConvergence {
            subdivisions: 0,
            estimate: outer.value,
            abs_err: outer.abs_err,
            target: tol,
        });
    }
    Ok(Estimate::new(outer.value, outer.abs_err + t * inner_err.get()).scale(pref))
}

/// `E|Z(t) - Z(s)|^2` computed as `R(t,t) + R(s,s) - 2 R(t,s)`, together
/// with the stationary-increment route `R(|t-s|, |t-s|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementVariance {
    pub value: f64,
    pub abs_err: f64,
    pub stationary: Estimate,
}

pub fn increment_variance(t: f64, s: f64, params: &ProcessParams, tol: f64) -> Result<IncrementVariance> {
    check_times(t, s)?;
    let stationary = covariance_r((t - s).abs(), (t - s).abs(), params, tol)?;
    if t == s {
        return Ok(IncrementVariance {
            value: 0.0,
            abs_err: 0.0,
            stationary,
        });
    }
    let rtt = covariance_r(t, t, params, tol)?;
    let rss = covariance_r(s, s, params, tol)?;
    let rts = covariance_r(t, s, params, tol)?;
    Ok(IncrementVariance {
        value: rtt.value + rss.value - 2.0 * rts.value,
        abs_err: rtt.abs_err + rss.abs_err + 2.0 * rts.abs_err,
        stationary,
    })
}

/// Closed-form upper bound on `E[Z(t)^2]`, equivalently on
/// `E|Z(t+h) - Z(h)|^2` at lag `t`.
///
/// For `1/2 - 1/(2k) < d < 1/2`:
/// `2 k! [Gamma(d) Gamma(1/2-d) / (sqrt(pi) 2^{2d})]^k t^{2H} / ((a+1)(a+2))`,
/// `a = k(2d-1)`. For `d > 1/2`:
/// `k! [Gamma(d) Gamma(d-1/2) / (2 sqrt(pi) lambda^{2d-1})]^k t^2`.
/// Both follow from `K_nu(z) < z^{-nu} 2^{nu-1} Gamma(nu)`; `d = 1/2` has no
/// closed bound here.
pub fn variance_upper_bound(t: f64, params: &ProcessParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain("variance_upper_bound", t, "t >= 0"));
    }
    if params.is_log_case() {
        return Err(Error::Unsupported(
            "variance_upper_bound has no closed form at d = 1/2 (H = 1)".into(),
        ));
    }
    let d = params.d();
    let k = params.k() as i32;
    let kf = params.k_factorial();
    let sqrt_pi = PI.sqrt();
    if d < 0.5 {
        let a = params.diagonal_exponent();
        let c = specfun::gamma(d)? * specfun::gamma(0.5 - d)? / (sqrt_pi * 2f64.powf(2.0 * d));
        Ok(2.0 * kf * c.powi(k) * t.powf(a + 2.0) / ((a + 1.0) * (a + 2.0)))
    } else {
        let c = specfun::gamma(d)? * specfun::gamma(d - 0.5)?
            / (2.0 * sqrt_pi * params.lambda().powf(2.0 * d - 1.0));
        Ok(kf * c.powi(k) * t * t)
    }
}

/// `|R_{H,lambda}(ct, cs) - c^{2H} R_{H,c lambda}(t, s)|`.
pub fn scaling_residual(c: f64, t: f64, s: f64, params: &ProcessParams, tol: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::domain("scaling_residual", c, "c > 0"));
    }
    let lhs = covariance_r(c * t, c * s, params, tol)?;
    let scaled = params.with_lambda(c * params.lambda())?;
    let rhs = covariance_r(t, s, &scaled, tol)?;
    Ok((lhs.value - c.powf(2.0 * params.hurst()) * rhs.value).abs())
}

/// `R(t_i, t_j)` on a grid with per-entry error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceTable {
    pub params: ProcessParams,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub errors: Vec<Vec<f64>>,
    pub tol: f64,
    /// Cells whose quadrature did not converge; their entries are NaN.
    pub failures: Vec<CellFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub t: f64,
    pub s: f64,
    pub reason: String,
}

impl CovarianceTable {
    /// Evaluates the upper triangle in parallel and mirrors it, so the table
    /// is exactly symmetric. Validation errors abort; quadrature failures are
    /// recorded per cell.
    pub fn build(params: &ProcessParams, times: &[f64], tol: f64) -> Result<Self> {
        let n = times.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let cells: Vec<Result<Estimate>> = pairs
            .par_iter()
            .map(|&(i, j)| covariance_r(times[i], times[j], params, tol))
            .collect();
        let mut values = vec![vec![0.0; n]; n];
        let mut errors = vec![vec![0.0; n]; n];
        let mut failures = Vec::new();
        for (&(i, j), cell) in pairs.iter().zip(cells) {
            let e = match cell {
                Ok(e) => e,
                Err(err) if err.is_validation() => return Err(err),
                Err(err) => {
                    failures.push(CellFailure {
                        t: times[i],
                        s: times[j],
                        reason: err.to_string(),
                    });
                    Estimate::new(f64::NAN, f64::NAN)
                }
            };
            values[i][j] = e.value;
            values[j][i] = e.value;
            errors[i][j] = e.abs_err;
            errors[j][i] = e.abs_err;
        }
        Ok(CovarianceTable {
            params: *params,
            times: times.to_vec(),
            values,
            errors,
            tol,
            failures,
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.times.len();
        if n == 0 {
            return 0.0;
        }
        let m = DMatrix::from_fn(n, n, |i, j| self.values[i][j]);
        SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.times.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.values[i][j] - self.values[j][i]).abs());
            }
        }
        worst
    }

    /// Long-format CSV with a `# key=value` header block and the column row
    /// `t,s,R,err`.
    pub fn write_csv<W: Write>(&self, mut out: W, extra_header: &[(String, String)]) -> std::io::Result<()> {
        writeln!(out, "# k={}", self.params.k())?;
        writeln!(out, "# hurst={}", self.params.hurst())?;
        writeln!(out, "# lambda={}", self.params.lambda())?;
        writeln!(out, "# d={}", self.params.d())?;
        writeln!(out, "# tol={:e}", self.tol)?;
        writeln!(out, "# failed_cells={}", self.failures.len())?;
        for (k, v) in extra_header {
            writeln!(out, "# {k}={v}")?;
        }
        writeln!(out, "t,s,R,err")?;
        for (i, &t) in self.times.iter().enumerate() {
            for (j, &s) in self.times.iter().enumerate() {
                writeln!(out, "{t},{s},{:e},{:e}", self.values[i][j], self.errors[i][j])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_kernel() {
        // d = 1 gives K_{-1/2}(2) and the closed form sqrt(pi/4) e^{-2}.
        let p = ProcessParams::from_exponent(1, 1.0, 1.0).unwrap();
        let expected = 2f64.sqrt() * (PI / 4.0).sqrt() * (-2f64).exp();
        assert!((diagonal_kernel(2.0, &p).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.169_617_623_758).abs() < 1e-10);
        assert!(diagonal_kernel(0.0, &p).is_err());
    }

    #[test]
    fn kernel_matches_rescaled_variable() {
        let p = ProcessParams::new(2, 0.8, 2.5).unwrap();
        let unit = p.with_lambda(1.0).unwrap();
        let w: f64 = 0.37;
        let lambda = p.lambda();
        let d = p.d();
        let via_z = diagonal_kernel(lambda * w, &unit).unwrap() * lambda.powf(-2.0 * (d - 0.5));
        assert!((diagonal_kernel(w, &p).unwrap() - via_z).abs() < 1e-14 * via_z);
    }

    #[test]
    fn coarea_weight_integrates_to_area() {
        for &(t, s) in &[(1.0_f64, 0.5_f64), (0.3, 0.9), (0.7, 0.7)] {
            let mut breaks = [0.0, (t - s).abs(), t.min(s), t.max(s)];
            breaks.sort_by(f64::total_cmp);
            let r = quad::integrate_breaks(
                |w| coarea_weight(w, t, s),
                &breaks,
                &QuadOptions::new(1e-14),
            )
            .unwrap();
            assert!((r.value - t * s).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_times_and_symmetry() {
        let p = ProcessParams::new(2, 0.8, 1.0).unwrap();
        assert_eq!(covariance_r(1.0, 0.0, &p, 1e-8).unwrap().value, 0.0);
        assert_eq!(covariance_r(0.0, 0.3, &p, 1e-8).unwrap().value, 0.0);
        let a = covariance_r(0.9, 0.4, &p, 1e-10).unwrap().value;
        let b = covariance_r(0.4, 0.9, &p, 1e-10).unwrap().value;
        assert!((a - b).abs() < 1e-12);
        assert!(covariance_r(-1.0, 0.3, &p, 1e-8).is_err());
    }

    #[test]
    fn exponential_kernel_closed_form() {
        // k = 1, d = 1: f(w) = sqrt(pi/(2 lambda)) e^{-lambda w}, C = 1/sqrt(2 pi lambda)... so
        // R(t,t) = (1/(2 lambda)) * 2 int_0^t (t - w) e^{-lambda w} dw.
        let lambda = 1.7;
        let p = ProcessParams::from_exponent(1, 1.0, lambda).unwrap();
        let t: f64 = 0.8;
        let exact = (1.0 / lambda) * (t / lambda - (1.0 - (-lambda * t).exp()) / (lambda * lambda));
        let r = covariance_r(t, t, &p, 1e-12).unwrap().value;
        assert!((r - exact).abs() < 1e-12, "{r} vs {exact}");
    }

    #[test]
    fn variance_formula_zero_and_agreement() {
        let p = ProcessParams::new(1, 0.7, 1.0).unwrap();
        assert_eq!(variance_formula(0.0, &p, 1e-8).unwrap().value, 0.0);
        let v = variance_formula(1.0, &p, 1e-10).unwrap().value;
        let r = covariance_r(1.0, 1.0, &p, 1e-10).unwrap().value;
        assert!((v - r).abs() < 2e-10, "{v} vs {r}");
    }

    #[test]
    fn increment_variance_at_equal_times_is_zero() {
        let p = ProcessParams::new(1, 0.7, 1.0).unwrap();
        let iv = increment_variance(0.5, 0.5, &p, 1e-8).unwrap();
        assert_eq!(iv.value, 0.0);
    }

    #[test]
    fn bound_rejects_log_case() {
        let p = ProcessParams::new(2, 1.0, 1.0).unwrap();
        assert!(matches!(variance_upper_bound(1.0, &p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bound_is_monotone_in_t() {
        for &(k, h, lam) in &[(1, 0.7, 1.0), (2, 1.5, 2.0), (3, 0.8, 0.5)] {
            let p = ProcessParams::new(k, h, lam).unwrap();
            let mut prev = 0.0;
            for i in 1..=10 {
                let b = variance_upper_bound(i as f64 * 0.1, &p).unwrap();
                assert!(b > prev);
                prev = b;
            }
        }
    }

    #[test]
    fn scaling_at_identity_is_zero() {
        let p = ProcessParams::new(2, 0.9, 1.0).unwrap();
        assert!(scaling_residual(1.0, 0.7, 0.2, &p, 1e-8).unwrap() < 1e-15);
    }

    #[test]
    fn table_is_symmetric_with_zero_row() {
        let p = ProcessParams::new(1, 0.7, 1.0).unwrap();
        let table = CovarianceTable::build(&p, &[0.0, 0.5, 1.0], 1e-8).unwrap();
        assert_eq!(table.max_asymmetry(), 0.0);
        assert!(table.values[0].iter().all(|&v| v == 0.0));
        let mut buf = Vec::new();
        table.write_csv(&mut buf, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().any(|l| l == "t,s,R,err"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 9);
    }
}
