use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProcessParams;

/// Hard cap on the truncation length `M`.
pub const MAX_TRUNCATION: usize = 1 << 24;

/// Coefficients `g[j] = j^{d-1} e^{-lambda_n j}` for `j = 1..=M`, truncated
/// where the discarded squared mass `sum_{j>M} g[j]^2` is certified to be
/// below the requested tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosCoefficients {
    params: ProcessParams,
    lambda_n: f64,
    g: Vec<f64>,
    tail_l2: f64,
}

/// Integral comparison bound on `sum_{j>m} j^beta e^{-c j}`, valid once the
/// summand is decreasing past `m`, i.e. `m > beta / c`.
fn tail_bound(m: usize, beta: f64, c: f64) -> f64 {
    let m = m as f64;
    let slack = c - beta.max(0.0) / m;
    if !(slack > 0.0) {
        return f64::INFINITY;
    }
    (beta * m.ln() - c * m).exp() / slack
}

fn coefficient(j: usize, d: f64, lambda_n: f64) -> f64 {
    let j = j as f64;
    ((d - 1.0) * j.ln() - lambda_n * j).exp()
}

impl ChaosCoefficients {
    /// Coefficients for the `N`-step approximation, tempered by `lambda / N`.
    pub fn build(params: &ProcessParams, n: usize, tail_tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("N must be >= 1".into()));
        }
        Self::with_tempering(params, params.lambda() / n as f64, tail_tol)
    }

    /// Coefficients with per-step tempering `lambda_n` and the smallest
    /// certified truncation length.
    pub fn with_tempering(params: &ProcessParams, lambda_n: f64, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0) {
            return Err(Error::Config(format!("tail tolerance must be > 0, got {tail_tol}")));
        }
        if !(lambda_n > 0.0) || !lambda_n.is_finite() {
            return Err(Error::Config(format!("per-step tempering must be > 0, got {lambda_n}")));
        }
        let beta = 2.0 * (params.d() - 1.0);
        let c = 2.0 * lambda_n;
        let lo = ((beta.max(0.0) / c).floor() as usize).saturating_add(1);
        if lo > MAX_TRUNCATION {
            return Err(Error::TailUnreachable {
                tail_tol,
                cap: MAX_TRUNCATION,
            });
        }
        // The bound is decreasing in m on [lo, inf): bracket, then bisect.
        let mut hi = lo;
        while tail_bound(hi, beta, c) > tail_tol {
            if hi >= MAX_TRUNCATION {
                return Err(Error::TailUnreachable {
                    tail_tol,
                    cap: MAX_TRUNCATION,
                });
            }
            hi = (hi * 2).min(MAX_TRUNCATION);
        }
        let mut lo = lo.max(hi / 2);
        if tail_bound(lo, beta, c) <= tail_tol {
            hi = lo;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if tail_bound(mid, beta, c) <= tail_tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut out = Self::with_length(params, lambda_n, hi)?;
        out.tail_l2 = tail_bound(hi, beta, c);
        Ok(out)
    }

    /// Coefficients with an explicit truncation length. The tail certificate
    /// is infinite when the comparison bound does not apply at `len`.
    pub fn with_length(params: &ProcessParams, lambda_n: f64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_TRUNCATION {
            return Err(Error::Config(format!(
                "truncation length must lie in [1, {MAX_TRUNCATION}], got {len}"
            )));
        }
        if !(lambda_n > 0.0) || !lambda_n.is_finite() {
            return Err(Error::Config(format!("per-step tempering must be > 0, got {lambda_n}")));
        }
        let d = params.d();
        let g = (1..=len).map(|j| coefficient(j, d, lambda_n)).collect();
        Ok(ChaosCoefficients {
            params: *params,
            lambda_n,
            g,
            tail_l2: tail_bound(len, 2.0 * (d - 1.0), 2.0 * lambda_n),
        })
    }

    pub fn params(&self) -> &ProcessParams {
        &self.params
    }

    pub fn lambda_n(&self) -> f64 {
        self.lambda_n
    }

    /// Truncation length `M`.
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// `g[1..=M]` stored from lag 1.
    pub fn values(&self) -> &[f64] {
        &self.g
    }

    /// `g[j]`, zero outside `1..=M`.
    pub fn lag(&self, j: i64) -> f64 {
        if j >= 1 && (j as usize) <= self.g.len() {
            self.g[j as usize - 1]
        } else {
            0.0
        }
    }

    /// Certified bound on the discarded mass `sum_{j>M} g[j]^2`.
    pub fn tail_l2(&self) -> f64 {
        self.tail_l2
    }

    /// `sum_{j<=M} g[j]^2`.
    pub fn l2_mass(&self) -> f64 {
        self.g.iter().map(|x| x * x).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_tail(c: &ChaosCoefficients, extra: usize) -> f64 {
        let d = c.params().d();
        (c.len() + 1..=c.len() + extra)
            .map(|j| coefficient(j, d, c.lambda_n()).powi(2))
            .sum()
    }

    #[test]
    fn strong_tempering_gives_short_window() {
        let p = ProcessParams::new(1, 0.7, 10.0).unwrap();
        let c = ChaosCoefficients::build(&p, 1, 1e-12).unwrap();
        assert!(c.len() < 5, "M = {}", c.len());
        assert!(direct_tail(&c, 10 * c.len()) <= c.tail_l2());
        assert!(c.tail_l2() <= 1e-12);
    }

    #[test]
    fn d_one_first_coefficient() {
        let p = ProcessParams::from_exponent(1, 1.0, 1.0).unwrap();
        let c = ChaosCoefficients::build(&p, 4, 1e-10).unwrap();
        assert!((c.values()[0] - (-0.25f64).exp()).abs() < 1e-16);
        assert_eq!(c.lag(0), 0.0);
        assert_eq!(c.lag(-3), 0.0);
        assert_eq!(c.lag(c.len() as i64 + 1), 0.0);
    }

    #[test]
    fn certificate_is_minimal_and_holds() {
        let p = ProcessParams::from_exponent(1, 0.7, 1.0).unwrap();
        let c = ChaosCoefficients::with_tempering(&p, 0.01, 1e-10).unwrap();
        let m = c.len();
        let beta = 2.0 * (0.7 - 1.0);
        assert!(tail_bound(m, beta, 0.02) <= 1e-10);
        assert!(tail_bound(m - 1, beta, 0.02) > 1e-10);
        assert!(direct_tail(&c, 10 * m) <= c.tail_l2());
        assert!(c.values().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn growing_coefficients_respect_decrease_region() {
        // d = 1.6 makes g increase up to j = (d-1)/lambda_n before decaying.
        let p = ProcessParams::from_exponent(1, 1.6, 1.0).unwrap();
        let c = ChaosCoefficients::with_tempering(&p, 0.05, 1e-8).unwrap();
        assert!(c.len() as f64 > 2.0 * 0.6 / 0.1);
        assert!(direct_tail(&c, 10 * c.len()) <= c.tail_l2());
    }

    #[test]
    fn unreachable_tail_is_reported() {
        let p = ProcessParams::from_exponent(1, 3.0, 1.0).unwrap();
        let r = ChaosCoefficients::with_tempering(&p, 1e-9, 1e-10);
        assert!(matches!(r, Err(Error::TailUnreachable { .. })));
    }
}
