use super::quadrature::tanh_sinh;
use crate::covariance::{covariance_prefactor, diagonal_kernel};
use crate::error::{Error, Result};
use crate::model::ProcessParams;
use crate::quad::Estimate;

const LEVELS: usize = 12;

/// `R(t, s)` as the iterated integral `int_0^t du int_0^s f(|u-v|) dv`, both
/// levels by tanh-sinh. The inner integral is split at `v = u` so that the
/// diagonal singularity `|u-v|^{k(2d-1)}` sits at an endpoint.
pub fn covariance_2d_oracle(t: f64, s: f64, params: &ProcessParams, tol: f64) -> Result<Estimate> {
    if !(t >= 0.0) || !(s >= 0.0) {
        return Err(Error::domain("covariance_2d_oracle", t.min(s), "t, s >= 0"));
    }
    if t == 0.0 || s == 0.0 {
        return Ok(Estimate::default());
    }
    let pref = covariance_prefactor(params)?;
    let inner_tol = 0.05 * tol / (pref * t * (t + s));
    let outer_tol = 0.25 * tol / pref;
    let failed = std::cell::Cell::new(None);
    // int_0^len f(w) dw
    let cumulative = |len: f64| -> f64 {
        match tanh_sinh(
            |dl, _| diagonal_kernel(dl, params).unwrap_or(f64::NAN),
            len,
            inner_tol,
            LEVELS,
        ) {
            Ok(e) => e.value,
            Err(e) => {
                failed.set(Some(e));
                f64::NAN
            }
        }
    };
    // u in [0, min(t, s)]: both halves of the inner split touch w = 0.
    let m = t.min(s);
    let head = tanh_sinh(
        |dl, dr| {
            let to_s = if t >= s { dr } else { s - dl };
            cumulative(dl) + cumulative(to_s)
        },
        m,
        outer_tol,
        LEVELS,
    );
    let head = match (head, failed.take()) {
        (_, Some(e)) | (Err(e), _) => return Err(e),
        (Ok(h), None) => h,
    };
    // u in [s, t]: v runs over [0, s] below u, i.e. w in [u - s, u].
    let tail = if t > s {
        let r = tanh_sinh(|dl, _| cumulative(s + dl) - cumulative(dl), t - s, outer_tol, LEVELS);
        match (r, failed.take()) {
            (_, Some(e)) | (Err(e), _) => return Err(e),
            (Ok(x), None) => x,
        }
    } else {
        Estimate::default()
    };
    Ok((head + tail).scale(pref))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_case_closed_form() {
        // k = 1, d = 1: R(t,t) = (1/lambda)(t/lambda - (1 - e^{-lambda t})/lambda^2)
        let p = ProcessParams::from_exponent(1, 1.0, 1.0).unwrap();
        let t: f64 = 0.8;
        let exact = t - (1.0 - (-t).exp());
        let r = covariance_2d_oracle(t, t, &p, 1e-10).unwrap();
        assert!((r.value - exact).abs() < 1e-9, "{} vs {exact}", r.value);
    }

    #[test]
    fn zero_and_symmetry() {
        let p = ProcessParams::new(2, 0.8, 1.0).unwrap();
        assert_eq!(covariance_2d_oracle(1.0, 0.0, &p, 1e-8).unwrap().value, 0.0);
        let a = covariance_2d_oracle(0.9, 0.4, &p, 1e-9).unwrap().value;
        let b = covariance_2d_oracle(0.4, 0.9, &p, 1e-9).unwrap().value;
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}
