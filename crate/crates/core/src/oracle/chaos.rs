use crate::chaos::{ChaosCoefficients, NoiseSequence};
use crate::error::{Error, Result};

/// Enumeration budget for [`brute_force_chaos`].
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// `sum over ordered k-tuples of distinct lags (j_1..j_k) of
/// prod g[j_i] eps_{n - j_i}`, by literal enumeration.
pub fn brute_force_chaos(n: i64, coeffs: &ChaosCoefficients, noise: &NoiseSequence) -> Result<f64> {
    let k = coeffs.params().k() as usize;
    let m = coeffs.len();
    let size = (m as u128).saturating_pow(k as u32);
    if size > ENUMERATION_LIMIT {
        return Err(Error::SizeGuard {
            size,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut a = Vec::with_capacity(m);
    for j in 1..=m as i64 {
        let e = noise.get(n - j).ok_or(Error::InsufficientNoise {
            need_lo: n - m as i64,
            need_hi: n - 1,
            have_lo: noise.first(),
            have_hi: noise.end() - 1,
        })?;
        a.push(coeffs.lag(j) * e);
    }
    let mut used = vec![false; m];
    Ok(enumerate(&a, &mut used, k, 1.0))
}

fn enumerate(a: &[f64], used: &mut [bool], depth: usize, prod: f64) -> f64 {
    if depth == 0 {
        return prod;
    }
    let mut s = 0.0;
    for j in 0..a.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        s += enumerate(a, used, depth - 1, prod * a[j]);
        used[j] = false;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProcessParams;

    #[test]
    fn order_one_dot_product() {
        let p = ProcessParams::new(1, 0.7, 1.0).unwrap();
        let c = ChaosCoefficients::with_length(&p, 0.5, 4).unwrap();
        let e = NoiseSequence::from_values(0, vec![1.0, -2.0, 0.5, 3.0]);
        let dot: f64 = (1..=4).map(|j| c.lag(j) * e.get(4 - j).unwrap()).sum();
        assert!((brute_force_chaos(4, &c, &e).unwrap() - dot).abs() < 1e-15);
    }

    #[test]
    fn order_two_by_hand() {
        let p = ProcessParams::new(2, 0.8, 1.0).unwrap();
        let c = ChaosCoefficients::with_length(&p, 0.5, 2).unwrap();
        let e = NoiseSequence::from_values(0, vec![0.7, -1.1]);
        let hand = 2.0 * c.lag(1) * c.lag(2) * 0.7 * -1.1;
        assert!((brute_force_chaos(2, &c, &e).unwrap() - hand).abs() < 1e-15);
    }

    #[test]
    fn size_guard() {
        let p = ProcessParams::new(3, 0.8, 1.0).unwrap();
        let c = ChaosCoefficients::with_length(&p, 0.5, 101).unwrap();
        let e = NoiseSequence::from_values(-200, vec![0.0; 400]);
        assert!(matches!(brute_force_chaos(0, &c, &e), Err(Error::SizeGuard { .. })));
    }
}
