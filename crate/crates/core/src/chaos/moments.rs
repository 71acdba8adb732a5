use rayon::prelude::*;

use super::coefficients::ChaosCoefficients;
use super::newton::elementary_from_power_sums;
use crate::error::{Error, Result};
use crate::model::ProcessParams;

/// `floor(N t)` for a grid time `t`, rejecting times off the `1/N` grid.
pub fn grid_index(t: f64, n: usize) -> Result<usize> {
    let x = t * n as f64;
    let r = x.round();
    if !(t >= 0.0) || !t.is_finite() || (x - r).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::GridAlignment { time: t, n });
    }
    Ok(r as usize)
}

/// `rho[r][delta] = sum_j g[j]^r g[j+delta]^r` for `r = 1..=k` (row 0 is
/// unused) and `delta = 0..M`.
pub fn pairing_sums(coeffs: &ChaosCoefficients) -> Vec<Vec<f64>> {
    let k = coeffs.params().k() as usize;
    let m = coeffs.len();
    let powers: Vec<Vec<f64>> = (0..=k)
        .map(|r| coeffs.values().iter().map(|g| g.powi(r as i32)).collect())
        .collect();
    let mut rho = vec![Vec::new(); k + 1];
    for r in 1..=k {
        let gr = &powers[r];
        rho[r] = (0..m)
            .into_par_iter()
            .map(|delta| gr[..m - delta].iter().zip(&gr[delta..]).map(|(a, b)| a * b).sum())
            .collect();
    }
    rho
}

/// `E[v(t) v(s)]` for the rescaled path, exactly, from the pairing identity
/// `E[Y(n) Y(m)] = (k!)^2 e_k(c)` with `c_i = g[n-i] g[m-i]`.
pub fn exact_rescaled_covariance(
    params: &ProcessParams,
    n: usize,
    tail_tol: f64,
    ts: &[f64],
    ss: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let a_idx = ts.iter().map(|&t| grid_index(t, n)).collect::<Result<Vec<_>>>()?;
    let b_idx = ss.iter().map(|&s| grid_index(s, n)).collect::<Result<Vec<_>>>()?;
    let coeffs = ChaosCoefficients::build(params, n, tail_tol)?;
    let rho = pairing_sums(&coeffs);
    let k = params.k() as usize;
    let kf = params.k_factorial();
    let m = coeffs.len();
    let lag_term: Vec<f64> = (0..m)
        .map(|delta| {
            let p: Vec<f64> = (0..=k).map(|r| if r == 0 { 0.0 } else { rho[r][delta] }).collect();
            kf * kf * elementary_from_power_sums(&p, k)
        })
        .collect();
    let norm = (n as f64).powf(-2.0 * params.hurst());
    Ok(a_idx
        .iter()
        .map(|&a| b_idx.iter().map(|&b| norm * offset_sum(&lag_term, a, b)).collect())
        .collect())
}

/// `sum_{n=1}^{a} sum_{m=1}^{b} w(|n - m|)`, grouping by `delta = n - m`.
fn offset_sum(w: &[f64], a: usize, b: usize) -> f64 {
    if a == 0 || b == 0 {
        return 0.0;
    }
    let (a, b) = (a as i64, b as i64);
    let m = w.len() as i64;
    let lo = (-(b - 1)).max(-(m - 1));
    let hi = (a - 1).min(m - 1);
    (lo..=hi)
        .map(|delta| {
            let count = (a.min(b + delta) - delta.max(0)) as f64;
            count * w[delta.unsigned_abs() as usize]
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_alignment() {
        assert_eq!(grid_index(0.5, 16).unwrap(), 8);
        assert_eq!(grid_index(0.0, 16).unwrap(), 0);
        assert!(matches!(grid_index(0.3, 16), Err(Error::GridAlignment { .. })));
        assert!(grid_index(-0.5, 16).is_err());
    }

    #[test]
    fn zero_time_gives_zero() {
        let p = ProcessParams::new(2, 0.8, 1.0).unwrap();
        let e = exact_rescaled_covariance(&p, 16, 1e-8, &[0.0, 1.0], &[0.5, 0.0]).unwrap();
        assert_eq!(e[0][0], 0.0);
        assert_eq!(e[1][1], 0.0);
        assert!(e[1][0] > 0.0);
    }

    #[test]
    fn order_one_matches_triple_loop() {
        let p = ProcessParams::new(1, 0.7, 1.0).unwrap();
        let n = 32;
        let tail = 1e-6;
        let c = ChaosCoefficients::build(&p, n, tail).unwrap();
        let m = c.len() as i64;
        let (a, b) = (32i64, 16i64);
        let mut direct = 0.0;
        for i in 1..=a {
            for j in 1..=b {
                for l in (i.min(j) - m)..i.min(j) {
                    direct += c.lag(i - l) * c.lag(j - l);
                }
            }
        }
        direct *= (n as f64).powf(-1.4);
        let e = exact_rescaled_covariance(&p, n, tail, &[1.0], &[0.5]).unwrap()[0][0];
        assert!((e - direct).abs() < 1e-12 * direct, "{e} vs {direct}");
    }

    #[test]
    fn offset_counts_cover_rectangle() {
        let w = vec![1.0; 50];
        assert_eq!(offset_sum(&w, 7, 4), 28.0);
        assert_eq!(offset_sum(&w, 3, 9), 27.0);
        // Short window: only |delta| < 2 contributes.
        assert_eq!(offset_sum(&[1.0, 1.0], 3, 3), 7.0);
    }
}
