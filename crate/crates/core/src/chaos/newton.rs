/// `e_k` from the power sums `p[1..=k]` (`p[0]` is ignored) through
/// `r e_r = sum_{q=1}^{r} (-1)^{q-1} e_{r-q} p_q`.
pub fn elementary_from_power_sums(p: &[f64], k: usize) -> f64 {
    debug_assert!(p.len() > k);
    let mut e = [0.0f64; 16];
    let mut heap;
    let e: &mut [f64] = if k < e.len() {
        &mut e[..=k]
    } else {
        heap = vec![0.0; k + 1];
        &mut heap
    };
    e[0] = 1.0;
    for r in 1..=k {
        let mut acc = 0.0;
        for q in 1..=r {
            let term = e[r - q] * p[q];
            if q % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e[r] = acc / r as f64;
    }
    e[k]
}

/// Sum over ordered tuples of distinct indices, `k! e_k`.
pub fn off_diagonal_from_power_sums(p: &[f64], k: usize) -> f64 {
    let kf: f64 = (1..=k).map(|i| i as f64).product();
    kf * elementary_from_power_sums(p, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_sums(a: &[f64], k: usize) -> Vec<f64> {
        (0..=k).map(|r| a.iter().map(|x| x.powi(r as i32)).sum()).collect()
    }

    #[test]
    fn small_cases_by_hand() {
        let a = [1.5, -2.0, 0.25];
        let p = power_sums(&a, 3);
        assert!((elementary_from_power_sums(&p, 1) - (-0.25)).abs() < 1e-15);
        let e2 = 1.5 * -2.0 + 1.5 * 0.25 + -2.0 * 0.25;
        assert!((elementary_from_power_sums(&p, 2) - e2).abs() < 1e-14);
        assert!((off_diagonal_from_power_sums(&p, 2) - (p[1] * p[1] - p[2])).abs() < 1e-14);
        assert!((elementary_from_power_sums(&p, 3) - 1.5 * -2.0 * 0.25).abs() < 1e-14);
    }

    #[test]
    fn order_above_length_vanishes() {
        let a = [0.3, 0.7];
        let p = power_sums(&a, 4);
        assert!(elementary_from_power_sums(&p, 3).abs() < 1e-15);
        assert!(elementary_from_power_sums(&p, 4).abs() < 1e-15);
    }

    #[test]
    fn large_order_uses_heap_buffer() {
        let a: Vec<f64> = (0..20).map(|i| 1.0 + 0.01 * i as f64).collect();
        let p = power_sums(&a, 18);
        let mut e = [0.0; 19];
        e[0] = 1.0;
        for &x in &a {
            for r in (1..=18).rev() {
                e[r] += x * e[r - 1];
            }
        }
        let got = elementary_from_power_sums(&p, 18);
        assert!(((got - e[18]) / e[18]).abs() < 1e-8, "{got} vs {}", e[18]);
    }
}
