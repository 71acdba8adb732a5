use proptest::prelude::*;

use tempered_hermite::chaos::{
    chaos_value, elementary_from_power_sums, simulate_paths, ChaosCoefficients, Distribution, NoiseSequence,
};
use tempered_hermite::covariance::{covariance_r, scaling_residual, CovarianceTable};
use tempered_hermite::model::ProcessParams;
use tempered_hermite::oracle::brute_force_chaos;

fn params() -> impl Strategy<Value = ProcessParams> {
    (1u32..=3, 0.55f64..1.8, 0.2f64..2.0).prop_map(|(k, h, l)| ProcessParams::new(k, h, l).unwrap())
}

// e_k by the subset recursion e_j <- e_j + x e_{j-1}.
fn elementary_direct(xs: &[f64], k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &x in xs {
        for j in (1..=k).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e[k]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn covariance_is_symmetric(p in params(), t in 0.05f64..2.0, s in 0.05f64..2.0) {
        let a = covariance_r(t, s, &p, 1e-10).unwrap().value;
        let b = covariance_r(s, t, &p, 1e-10).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn covariance_cauchy_schwarz(p in params(), t in 0.05f64..2.0, s in 0.05f64..2.0) {
        let r = covariance_r(t, s, &p, 1e-10).unwrap().value;
        let vt = covariance_r(t, t, &p, 1e-10).unwrap().value;
        let vs = covariance_r(s, s, &p, 1e-10).unwrap().value;
        prop_assert!(r * r <= vt * vs * (1.0 + 1e-9));
    }

    #[test]
    fn scaling_holds(p in params(), c in 0.2f64..5.0, t in 0.1f64..1.5, s in 0.1f64..1.5) {
        prop_assert!(scaling_residual(c, t, s, &p, 1e-10).unwrap() < 1e-8);
    }

    #[test]
    fn newton_matches_subset_recursion(xs in prop::collection::vec(-2.0f64..2.0, 0..12), k in 1usize..=5) {
        let mut p = vec![0.0; k + 1];
        for &x in &xs {
            let mut xr = 1.0;
            for pr in p.iter_mut().skip(1) {
                xr *= x;
                *pr += xr;
            }
        }
        let a = elementary_from_power_sums(&p, k);
        let b = elementary_direct(&xs, k);
        let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0).powi(k as i32);
        prop_assert!((a - b).abs() <= 1e-12 * scale);
    }

    #[test]
    fn chaos_matches_enumeration(
        k in 1u32..=3,
        m in 1usize..=9,
        eps in prop::collection::vec(-3.0f64..3.0, 24),
        lambda_n in 0.0f64..0.5,
    ) {
        let p = ProcessParams::new(k, 0.9, 1.0).unwrap();
        let coeffs = ChaosCoefficients::with_length(&p, lambda_n, m).unwrap();
        let noise = NoiseSequence::from_values(-12, eps);
        for n in [-2, 0, 11] {
            let fast = chaos_value(n, &coeffs, &noise).unwrap();
            let slow = brute_force_chaos(n, &coeffs, &noise).unwrap();
            prop_assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0));
        }
    }

    #[test]
    fn covariance_table_is_psd(p in params()) {
        let table = CovarianceTable::build(&p, &[0.0, 0.2, 0.5, 0.9, 1.4], 1e-10).unwrap();
        prop_assert!(table.max_asymmetry() == 0.0);
        prop_assert!(table.min_eigenvalue() >= -1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn paths_are_reproducible(seed in any::<u64>(), k in 1u32..=2) {
        let p = ProcessParams::new(k, 0.8, 1.0).unwrap();
        let a = simulate_paths(&p, 64, 3, seed, Distribution::Rademacher, 1e-8).unwrap();
        let b = simulate_paths(&p, 64, 3, seed, Distribution::Rademacher, 1e-8).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a[0].values != a[1].values);
        prop_assert_eq!(a[0].values[0], 0.0);
    }
}
