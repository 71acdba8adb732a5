use tempered_hermite::chaos::{exact_rescaled_covariance, simulate_ensemble, Distribution};
use tempered_hermite::covariance::{covariance_r, variance_formula};
use tempered_hermite::model::{h_t_from_gaps, ProcessParams};
use tempered_hermite::oracle::{covariance_2d_oracle, h_t_oracle, l2_norm_ht};

#[test]
fn h_t_against_oracle() {
    for &(k, h) in &[(1, 0.7), (2, 0.8), (3, 1.4)] {
        let p = ProcessParams::new(k, h, 0.7).unwrap();
        let gaps: Vec<f64> = (0..k as usize - 1).map(|i| 0.05 + 0.3 * i as f64).collect();
        for &top in &[-0.8, 0.2, 0.95] {
            let fast = h_t_from_gaps(top, &gaps, 1.0, &p, 1e-12).unwrap().value;
            let slow = h_t_oracle(top, &gaps, 1.0, &p, 1e-12).unwrap();
            assert!((fast - slow).abs() <= 1e-9 * slow.abs().max(1.0), "k={k} top={top}: {fast} vs {slow}");
        }
    }
}

#[test]
fn covariance_against_2d_oracle() {
    for &(k, h, l) in &[(1, 0.6, 1.0), (2, 1.0, 0.5), (3, 1.3, 2.0)] {
        let p = ProcessParams::new(k, h, l).unwrap();
        for &(t, s) in &[(1.0, 0.5), (0.3, 1.7)] {
            let fast = covariance_r(t, s, &p, 1e-11).unwrap().value;
            let slow = covariance_2d_oracle(t, s, &p, 1e-11).unwrap().value;
            assert!((fast - slow).abs() <= 1e-9 * slow.abs(), "{fast} vs {slow}");
        }
    }
}

#[test]
fn variance_is_k_factorial_times_l2_norm() {
    let p = ProcessParams::new(2, 0.75, 1.0).unwrap();
    let l2 = l2_norm_ht(0.5, &p, 1e-10).unwrap();
    let v = variance_formula(0.5, &p, 1e-10).unwrap();
    assert!((2.0 * l2.value - v.value).abs() <= 1e-8 * v.value);
}

#[test]
fn rademacher_and_gaussian_agree_in_second_moment() {
    let p = ProcessParams::new(2, 1.1, 1.0).unwrap();
    let n = 128;
    let exact = exact_rescaled_covariance(&p, n, 1e-9, &[1.0], &[1.0]).unwrap()[0][0];
    for dist in [Distribution::Gaussian, Distribution::Rademacher] {
        let s = simulate_ensemble(&p, n, 3000, 5, dist, &[1.0], 1e-9).unwrap();
        let z = (s.covariance[0][0] - exact) / s.covariance_se[0][0];
        assert!(z.abs() < 4.0, "{dist}: z = {z}");
    }
}
