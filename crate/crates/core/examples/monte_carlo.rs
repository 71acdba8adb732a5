//! Empirical covariance of simulated paths against the exact discrete
//! second moment, for Gaussian and Rademacher innovations.
use tempered_hermite::chaos::{exact_rescaled_covariance, simulate_ensemble, Distribution};
use tempered_hermite::model::ProcessParams;

fn main() -> tempered_hermite::Result<()> {
    let params = ProcessParams::new(1, 0.7, 1.0)?;
    let (n, paths) = (256, 4000);
    let grid = [0.5, 1.0];
    let exact = exact_rescaled_covariance(&params, n, 1e-10, &[1.0], &[0.5])?[0][0];
    for dist in [Distribution::Gaussian, Distribution::Rademacher] {
        let s = simulate_ensemble(&params, n, paths, 2024, dist, &grid, 1e-10)?;
        let (c, se) = (s.covariance[1][0], s.covariance_se[1][0]);
        println!(
            "{dist:>10}: Cov(v(1), v(0.5)) = {c:.4} +- {se:.4}, exact {exact:.4}, z = {:+.2}; mean v(1) = {:+.4} +- {:.4}",
            (c - exact) / se,
            s.mean_path[n],
            s.mean_se[n]
        );
    }
    Ok(())
}
