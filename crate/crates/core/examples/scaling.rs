//! Joint time/tempering scaling and stationary increments, checked on the
//! covariance.
use tempered_hermite::covariance::{increment_variance, scaling_residual};
use tempered_hermite::model::ProcessParams;

fn main() -> tempered_hermite::Result<()> {
    let tol = 1e-9;
    for &(k, h) in &[(1, 0.7), (2, 1.0), (3, 1.5)] {
        let p = ProcessParams::new(k, h, 1.0)?;
        for &c in &[0.5, 2.0, 10.0] {
            let r = scaling_residual(c, 1.0, 0.5, &p, tol)?;
            println!("k={k} H={h} c={c:<4} scaling residual {r:.2e}");
        }
        let inc = increment_variance(1.3, 0.4, &p, tol)?;
        println!(
            "k={k} H={h} E|Z(1.3)-Z(0.4)|^2 = {:.12} vs R(0.9,0.9) = {:.12}",
            inc.value, inc.stationary.value
        );
    }
    Ok(())
}
