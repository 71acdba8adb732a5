//! Variance along two routes, and the closed-form upper bound.
use tempered_hermite::covariance::{covariance_r, variance_formula, variance_upper_bound};
use tempered_hermite::model::ProcessParams;

fn main() -> tempered_hermite::Result<()> {
    for &(k, h, lambda) in &[(1, 0.6, 1.0), (2, 0.8, 0.5), (1, 1.4, 1.0), (3, 1.2, 1.0)] {
        let p = ProcessParams::new(k, h, lambda)?;
        println!("k={k} H={h} lambda={lambda} (d = {:.4})", p.d());
        for &t in &[0.1, 0.5, 1.0, 4.0] {
            let r = covariance_r(t, t, &p, 1e-10)?;
            let v = variance_formula(t, &p, 1e-10)?;
            let b = variance_upper_bound(t, &p)?;
            println!(
                "  t={t:<4} R(t,t)={:<22} formula diff {:.1e}  bound {:.6e}  ratio {:.3}",
                r.value,
                (r.value - v.value).abs(),
                b,
                r.value / b
            );
        }
    }
    Ok(())
}
