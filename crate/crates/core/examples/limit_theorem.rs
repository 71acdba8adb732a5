//! Exact second moments of the rescaled chaos sums approach the
//! continuous-time covariance as N grows.
use tempered_hermite::chaos::exact_rescaled_covariance;
use tempered_hermite::covariance::covariance_r;
use tempered_hermite::model::ProcessParams;

fn main() -> tempered_hermite::Result<()> {
    for &(k, h) in &[(1, 0.7), (1, 1.2), (2, 0.7), (2, 1.2)] {
        let p = ProcessParams::new(k, h, 1.0)?;
        let r = covariance_r(1.0, 0.5, &p, 1e-10)?.value;
        print!("k={k} H={h} R(1,0.5)={r:.6}  rel.err:");
        for &n in &[64, 256, 1024, 4096] {
            let e = exact_rescaled_covariance(&p, n, 1e-10, &[1.0], &[0.5])?[0][0];
            print!("  N={n} {:.4}", (e - r).abs() / r);
        }
        println!();
    }
    Ok(())
}
