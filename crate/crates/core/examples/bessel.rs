//! K_nu(z) from the series/continued-fraction evaluator next to the
//! integral-representation reference.
use tempered_hermite::{oracle, specfun};

fn main() -> tempered_hermite::Result<()> {
    println!("{:>5} {:>8} {:>24} {:>10}", "nu", "z", "K_nu(z)", "rel.diff");
    for &nu in &[0.0, 0.25, 0.5, 1.3, 2.7] {
        for &z in &[1e-3, 0.1, 1.0, 5.0, 30.0] {
            let k = specfun::bessel_k(nu, z)?;
            let r = oracle::bessel_k_oracle(nu, z, 1e-13)?;
            println!("{nu:>5} {z:>8} {k:>24.16e} {:>10.2e}", ((k - r) / r).abs());
        }
    }
    // Scaled form stays finite far past the underflow of K itself.
    println!("e^z K_0.3(z) at z = 1e4: {}", specfun::bessel_k_scaled(0.3, 1e4)?);
    println!(
        "int_0^inf x^(-0.4) e^(-x) K_0.4(x) dx = {}",
        specfun::tempered_product_integral(0.9, 1.0, 2.0)?
    );
    Ok(())
}
