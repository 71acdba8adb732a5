//! One rescaled discrete-chaos path, plus a check of the off-diagonal sum
//! against literal enumeration.
use tempered_hermite::chaos::{chaos_value, ChaosCoefficients, Distribution, NoiseSequence, PathKernel};
use tempered_hermite::model::ProcessParams;
use tempered_hermite::oracle::brute_force_chaos;

fn main() -> tempered_hermite::Result<()> {
    let params = ProcessParams::new(2, 0.75, 1.0)?;
    let n = 1024;
    let coeffs = ChaosCoefficients::build(&params, n, 1e-10)?;
    println!("M = {}, tail bound {:.2e}", coeffs.len(), coeffs.tail_l2());

    let kernel = PathKernel::new(coeffs, n)?;
    let noise = NoiseSequence::generate(kernel.noise_first(), kernel.noise_len(), Distribution::Gaussian, 42, 0);
    let path = kernel.path(&noise)?;
    for (t, v) in path.points().step_by(128) {
        println!("{t:.4} {v:+.6}");
    }

    let small = ProcessParams::new(3, 0.8, 1.0)?;
    let c = ChaosCoefficients::with_length(&small, 0.1, 10)?;
    let e = NoiseSequence::generate(-10, 20, Distribution::Rademacher, 7, 0);
    let fast = chaos_value(5, &c, &e)?;
    let slow = brute_force_chaos(5, &c, &e)?;
    println!("k=3, M=10: Newton {fast:.15} enumeration {slow:.15}");
    Ok(())
}
