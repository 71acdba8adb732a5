//! Closed-form Fourier transform of h_t against direct quadrature.
use tempered_hermite::model::{h_t_fourier, ProcessParams};
use tempered_hermite::oracle::numeric_fourier;

fn main() -> tempered_hermite::Result<()> {
    let p = ProcessParams::new(1, 0.7, 1.0)?;
    for &w in &[-5.0, -1.0, -0.1, 0.0, 0.1, 1.0, 5.0] {
        let closed = h_t_fourier(&[w], 1.0, &p)?;
        let (num, tail) = numeric_fourier(1.0, &[w], &p, 1e-9)?;
        println!("omega={w:>5}: {closed:.10}  |diff| {:.1e} (tail <= {tail:.1e})", (closed - num).norm());
    }
    let p2 = ProcessParams::new(2, 0.7, 1.0)?;
    println!("k=2, omega=(1,-0.5): {:.10}", h_t_fourier(&[1.0, -0.5], 1.0, &p2)?);
    Ok(())
}
