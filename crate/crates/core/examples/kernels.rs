//! The integrated kernel h_t and its squared L2 norm.
use tempered_hermite::covariance::variance_formula;
use tempered_hermite::model::{h_t, ProcessParams};
use tempered_hermite::oracle::l2_norm_ht;

fn main() -> tempered_hermite::Result<()> {
    let p = ProcessParams::new(2, 0.8, 1.0)?;
    for y in [[-0.5, 0.2], [0.1, 0.3], [0.4, 0.4 + 1e-9], [0.9, -3.0]] {
        let h = h_t(&y, 1.0, &p, 1e-12)?;
        println!("h_1({:?}) = {:.12} (+- {:.0e})", y, h.value, h.abs_err);
    }
    // ||h_t||^2 times k! is the variance.
    let p1 = ProcessParams::new(1, 0.7, 1.0)?;
    let l2 = l2_norm_ht(1.0, &p1, 1e-10)?;
    let v = variance_formula(1.0, &p1, 1e-10)?;
    println!("k=1: ||h_1||^2 = {:.12}, variance = {:.12}", l2.value, v.value);
    Ok(())
}
