//! Covariance table on a grid, written as CSV to stdout.
use tempered_hermite::covariance::CovarianceTable;
use tempered_hermite::model::ProcessParams;

fn main() -> tempered_hermite::Result<()> {
    let params = ProcessParams::new(2, 0.8, 1.0)?;
    let times = [0.0, 0.25, 0.5, 0.75, 1.0];
    let table = CovarianceTable::build(&params, &times, 1e-9)?;
    eprintln!("min eigenvalue {:.3e}", table.min_eigenvalue());
    eprintln!("max asymmetry  {:.1e}", table.max_asymmetry());
    table.write_csv(std::io::stdout().lock(), &[])?;
    Ok(())
}
