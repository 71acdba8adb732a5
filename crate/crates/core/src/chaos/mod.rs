//! Discrete chaos approximation: moving-average coefficients, off-diagonal
//! chaos sums, rescaled partial-sum paths, their exact second moments, and
//! Monte Carlo ensembles.

mod coefficients;
mod ensemble;
mod moments;
mod newton;
mod noise;
mod path;

pub use coefficients::{ChaosCoefficients, MAX_TRUNCATION};
pub use ensemble::{simulate_ensemble, simulate_paths, EnsembleSummary, BLOCK_SIZE};
pub use moments::{exact_rescaled_covariance, grid_index, pairing_sums};
pub use newton::{elementary_from_power_sums, off_diagonal_from_power_sums};
pub use noise::{Distribution, NoiseSequence};
pub use path::{chaos_value, rescaled_path, rescaled_path_with, PathKernel, RescaledPath};
