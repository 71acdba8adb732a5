//! Slow, independent reference computations used to check the fast paths:
//! literal enumeration of chaos sums, an integral-representation Bessel
//! function, and quadratures built on different schemes from [`crate::quad`].

mod bessel;
mod chaos;
mod covariance;
mod kernel;
mod quadrature;

pub use bessel::bessel_k_oracle;
pub use chaos::{brute_force_chaos, ENUMERATION_LIMIT};
pub use covariance::covariance_2d_oracle;
pub use kernel::{h_t_oracle, l2_norm_ht, numeric_fourier};
pub use quadrature::{gauss_legendre, tanh_sinh, QuadratureSpec, Scheme, Singularity};
