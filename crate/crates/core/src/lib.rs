pub mod chaos;
pub mod cli;
pub mod covariance;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
