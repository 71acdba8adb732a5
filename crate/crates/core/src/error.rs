use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain ({constraint})")]
    Domain {
        function: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("{function}: result overflows f64 at argument {value}")]
    Overflow { function: &'static str, value: f64 },

    #[error("invalid process parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {abs_err:e}, target {target:e})"
    )]
    NoConvergence {
        subdivisions: usize,
        estimate: f64,
        abs_err: f64,
        target: f64,
    },

    #[error("tail tolerance {tail_tol:e} unreachable below the truncation cap {cap}")]
    TailUnreachable { tail_tol: f64, cap: usize },

    #[error("noise window [{have_lo}, {have_hi}] does not cover required indices [{need_lo}, {need_hi}]")]
    InsufficientNoise {
        need_lo: i64,
        need_hi: i64,
        have_lo: i64,
        have_hi: i64,
    },

    #[error("grid time {time} is not a multiple of 1/{n}")]
    GridAlignment { time: f64, n: usize },

    #[error("enumeration of {size} tuples exceeds the guard of {limit}")]
    SizeGuard { size: u128, limit: u128 },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            constraint,
        }
    }

    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::InvalidParams(_)
                | Error::Unsupported(_)
                | Error::GridAlignment { .. }
                | Error::Config(_)
        )
    }
}
