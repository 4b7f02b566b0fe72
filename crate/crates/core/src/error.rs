use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument hits a genuine singularity (e.g. the Coulomb transform at k = 0).
    #[error("singular input: {0}")]
    Singular(String),

    /// Input data failed validation (grids, densities, coverage, truncation bounds).
    #[error("validation error: {0}")]
    Validation(String),

    /// Incompatible combination of options, e.g. a hydrogen-only engine on a tabulated target.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(
        "quadrature did not converge within {subdivisions} subdivisions \
         (best estimate {estimate:e}, error bound {error:e})"
    )]
    Convergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Whether the error stems from a numerical convergence failure rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }

    /// Process exit status: 2 for bad input, 3 for convergence failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Validation(_) | Error::Parse(_) | Error::Domain(_) => 2,
            Error::Convergence { .. } => 3,
            _ => 1,
        }
    }
}
