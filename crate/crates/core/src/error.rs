use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violated an operation's precondition (shape, Hermiticity, trace...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A matrix expected to be positive semidefinite has a negative eigenvalue.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    /// A Gram matrix handed to the square-root measurement has unequal diagonal entries.
    #[error("gram matrix diagonal is not constant (spread {spread:e})")]
    UnequalDiagonal { spread: f64 },

    /// A scalar argument lies outside its admissible range.
    #[error("{name} = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: String,
    },

    /// Attack parameters that cannot be realized by any probe.
    #[error("invalid attack parameters: {0}")]
    Validity(String),

    #[error("no feasible parameters for D = {0}")]
    Infeasible(f64),

    #[error("eigen solver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, domain: impl Into<String>) -> Error {
    Error::Domain {
        name,
        value,
        domain: domain.into(),
    }
}
