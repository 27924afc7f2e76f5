use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix failed a structural check (Hermiticity, positivity, trace, dimension).
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// Adaptive quadrature or an iterative method did not reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Fisher information is undefined (zero probability with nonzero derivative,
    /// or a state derivative leaking outside the support of the state).
    #[error("ill-defined Fisher information: {0}")]
    IllDefinedFisher(String),

    /// A Lindblad model violates the jump-operator block structure.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A Bohr frequency of the Hamiltonian has no entry in the bath table.
    #[error("missing bath data for Bohr frequency {0}")]
    MissingFrequency(f64),

    /// A Lamb-shift derivative is not decomposable on the supplied coefficients.
    #[error("decomposition residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Decomposition { residual: f64, tolerance: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
