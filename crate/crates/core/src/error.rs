use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("invalid {family} parameter: {reason}")]
    InvalidParameter {
        family: &'static str,
        reason: String,
    },

    #[error("invalid CDF table: {0}")]
    InvalidTable(String),

    #[error("step law has an atom at zero; first-passage analytics require F(0) = 1/2")]
    AtomAtZero,

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("quadrature on [{a}, {b}] did not converge: error estimate {error:e} above tolerance {tolerance:e}")]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("derivative undefined at t = {t}: one-sided slopes {left} and {right} disagree")]
    Jump { t: f64, left: f64, right: f64 },

    #[error("invalid walk configuration: {0}")]
    InvalidConfig(String),

    #[error("simulation budget exceeded: {requested} path-steps requested, limit {limit}")]
    BudgetExceeded { requested: u128, limit: u128 },

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
