use thiserror::Error;

/// Errors raised by the spectral-flow routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),

    #[error("row {row} of the secular matrix vanishes at k = {k}")]
    DegenerateRow { row: usize, k: f64 },

    #[error("k = {k} is not an eigenvalue (smallest relative singular value {sigma:e})")]
    NotARoot { k: f64, sigma: f64 },

    #[error("branch assignment ambiguous on theta window [{theta_lo}, {theta_hi}]")]
    TrackingAmbiguity { theta_lo: f64, theta_hi: f64 },

    #[error("branch starting at level {level} ends before theta = 2 pi (last seen at theta = {theta})")]
    IncompleteBranch { level: usize, theta: f64 },

    #[error("web description line {line}: {msg}")]
    WebSyntax { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
