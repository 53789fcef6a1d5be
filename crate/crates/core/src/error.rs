use thiserror::Error;

/// Errors produced by the quantization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mixture weight must lie in the open interval (0, 1), got {0}")]
    InvalidWeight(f64),

    #[error("invalid step density: {0}")]
    InvalidDensity(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("interval [{lo}, {hi}] carries no probability mass")]
    ZeroMass { lo: f64, hi: f64 },

    #[error("invalid codebook: {0}")]
    InvalidCodebook(String),

    #[error("number of codepoints must be positive")]
    ZeroPoints,

    #[error("explicit solutions exist for 1 <= n <= 6 only, got n = {0}")]
    SmallNOutOfRange(usize),

    #[error("split (k, m) = ({k}, {m}) is outside the domain N x N \\ {{(1, 1)}}")]
    OutsideDomain { k: usize, m: usize },

    #[error("selecting k requires n >= 5, got n = {0}")]
    SelectorDomain(usize),

    #[error("both cases are infeasible for split (k, m) = ({k}, {m})")]
    Infeasible { k: usize, m: usize },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("invalid oracle option: {0}")]
    InvalidOption(String),
}

pub type Result<T> = std::result::Result<T, Error>;
