use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("|G|^(q-1) overflowed at grid index {index}; the iterate is diverging")]
    Overflow { index: usize },

    #[error("kernel D(omega) is singular at omega = {omega} (|det| = {det:e})")]
    SingularKernel { omega: f64, det: f64 },

    #[error("iterate norm {norm:e} exceeded the divergence bound after {iterations} iterations")]
    Divergence { norm: f64, iterations: usize },

    #[error("phase unwrapping failed near omega = {omega}: adjacent jump {jump} exceeds pi/2")]
    UnwrapFailure { omega: f64, jump: f64 },

    #[error("not enough extrema for a fit: found {found}, need {needed}")]
    InsufficientMaxima { found: usize, needed: usize },

    #[error("not enough oscillations for a frequency fit: found {found} sign changes")]
    InsufficientOscillations { found: usize },

    #[error("unknown {kind} '{name}'; registered: {available}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("record is not converged")]
    NotConverged,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
