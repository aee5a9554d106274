use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// `gamma` and `beta` have different lengths.
    LengthMismatch { gamma: usize, beta: usize },
    /// A symmetry name that is not one of the known landscape maps.
    UnknownSymmetry(String),
    /// The state-vector simulator refuses chains above its memory cap.
    ChainTooLarge { n_sites: usize, max: usize },
    /// A bracketing search found its optimum on the edge of the bracket.
    BracketFailure { lo: f64, hi: f64 },
    /// An iterative construction stopped before reaching its target.
    NotConverged { level: usize, residual: f64, target: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::LengthMismatch { gamma, beta } => {
                write!(f, "gamma has {gamma} entries but beta has {beta}")
            }
            Error::UnknownSymmetry(name) => write!(f, "unknown symmetry transform `{name}`"),
            Error::ChainTooLarge { n_sites, max } => {
                write!(f, "chain of {n_sites} sites exceeds the simulator cap of {max}")
            }
            Error::BracketFailure { lo, hi } => {
                write!(f, "optimum sits on the bracket edge [{lo}, {hi}]")
            }
            Error::NotConverged { level, residual, target } => {
                write!(f, "level P={level} stalled at residual {residual:e} (target {target:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
