use thiserror::Error;

use crate::graph::ValidationReport;

/// Errors raised by the library.
///
/// The CLI maps each variant onto one of three stable prefixes
/// (`E-PARSE`, `E-VALID`, `E-NUM`), see [`Error::code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unknown builtin graph type {0} (expected 1..=5)")]
    UnknownBuiltin(u32),

    #[error("coefficient h+lambda vanishes identically; bound constant is undefined")]
    DegenerateCoefficient,

    #[error("coefficient h+lambda is nonnegative everywhere; the equation has no solution")]
    NoNegativeCoefficient,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("newton solve failed: {0}")]
    SolveFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Machine-stable code prefix.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "E-PARSE",
            Error::InvalidGraph(_)
            | Error::InvalidParameter { .. }
            | Error::DimensionMismatch { .. }
            | Error::UnknownBuiltin(_)
            | Error::DegenerateCoefficient
            | Error::NoNegativeCoefficient
            | Error::Io(_) => "E-VALID",
            Error::EigenNonConvergence { .. } | Error::SolveFailed(_) => "E-NUM",
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
