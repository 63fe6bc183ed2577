use alloc::string::String;
use core::fmt;

/// Errors raised by the geometry core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Jet division by a value that is exactly zero.
    DivisionByZeroValue,
    /// An elementary function was applied outside its domain.
    DomainError { function: &'static str, value: f64 },
    /// Syntax error in a surface file or expression. Line and column are 1-based.
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    /// Component count or ambient dimension does not match what is required.
    DimensionError { expected: String, found: usize },
    /// An identifier that is neither `u`, `v`, a known function nor a constant.
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },
    /// Chart differential is (numerically) rank deficient.
    SingularPointError { u: f64, v: f64, gram: f64 },
    /// Normal torsion requested where it is not defined.
    TorsionUndefined { reason: &'static str },
    /// Field tracing could not start on the requested branch.
    SeedError { branch: usize, available: usize },
    /// Predictor-corrector continuation of an implicit curve stalled.
    ContinuationFailure { step: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZeroValue => write!(f, "division by a jet with zero value"),
            Error::DomainError { function, value } => {
                write!(f, "{function} is undefined at {value}")
            }
            Error::ParseError {
                line,
                column,
                message,
            } => write!(f, "parse error at {line}:{column}: {message}"),
            Error::DimensionError { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnknownIdentifier { name, line, column } => {
                write!(f, "unknown identifier `{name}` at {line}:{column}")
            }
            Error::SingularPointError { u, v, gram } => write!(
                f,
                "chart is singular at (u, v) = ({u}, {v}) (Gram determinant {gram:e})"
            ),
            Error::TorsionUndefined { reason } => write!(f, "normal torsion undefined: {reason}"),
            Error::SeedError { branch, available } => write!(
                f,
                "branch {branch} not available at seed ({available} directions)"
            ),
            Error::ContinuationFailure { step } => {
                write!(f, "curve continuation stalled at step {step}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
