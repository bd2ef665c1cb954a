//! Error type shared by all model modules.

use std::fmt;

/// Errors produced by the analytical models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the mathematical domain of an equation
    /// (non-positive where positivity is required, probability outside (0,1),
    /// read current at or above the critical current, ...).
    Domain(String),
    /// A layer shape is inconsistent (zero dimension, kernel larger than the
    /// padded input, broken layer chaining). Messages name the layer.
    Shape(String),
    /// A model, table, or config failed structural validation.
    Validation(String),
    /// A lookup fell outside the covered range (e.g. capacity outside the
    /// technology table; no extrapolation is performed).
    OutOfRange(String),
    /// A data file could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Shape(m) => write!(f, "shape error: {m}"),
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::OutOfRange(m) => write!(f, "out of range: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
