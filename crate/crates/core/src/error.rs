use alloc::string::String;
use core::fmt;

/// Errors raised by constructions and checks in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The field description is not the rationals or an odd prime field.
    InvalidField(String),
    /// Operands live over different fields or polynomial rings.
    FieldMismatch,
    DegreeMismatch { expected: i64, found: i64 },
    VariableCountMismatch { expected: usize, found: usize },
    LengthMismatch { expected: usize, found: usize },
    Parse(String),
    /// Matrix or complex shapes do not fit together.
    Shape(String),
    NotAChainMap(String),
    OutOfRange(String),
    WrongParity(String),
    /// A bilinear form that was required to be nondegenerate is not.
    Degenerate,
    NotLagrangian(String),
    InvalidSplit(String),
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidField(s) => write!(f, "invalid field: {s}"),
            Error::FieldMismatch => f.write_str("operands live over different rings"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "degree mismatch: expected {expected}, found {found}")
            }
            Error::VariableCountMismatch { expected, found } => {
                write!(f, "variable count mismatch: expected {expected}, found {found}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::NotAChainMap(s) => write!(f, "not a chain map: {s}"),
            Error::OutOfRange(s) => write!(f, "out of range: {s}"),
            Error::WrongParity(s) => write!(f, "wrong parity: {s}"),
            Error::Degenerate => f.write_str("degenerate bilinear form"),
            Error::NotLagrangian(s) => write!(f, "not a Lagrangian: {s}"),
            Error::InvalidSplit(s) => write!(f, "invalid split: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

impl core::error::Error for Error {}
