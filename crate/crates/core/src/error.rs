use alloc::string::String;
use core::fmt;

/// Errors surfaced by the workbench.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix or block shapes do not fit together.
    DimensionMismatch(String),
    /// Operands live over different scalar fields.
    FieldMismatch,
    /// Operands live over different algebras (or module shapes).
    AlgebraMismatch(String),
    /// An index (idempotent, vertex, degree) is out of range.
    BadIndex(String),
    /// Structurally malformed input.
    Invalid(String),
    /// The operation is not available for this input class.
    Unsupported(String),
    /// A precondition of a verification does not hold.
    Precondition(String),
    /// Fact-base symbol used before being declared.
    Undeclared(String),
    /// Fact-base atom is ill-typed or contradicts existing facts.
    Contradiction(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(s) => write!(f, "dimension mismatch: {s}"),
            Error::FieldMismatch => write!(f, "scalar field mismatch"),
            Error::AlgebraMismatch(s) => write!(f, "algebra mismatch: {s}"),
            Error::BadIndex(s) => write!(f, "bad index: {s}"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::Precondition(s) => write!(f, "precondition failed: {s}"),
            Error::Undeclared(s) => write!(f, "undeclared symbol: {s}"),
            Error::Contradiction(s) => write!(f, "contradiction: {s}"),
        }
    }
}

impl core::error::Error for Error {}
