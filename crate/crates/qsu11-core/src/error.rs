//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors reported by algebra, integral, and parsing operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Two operands live over different base grids.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// An operation is not allowed for the operand's layer.
    #[error("layer violation: {0}")]
    Layer(String),

    /// An integral or pairing was asked of an element that is not finitely
    /// supported.
    #[error("not a finite element: {0}")]
    NotFinite(String),

    /// A functional with a homogeneity precondition was applied to an
    /// inhomogeneous element.
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),

    /// Division by a scalar that has no representable inverse.
    #[error("scalar division: {0}")]
    Division(String),

    /// An operator required evaluating a point mass outside its grid.
    #[error("off-grid evaluation: {0}")]
    OffGrid(String),

    /// Malformed textual input; `offset` is a byte position into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Operation outside the supported fragment of the calculus.
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
