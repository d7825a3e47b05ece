use thiserror::Error;

/// Errors raised by the geometric and combinatorial routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("direction {direction} is not generic: {reason}")]
    Genericity { direction: String, reason: String },

    #[error("sum of the polytopes has dimension {dim} in ambient dimension {ambient}: {hint}")]
    DimensionDeficient {
        dim: usize,
        ambient: usize,
        hint: String,
    },

    #[error("mixed subdivision is not pure at cell {cell}: dim {dim} but summand dims {summands:?}")]
    Impure {
        cell: usize,
        dim: usize,
        summands: Vec<usize>,
    },

    #[error("no pure subdivision found after {0} lift draws")]
    RetryCap(usize),

    #[error("property (S) violated: {0}")]
    PropertyS(String),

    #[error("polytope vertex {0} is not a lattice point")]
    NonLattice(String),

    #[error("lattice-dependent operation requested on a quotient instance")]
    QuotientLattice,

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("internal invariant broken: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
