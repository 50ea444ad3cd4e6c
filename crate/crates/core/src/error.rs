use thiserror::Error;

use crate::multiplication::LocalityWitness;

/// Errors raised by the toolkit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid measure space: {0}")]
    InvalidMeasureSpace(String),

    #[error("invalid space descriptor: {0}")]
    InvalidSpaceSpec(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported exponents: {0}")]
    WrongExponents(String),

    #[error("operator norm has no closed form for L^{p} -> L^{q}; only bounds are available")]
    NonExactRegime { p: &'static str, q: &'static str },

    #[error("{0} requires an ordered space")]
    Unordered(&'static str),

    #[error("expected {expected} tensor factors, found {found}")]
    FactorCount { expected: usize, found: usize },

    #[error("tensor element has no L1 or l1 factor")]
    NoL1Factor,

    #[error("unsupported factor regime: {0}")]
    UnsupportedRegime(String),

    #[error("operator is not local: block ({row_atom}, {col_atom}) is nonzero")]
    NonLocal {
        row_atom: usize,
        col_atom: usize,
        witness: Box<LocalityWitness>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "E_DIMENSION",
            Error::InvalidMeasureSpace(_) => "E_MEASURE_SPACE",
            Error::InvalidSpaceSpec(_) => "E_SPACE_SPEC",
            Error::SpaceMismatch(_) => "E_SPACE_MISMATCH",
            Error::ShapeMismatch(_) => "E_SHAPE",
            Error::WrongExponents(_) => "E_EXPONENTS",
            Error::NonExactRegime { .. } => "E_NON_EXACT",
            Error::Unordered(_) => "E_UNORDERED",
            Error::FactorCount { .. } => "E_FACTOR_COUNT",
            Error::NoL1Factor => "E_NO_L1_FACTOR",
            Error::UnsupportedRegime(_) => "E_UNSUPPORTED",
            Error::NonLocal { .. } => "E_NON_LOCAL",
            Error::InvalidArgument(_) => "E_ARGUMENT",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
