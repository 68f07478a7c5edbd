use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("nonfinite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix dimensions {rows}x{cols} exceed the {max} limit")]
    DimensionTooLarge { rows: usize, cols: usize, max: usize },
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },
    #[error("hermitian required")]
    HermitianRequired,
    #[error("invertible required")]
    InvertibleRequired,
    #[error("singular matrix")]
    Singular,
    #[error("not a solution")]
    NotASolution,
    #[error("not a hermitian solution")]
    NotAHermitianSolution,
    #[error("not invariant")]
    NotInvariant,
    #[error("projection not surjective")]
    ProjectionNotSurjective,
    #[error("enumeration too large: {clusters} clusters exceed the limit of {max}")]
    EnumerationTooLarge { clusters: usize, max: usize },
    #[error("block {index} has size {found}, cluster multiplicity is {expected}")]
    BlockSizeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("block {index} is not involutory: defect {defect:.3e}")]
    NotInvolutory { index: usize, defect: f64 },
    #[error("condition cap must be at least 1, got {0}")]
    InvalidConditionCap(f64),
    #[error("sign pattern has length {found}, expected one sign per cluster ({expected})")]
    BadSignPattern { expected: usize, found: usize },
    #[error("{0}")]
    Format(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    fn shape(context: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            context: context.into(),
        }
    }
}

pub(crate) fn shape_mismatch(context: impl Into<String>) -> Error {
    Error::shape(context)
}

pub type Result<T> = std::result::Result<T, Error>;
