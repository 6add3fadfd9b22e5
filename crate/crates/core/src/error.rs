use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BchError {
    #[error("expected a homogeneous polynomial, found grades {0:?}")]
    NonHomogeneous(Vec<usize>),

    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },

    #[error("descent count {d} out of range for n = {n}")]
    DescentOutOfRange { n: usize, d: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("generator index {index} outside alphabet of size {size}")]
    GeneratorOutOfRange { index: usize, size: usize },

    #[error("scaling factor for generator {0} is zero")]
    ZeroFactor(usize),

    #[error("identity reduction is only defined over two generators")]
    UnsupportedAlphabet,

    #[error("grade {0} is below the minimum for this operation")]
    GradeTooSmall(usize),

    #[error("commutator identity at grade {grade} does not expand to zero")]
    IdentityCheckFailed { grade: usize },

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("unknown identity regime {0:?}")]
    UnknownRegime(String),
}

pub type Result<T> = std::result::Result<T, BchError>;
