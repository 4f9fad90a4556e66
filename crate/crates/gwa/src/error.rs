use thiserror::Error;

/// Errors raised by the workbench.
///
/// Most variants name a hypothesis that failed on concrete data; none of them
/// indicate a bug on their own except `CornerNotStable` and
/// `EquivalenceFailure`, which should never fire on validated inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("element is not a unit: {0}")]
    NonUnit(String),
    #[error("elements are not comaximal: residue gcd is {0}")]
    NotComaximal(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{0} is not a primitive root of unity of the requested order")]
    NotPrimitiveRoot(String),
    #[error("precision {have} is below the required {need}")]
    PrecisionInsufficient { have: usize, need: usize },
    #[error("truncation at dimension {dim} is not stable: descent coefficient is {coefficient}")]
    TruncationNotStable { dim: usize, coefficient: String },
    #[error("weight {0} is not a highest weight: z does not vanish on it")]
    NotHighestWeight(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("module is not in category O: {0}")]
    NotCategoryO(String),
    #[error("corner is not stable under {0}")]
    CornerNotStable(String),
    #[error("equivalence failure: {0}")]
    EquivalenceFailure(String),
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
