use crate::exactnum::BaseField;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{value} is not an element of {field}")]
    NotInField { value: String, field: BaseField },

    #[error("{radicand} is zero or a square in {field}; F(sqrt) would not be a field extension")]
    SquareRadicand { radicand: String, field: BaseField },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero entry in a diagonal form (forms must be nonsingular)")]
    ZeroEntry,

    #[error("scale factor must be nonzero")]
    ZeroScale,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} lies above 2; Springer's theorem needs a non-dyadic valuation")]
    Dyadic(String),

    #[error("{value} has negative valuation at {prime}; it does not reduce to the residue field")]
    NegativeValuation { value: String, prime: String },

    #[error("{value} is not a unit at {prime}")]
    NotAUnit { value: String, prime: String },

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("{0} has zero norm and is not invertible")]
    ZeroDivisor(String),

    #[error("formal slot {0} has no numeric stand-in")]
    FormalSlot(char),

    #[error("{0}")]
    Unsupported(String),

    #[error("codebook has {codewords} codewords, above the exhaustive-search budget of {limit}")]
    BudgetExceeded { codewords: u128, limit: u128 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("algebra {0} is not certified as a division algebra (use --force to override)")]
    Uncertified(String),

    #[error("integer overflow in the fast exact path")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
