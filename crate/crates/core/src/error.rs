use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero-dimensional generator space requested")]
    EmptySpace,

    #[error("generator index {index} out of range for a space of {len} generators")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("operands live in different generator spaces")]
    SpaceMismatch,

    #[error("block `{0}` not found in generator space")]
    MissingBlock(String),

    #[error("block `{label}` has signature ({n_pos},{n_neg}); need equal even counts")]
    BadSignature {
        label: String,
        n_pos: usize,
        n_neg: usize,
    },

    #[error("generator space too small: need rank {needed}, block `{label}` has rank {available}")]
    InsufficientSpace {
        label: String,
        needed: usize,
        available: usize,
    },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: usize },

    #[error("window contains a turning point (mu = {mu:e} at tau = {tau})")]
    TurningPoint { tau: f64, mu: f64 },

    #[error("overlapping generator support between particles {0} and {1}")]
    OverlappingBlocks(usize, usize),

    #[error("invalid mode specification: {0}")]
    InvalidModeSpec(String),

    #[error("unsupported branch: {0}")]
    Unsupported(String),

    #[error("curve is not spacelike at u = {0}")]
    NotSpacelike(f64),

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}: {what}")]
    Residual {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("sample does not determine the structure constants (rank {rank} < {needed})")]
    RankDeficient { rank: usize, needed: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
