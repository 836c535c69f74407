use thiserror::Error;

/// Errors shared by every layer of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic {0} is even; only odd characteristics are supported")]
    EvenCharacteristic(u64),
    #[error("unsupported field GF({p}^{k}): {reason}")]
    UnsupportedField { p: u64, k: u32, reason: &'static str },
    #[error("scalar does not belong to this field context")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("root extraction needs a discrete-log table but GF(q) with q = {q} exceeds the table cap")]
    RootTableTooLarge { q: u64 },
    #[error("no embedding of GF({ps}^{ks}) into GF({pd}^{kd})")]
    NoEmbedding { ps: u64, ks: u32, pd: u64, kd: u32 },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index {index} out of range for {num_vars} variables")]
    VarOutOfRange { index: usize, num_vars: usize },
    #[error("polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("objects live in different ambient spaces or fields")]
    AmbientMismatch,
    #[error("all coordinates are zero; not a projective point")]
    ZeroPoint,
    #[error("the empty subvariety has no Pluecker coordinates")]
    EmptySubspace,
    #[error("point does not lie on the hypersurface")]
    NotOnHypersurface,
    #[error("singular point: the gradient vanishes there")]
    SingularPoint,
    #[error("degree {0} is too small for this operation")]
    DegreeTooSmall(usize),
    #[error("no smooth rational point found within the sampling budget")]
    NoSmoothPoint,
    #[error("work estimate {estimated} evaluations exceeds the budget cap {budget}")]
    BudgetExceeded { estimated: u64, budget: u64 },
    #[error("fewer than two enumeration levels fit the budget; cannot estimate a dimension")]
    InsufficientLevels,
    #[error("closed-form fiber undefined here: {0}")]
    NotGeneral(String),
    #[error("the field has no primitive 4th root of unity (need 4 | q-1)")]
    MissingRootsOfUnity,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
