use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("permutations must act on at least one point")]
    EmptyDomain,

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("point {point} is outside the domain of size {n}")]
    PointOutOfRange { point: usize, n: usize },

    #[error("group order exceeds the cap of {cap} elements")]
    GroupOrderCap { cap: usize },

    #[error("brace order exceeds the cap of {cap} elements")]
    BraceOrderCap { cap: usize },

    #[error("group does not act transitively")]
    Intransitive,

    #[error("block seeds must be two distinct points")]
    DegenerateBlockSeed,

    #[error("the table is not a solution of the Yang-Baxter equation")]
    InvalidSolution,

    #[error("the solution is retractable")]
    Retractable,

    #[error("sigma classes are not permuted by the group: {0}")]
    ClassInvariance(String),

    #[error("brace construction failed: {0}")]
    BraceConstruction(String),

    #[error("sylow system check failed: {0}")]
    Sylow(String),

    #[error("set size {n} is beyond the supported maximum {max}")]
    SizeTooLarge { n: usize, max: usize },

    #[error("size {n} requires explicitly enabling large enumerations")]
    BudgetExceeded { n: usize },

    #[error("search interrupted before completion")]
    Interrupted,

    #[error("primitive solution of unexpected shape at n = {n}: {detail}")]
    ShapeViolation { n: usize, detail: String },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
