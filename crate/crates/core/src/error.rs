use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("point {0} is not a vertex")]
    NotAVertex(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("orbit closure did not terminate: {0}")]
    OrbitCap(String),

    #[error("no fundamental domain: {0}")]
    NoFundamentalDomain(String),

    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown construction `{0}`")]
    UnknownConstruction(String),

    #[error("certificate: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
