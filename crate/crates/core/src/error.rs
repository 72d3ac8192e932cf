use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex set {mask:#x} is not inside the active vertex set {active:#x}")]
    NotActive { mask: u64, active: u64 },

    #[error("malformed edge: {0}")]
    MalformedEdge(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("enumeration guard: {active} active vertices exceeds the limit of {limit}")]
    GuardViolation { active: u32, limit: u32 },

    /// Weight ratios, maxr and entropies need at least one perfect matching.
    #[error("undefined: the hypergraph has no perfect matching")]
    NoPerfectMatching,

    #[error("missing auxiliary input: {0}")]
    MissingAux(String),

    #[error("distribution is not normalized (total {0})")]
    NotNormalized(f64),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
