use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("specification is not a safety formula: {0}")]
    NotSafety(String),
    #[error("invalid architecture: {0}")]
    Architecture(String),
    #[error("invalid problem: {0}")]
    Problem(String),
    #[error("vocabulary mismatch: {0}")]
    Vocabulary(String),
    #[error("alphabet mismatch: {0}")]
    Alphabet(String),
    #[error("state space limit exceeded: {0}")]
    Limit(String),
    #[error("class computation diverged: {0}")]
    Diverged(String),
    #[error("some environment word admits no safe output word")]
    LocallyUnrealizable,
    #[error("class guarantee conflict: {0}")]
    ClassConflict(String),
    #[error("information budget exceeded: {0}")]
    Budget(String),
    #[error("bidirectional communication is not supported by the closed-loop semantics")]
    Bidirectional,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
