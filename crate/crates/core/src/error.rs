use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed Gauss code token at byte {pos}: {msg}")]
    MalformedToken { pos: usize, msg: String },

    #[error("label {0} must appear exactly once as O and once as U")]
    UnbalancedLabel(u64),

    #[error("malformed OU/matching text: {0}")]
    MalformedMatching(String),

    #[error("operation requires a single-component diagram, got {0} components")]
    NotAKnot(usize),

    #[error("skeleton position {position} out of range (component {component} has {len} slots)")]
    PositionOutOfRange {
        component: usize,
        position: usize,
        len: usize,
    },

    #[error("saddle endpoints coincide")]
    DegenerateSaddle,

    #[error("move site no longer applies: {0}")]
    StaleSite(String),

    #[error("walk is not closed: {0}")]
    OpenWalk(String),

    #[error("table record {name}: {msg}")]
    InvalidRecord { name: String, msg: String },

    #[error("missing invariant column `{0}`")]
    MissingInvariant(String),

    #[error("malformed table line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },

    #[error("malformed polynomial `{0}`")]
    MalformedPolynomial(String),

    #[error("slice movie replay failed at step {step}: {msg}")]
    ReplayFailed { step: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
