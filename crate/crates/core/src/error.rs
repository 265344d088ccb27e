use thiserror::Error;

/// Errors raised by term manipulation, searches and property checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed term: {0}")]
    MalformedTerm(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("level mismatch: expected level {expected}, {detail}")]
    LevelMismatch { expected: usize, detail: String },

    #[error("operands belong to different semirings ({0} vs {1})")]
    MixedSemirings(String, String),

    #[error("search space too large: {count} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { count: u128, cap: u128 },

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("leaf `{0}` is not in the algebra's carrier")]
    CarrierMismatch(String),

    #[error("index {index} out of range for level {level}")]
    IndexOutOfRange { index: usize, level: usize },

    #[error(
        "witnesses are not composable: target {first_target} differs from source {second_source}"
    )]
    IncomposableWitnesses {
        first_target: String,
        second_source: String,
    },

    #[error("pushforwards disagree: {0}")]
    MarginalMismatch(String),

    #[error("invalid horn: {0}")]
    InvalidHorn(String),

    #[error("square does not commute: {0}")]
    NonCommutingSquare(String),

    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
