use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("at most {max} points are supported, got {got}")]
    TooManyPoints { got: usize, max: usize },
    #[error("coordinates must be strictly increasing: a_{index} = {value} does not exceed its predecessor")]
    NotStrictlyIncreasing { index: usize, value: String },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("height vector has {got} entries, expected {expected}")]
    HeightLength { got: usize, expected: usize },
    #[error("height vector is not generic: <h, alpha> = 0 on circuit ({p},{q},{r})")]
    NonGenericHeight { p: usize, q: usize, r: usize },
    #[error("flip {0} is not available in this tiling")]
    FlipUnavailable(String),
    #[error("corrupt tiling: {0}")]
    CorruptTiling(String),
    #[error("enumeration cap exceeded: n = {n} > cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("strong separation violated between {0} and {1}")]
    NotSeparated(String, String),
    #[error("level {level} out of range for n = {n}")]
    LevelOutOfRange { level: usize, n: usize },
    #[error("node {0} is not in the graph")]
    UnknownNode(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}
