use thiserror::Error;

/// Errors raised by distribution construction, transformations and functionals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative probability {value} at cell {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1 within 1e-9")]
    Normalization { sum: f64 },

    #[error("shape mismatch: expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("axis `{0}` has no labels")]
    EmptyAxis(String),

    #[error("axis `{axis}` repeats label `{label}`")]
    DuplicateLabel { axis: String, label: String },

    #[error("not a bijection: {0}")]
    NotABijection(String),

    #[error("keep set is empty")]
    EmptyKeepSet,

    #[error("axis index {index} out of range for {count} axes")]
    BadAxisIndex { index: usize, count: usize },

    #[error("axis `{axis}` has no label `{label}`")]
    BadLabel { axis: String, label: String },

    #[error("conditioning event `{axis}` = `{label}` has probability zero")]
    ZeroConditioningEvent { axis: String, label: String },

    #[error("axis name `{0}` already present")]
    AxisNameCollision(String),

    #[error("statistic map is incomplete: {0}")]
    IncompleteMap(String),

    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("distributions are defined over different axes")]
    AxisMismatch,

    #[error("axis blocks overlap or are empty: {0}")]
    OverlappingBlocks(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid branch tree: {0}")]
    InvalidTree(String),

    #[error("baseline correlation {0:e} is below the 1e-12 threshold")]
    NoBaselineCorrelation(f64),

    #[error("statistic blocks do not match the partition: {0}")]
    BlockMismatch(String),

    #[error("theta block has {0} joint labels, expected exactly 2")]
    NotBinaryTheta(usize),

    #[error("marginal probability of observation {0} is zero")]
    ZeroMarginal(String),

    #[error(
        "constraint {index} is infeasible: target {target} outside attainable range [{min}, {max}]"
    )]
    InfeasibleConstraint {
        index: usize,
        target: f64,
        min: f64,
        max: f64,
    },

    #[error("solver did not converge after {iterations} iterations (max residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
