use thiserror::Error;

/// Probability sums (lottery entries, branch children, priors) must land
/// within this distance of 1.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Everything that can go wrong while building or analyzing a model.
///
/// Scalar values are reported as `f64` regardless of the engine's scalar type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("loss amplification k must be >= 1, got {k}")]
    LossAmplificationTooSmall { k: f64 },

    #[error("surprise exponent must be > 0, got {exponent}")]
    NonPositiveExponent { exponent: f64 },

    #[error("custom surprise table {reason}")]
    InvalidCustomTable { reason: String },

    #[error("lottery needs at least one entry")]
    EmptyLottery,

    #[error("branch needs at least one child")]
    EmptyBranch,

    #[error("probability {p} is negative")]
    NegativeProbability { p: f64 },

    #[error("probability {p} exceeds 1")]
    ProbabilityAboveOne { p: f64 },

    #[error("probabilities sum to {sum}, expected 1 within {PROBABILITY_SUM_TOLERANCE:e}")]
    ProbabilitySum { sum: f64 },

    #[error("parameter {name} out of domain: {reason}")]
    ParameterDomain { name: &'static str, reason: String },

    #[error("prior must be symmetric: entries {low} and {high} differ ({left} vs {right})")]
    AsymmetricPrior { low: usize, high: usize, left: f64, right: f64 },

    #[error("prior must list {expected} state weights, got {got}")]
    PriorLength { expected: usize, got: usize },

    #[error("unknown scenario {name:?}")]
    UnknownScenario { name: String },

    #[error("scenario has no option labeled {label:?}")]
    UnknownOption { label: String },

    #[error("unknown scenario parameter {key:?}")]
    UnknownParameter { key: String },

    #[error("surprise has no sign change on ({lo}, {hi}); no switch probability")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("bisection stalled before reaching the convergence targets")]
    BisectionStalled,

    #[error("grid must be non-empty and strictly ascending")]
    BadGrid,

    #[error("malformed table: {reason}")]
    CsvShape { reason: String },
}
