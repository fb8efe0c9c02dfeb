//! Problem instances and the crate-wide error type.

use num_bigint::BigUint;

/// Arithmetic used for the value tables.
///
/// `Binary64` is the default and is what large instances should use.
/// `ExactRational` computes every table entry as an exact fraction; it is
/// accepted for any instance the machine can hold, but is only practical for
/// moderate `n` (oracle comparisons, exact invariant checks).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithmeticMode {
    #[default]
    Binary64,
    ExactRational,
}

/// An instance of the multi-returning secretary problem: `n` distinct
/// candidates arrive in uniformly random order, each present as `m`
/// identical copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    /// Copies per candidate (`m >= 1`).
    pub m: usize,
    /// Number of distinct candidates (`n >= 1`).
    pub n: usize,
    /// Arithmetic used for the tables.
    pub mode: ArithmeticMode,
}

impl ProblemSpec {
    pub fn new(m: usize, n: usize, mode: ArithmeticMode) -> Result<Self, Error> {
        if m < 1 {
            return Err(Error::InvalidCopyCount(m));
        }
        if n < 1 {
            return Err(Error::InvalidCandidateCount(n));
        }
        Ok(Self { m, n, mode })
    }

    pub fn binary64(m: usize, n: usize) -> Result<Self, Error> {
        Self::new(m, n, ArithmeticMode::Binary64)
    }

    pub fn exact(m: usize, n: usize) -> Result<Self, Error> {
        Self::new(m, n, ArithmeticMode::ExactRational)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("copy count m must be at least 1 (got {0})")]
    InvalidCopyCount(usize),

    #[error("candidate count n must be at least 1 (got {0})")]
    InvalidCandidateCount(usize),

    #[error("threshold {k} out of range 1..={n}")]
    ThresholdOutOfRange { k: usize, n: usize },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("instance has {count} distinct arrangements, more than the enumeration cap {cap}")]
    InstanceTooLarge { count: BigUint, cap: u64 },

    #[error("copy count m must be at least 2 for this operation (got {0})")]
    CopyCountTooSmall(usize),

    #[error("series order must be at least 2 (got {0})")]
    OrderTooSmall(usize),

    #[error("series solver hit a singular coefficient step at order {order}")]
    SeriesStepSingular { order: usize },

    #[error(
        "coefficient bound |a_j| <= 1 fails for y_{index} at order {order} (|a| = {magnitude}); \
         truncation tail not certified"
    )]
    CoefficientBoundViolated {
        index: usize,
        order: usize,
        magnitude: f64,
    },

    #[error("evaluation point {x} outside the certified interval [0.25, 1]")]
    EvaluationOutOfDomain { x: f64 },

    #[error("no sign change found for the fixed point of y_{m} on [0.01, 1]")]
    NoBracket { m: usize },

    #[error(
        "requested tolerance {tol:e} not reachable at series order {order} \
         (certified tail bound {tail:e} dominates)"
    )]
    ToleranceUnreachable { tol: f64, order: usize, tail: f64 },

    #[error("component index {i} out of range 1..={m}")]
    ComponentOutOfRange { i: usize, m: usize },

    #[error("self-check failed: {0}")]
    SelfCheck(String),
}
