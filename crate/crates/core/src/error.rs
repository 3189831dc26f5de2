use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid weight sequence: {0}")]
    InvalidWeight(String),
    #[error("weight table has no entry for index {index} (last index {last})")]
    WeightIndexOutOfRange { index: usize, last: usize },
    #[error("partition block count m = {m} exceeds n = {n}")]
    PartitionRange { m: usize, n: usize },
    #[error("order {order} exceeds the configured cap {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("jet base mismatch: outer jet based at {outer}, inner jet has value {inner}")]
    BaseMismatch { outer: Complex64, inner: Complex64 },
    #[error("jet order shortfall: need {needed}, have {available}")]
    JetOrder { needed: usize, available: usize },
    #[error("empty jet")]
    EmptyJet,
    #[error("pole {0} lies in the domain")]
    PoleInDomain(Complex64),
    #[error("distance to the domain must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("point {0} is not in the domain")]
    PointOutsideDomain(Complex64),
    #[error("evaluation failed at {0}")]
    Evaluation(Complex64),
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("not a self-map: sampled value {value} at {at} leaves the domain")]
    NotSelfMap { value: Complex64, at: Complex64 },
    #[error("iterate degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("root finder did not converge for polynomial with coefficients {coeffs:?}")]
    RootFinder { coeffs: Vec<Complex64> },
    #[error("fixed-point equation vanishes identically (identity map)")]
    DegenerateFixedPoints,
    #[error("Denjoy-Wolff iteration: {0}")]
    DenjoyWolff(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("construction failed at index {index}: {reason}")]
    Construction { index: usize, reason: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid sampling parameters: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
