//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("profile must define at least one class")]
    EmptyProfile,
    #[error("class mix and ring sizes differ in length ({mu} vs {rings})")]
    ClassCountMismatch { mu: usize, rings: usize },
    #[error("class probability mu[{index}] = {value} is not positive")]
    NonPositiveMu { index: usize, value: f64 },
    #[error("class probabilities sum to {sum}, expected 1 within 1e-9")]
    MuNotNormalized { sum: f64 },
    #[error("key pool size must be positive")]
    ZeroPool,
    #[error("key ring size must be positive")]
    ZeroRingSize,
    #[error("key ring size {ring} exceeds pool size {pool}")]
    RingExceedsPool { ring: u64, pool: u64 },
    #[error("key ring must be sorted, duplicate-free, and within 1..=pool")]
    MalformedRing,
    #[error("ring sizes must be nondecreasing, but k[{index}] = {value} follows {previous}")]
    RingOrderViolation {
        index: usize,
        value: u64,
        previous: u64,
    },
    #[error("channel probability alpha = {0} must lie in (0, 1]")]
    AlphaOutOfRange(f64),
    #[error("edge probability {0} must lie in [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("disk radius rho = {0} must lie in (0, 0.5) torus units")]
    RhoOutOfRange(f64),
    #[error("alpha = {0} has no matching disk radius below 0.5 (requires alpha < pi/4)")]
    NoMatchingRadius(f64),
    #[error("node count {0} must be at least 2")]
    TooFewNodes(u64),
    #[error("mean edge probability lambda1 must be positive")]
    NonPositiveLambda,
    #[error("bound exponent a = {0} must be at least 1")]
    ExponentBelowOne(f64),
    #[error("sigma = {0} must be positive")]
    NonPositiveSigma(f64),
    #[error("ring rule is empty")]
    EmptyRingRule,
    #[error("ring rule must map the smallest class to k1 itself (first offset 0 / first factor 1)")]
    RingRuleBase,
    #[error("ring rule offsets/factors must be nondecreasing")]
    RingRuleOrder,
    #[error("no k1 satisfies the connectivity threshold for this pool and ring rule")]
    NoSolution,
    #[error("class vector entry {class} is out of range for {classes} classes")]
    ClassOutOfRange { class: usize, classes: usize },
    #[error("graphs have different vertex counts ({left} vs {right})")]
    VertexCountMismatch { left: usize, right: usize },
    #[error("trial count must be at least 1")]
    ZeroTrials,
}
