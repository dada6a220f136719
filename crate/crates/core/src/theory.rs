//! Closed-form probabilities, thresholds, and analytic bound checks for the
//! heterogeneous key predistribution scheme.
//!
//! Two nodes holding rings of `k_i` and `k_j` keys drawn without replacement
//! from a pool of `P` keys share at least one key with probability
//!
//! ```text
//! p_ij = 1 - C(P - k_i, k_j) / C(P, k_j)
//! ```
//!
//! (exactly 1 when `k_i + k_j > P`). All binomial ratios here are evaluated as
//! running products of factors `(P - k_i - t) / (P - t)`, which is stable in
//! double precision for pools well beyond 10^4; no factorials are ever formed.

use crate::error::{Error, Result};

/// Tolerance on `sum(mu) == 1`; class mixes come from decimal config files.
const MU_SUM_TOLERANCE: f64 = 1e-9;

/// Validates a class mix: nonempty, strictly positive, summing to 1.
pub(crate) fn validate_mu(mu: &[f64]) -> Result<()> {
    if mu.is_empty() {
        return Err(Error::EmptyProfile);
    }
    for (index, &value) in mu.iter().enumerate() {
        if !(value > 0.0) {
            return Err(Error::NonPositiveMu { index, value });
        }
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 1.0).abs() > MU_SUM_TOLERANCE {
        return Err(Error::MuNotNormalized { sum });
    }
    Ok(())
}

/// Parameters of the heterogeneous key predistribution scheme: a class mix,
/// per-class key ring sizes, and the key pool size.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkProfile {
    mu: Vec<f64>,
    ring_sizes: Vec<u64>,
    pool: u64,
}

/// Non-fatal conditions reported by profile validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileWarning {
    /// The largest ring exceeds half the pool. Edge probabilities stay exact
    /// up to `k_i + k_j <= pool`, but the scaling regime assumes `k_r <= P/2`.
    LargestRingAboveHalfPool { ring: u64, pool: u64 },
}

impl std::fmt::Display for ProfileWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProfileWarning::LargestRingAboveHalfPool { ring, pool } => write!(
                f,
                "largest ring size {ring} exceeds half the pool size {pool}"
            ),
        }
    }
}

impl NetworkProfile {
    /// Builds a fully validated profile. Ring sizes must be positive,
    /// nondecreasing, and bounded by the pool; `mu` must be a probability
    /// vector matching the ring count.
    pub fn new(mu: Vec<f64>, ring_sizes: Vec<u64>, pool: u64) -> Result<Self> {
        let profile = Self::new_lenient(mu, ring_sizes, pool)?;
        for (index, window) in profile.ring_sizes.windows(2).enumerate() {
            if window[1] < window[0] {
                return Err(Error::RingOrderViolation {
                    index: index + 1,
                    value: window[1],
                    previous: window[0],
                });
            }
        }
        Ok(profile)
    }

    /// Builds a profile without the nondecreasing-ring check, so diagnostic
    /// paths (scaling reports, the `check` command) can evaluate misordered
    /// configurations instead of rejecting them outright.
    pub fn new_lenient(mu: Vec<f64>, ring_sizes: Vec<u64>, pool: u64) -> Result<Self> {
        validate_mu(&mu)?;
        if mu.len() != ring_sizes.len() {
            return Err(Error::ClassCountMismatch {
                mu: mu.len(),
                rings: ring_sizes.len(),
            });
        }
        if pool == 0 {
            return Err(Error::ZeroPool);
        }
        for &ring in &ring_sizes {
            if ring == 0 {
                return Err(Error::ZeroRingSize);
            }
            if ring > pool {
                return Err(Error::RingExceedsPool { ring, pool });
            }
        }
        Ok(Self {
            mu,
            ring_sizes,
            pool,
        })
    }

    /// Single-class profile (the classical scheme).
    pub fn homogeneous(ring_size: u64, pool: u64) -> Result<Self> {
        Self::new(vec![1.0], vec![ring_size], pool)
    }

    pub fn class_count(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn ring_sizes(&self) -> &[u64] {
        &self.ring_sizes
    }

    pub fn pool(&self) -> u64 {
        self.pool
    }

    /// True when ring sizes are sorted smallest class first.
    pub fn is_nondecreasing(&self) -> bool {
        self.ring_sizes.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn warnings(&self) -> Vec<ProfileWarning> {
        let mut warnings = Vec::new();
        let largest = *self.ring_sizes.iter().max().expect("nonempty");
        if largest * 2 > self.pool {
            warnings.push(ProfileWarning::LargestRingAboveHalfPool {
                ring: largest,
                pool: self.pool,
            });
        }
        warnings
    }
}

/// Channel availability model between node pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// Every pair has an independent live channel with probability `alpha`.
    OnOff { alpha: f64 },
    /// Nodes are placed uniformly on the unit torus; a channel exists when
    /// the toroidal distance is below `rho`.
    Disk { rho: f64 },
}

impl ChannelModel {
    pub fn on_off(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(ChannelModel::OnOff { alpha })
    }

    pub fn disk(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 0.5) {
            return Err(Error::RhoOutOfRange(rho));
        }
        Ok(ChannelModel::Disk { rho })
    }

    /// Pair-connection probability of the channel: `alpha` itself for on/off
    /// channels, `pi * rho^2` for disk channels (exact on the torus).
    pub fn alpha(&self) -> f64 {
        match *self {
            ChannelModel::OnOff { alpha } => alpha,
            ChannelModel::Disk { rho } => matched_alpha(rho),
        }
    }
}

/// Key-sharing probability for rings of `k_i` and `k_j` keys from a pool of
/// `pool` keys. Returns exactly 1.0 when the rings cannot avoid overlapping.
pub fn edge_prob(k_i: u64, k_j: u64, pool: u64) -> Result<f64> {
    validate_ring_pair(k_i, k_j, pool)?;
    if k_i + k_j > pool {
        return Ok(1.0);
    }
    Ok(1.0 - miss_ratio(k_i, k_j, pool))
}

fn validate_ring_pair(k_i: u64, k_j: u64, pool: u64) -> Result<()> {
    if pool == 0 {
        return Err(Error::ZeroPool);
    }
    if k_i == 0 || k_j == 0 {
        return Err(Error::ZeroRingSize);
    }
    for k in [k_i, k_j] {
        if k > pool {
            return Err(Error::RingExceedsPool { ring: k, pool });
        }
    }
    Ok(())
}

/// `C(pool - k_i, k_j) / C(pool, k_j)`: the probability that the two rings
/// are disjoint. Evaluated over the smaller ring so the result is bit-for-bit
/// symmetric in `(k_i, k_j)`. Requires `k_i + k_j <= pool`.
fn miss_ratio(k_i: u64, k_j: u64, pool: u64) -> f64 {
    debug_assert!(k_i + k_j <= pool);
    let (large, small) = if k_i >= k_j { (k_i, k_j) } else { (k_j, k_i) };
    let mut ratio = 1.0_f64;
    for t in 0..small {
        ratio *= (pool - large - t) as f64 / (pool - t) as f64;
    }
    ratio
}

/// Pairwise probabilities and derived means for a profile under a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedProbabilities {
    classes: usize,
    p: Vec<f64>,
    lambda: Vec<f64>,
    capital_lambda: Vec<f64>,
    k_avg: f64,
}

impl DerivedProbabilities {
    /// Key-sharing probability between a class-`i` and a class-`j` node.
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.classes + j]
    }

    /// Mean key-sharing probability for a class-`i` node against a random
    /// partner: `lambda_i = sum_j mu_j p_ij`.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Mean secure-edge probability including the channel:
    /// `Lambda_i = alpha * lambda_i`.
    pub fn capital_lambda(&self) -> &[f64] {
        &self.capital_lambda
    }

    /// Mean ring size over the class mix.
    pub fn k_avg(&self) -> f64 {
        self.k_avg
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }
}

/// Evaluates the pairwise probability matrix, the per-class means, and the
/// mean ring size for a profile under the given channel model.
pub fn derive(profile: &NetworkProfile, channel: &ChannelModel) -> DerivedProbabilities {
    let r = profile.class_count();
    let mu = profile.mu();
    let rings = profile.ring_sizes();
    let pool = profile.pool();
    let alpha = channel.alpha();

    let mut p = vec![0.0; r * r];
    for i in 0..r {
        for j in i..r {
            // Profile construction guarantees 1 <= k <= pool.
            let value = edge_prob(rings[i], rings[j], pool).expect("validated profile");
            p[i * r + j] = value;
            p[j * r + i] = value;
        }
    }

    let lambda: Vec<f64> = (0..r)
        .map(|i| (0..r).map(|j| mu[j] * p[i * r + j]).sum())
        .collect();
    let capital_lambda: Vec<f64> = lambda.iter().map(|l| alpha * l).collect();
    let k_avg = mu
        .iter()
        .zip(rings)
        .map(|(m, &k)| m * k as f64)
        .sum::<f64>();

    DerivedProbabilities {
        classes: r,
        p,
        lambda,
        capital_lambda,
        k_avg,
    }
}

fn lambda1(mu: &[f64], ring_sizes: &[u64], pool: u64) -> Result<f64> {
    let k1 = ring_sizes[0];
    let mut value = 0.0;
    for (j, &k) in ring_sizes.iter().enumerate() {
        value += mu[j] * edge_prob(k1, k, pool)?;
    }
    Ok(value)
}

/// Map from the smallest ring size to the full ring-size vector, one entry
/// per class.
#[derive(Debug, Clone, PartialEq)]
pub enum RingRule {
    /// `k_i = k1 + offset_i`; the first offset must be 0.
    Offsets(Vec<u64>),
    /// `k_i = round(factor_i * k1)`; the first factor must be 1.
    Factors(Vec<f64>),
}

impl RingRule {
    pub fn offsets(offsets: Vec<u64>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::EmptyRingRule);
        }
        if offsets[0] != 0 {
            return Err(Error::RingRuleBase);
        }
        if offsets.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::RingRuleOrder);
        }
        Ok(RingRule::Offsets(offsets))
    }

    pub fn factors(factors: Vec<f64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyRingRule);
        }
        if factors[0] != 1.0 {
            return Err(Error::RingRuleBase);
        }
        if factors.windows(2).any(|w| w[1] < w[0] || !w[1].is_finite()) {
            return Err(Error::RingRuleOrder);
        }
        Ok(RingRule::Factors(factors))
    }

    pub fn class_count(&self) -> usize {
        match self {
            RingRule::Offsets(v) => v.len(),
            RingRule::Factors(v) => v.len(),
        }
    }

    /// Ring sizes produced for a given smallest ring size.
    pub fn ring_sizes(&self, k1: u64) -> Vec<u64> {
        match self {
            RingRule::Offsets(offsets) => offsets.iter().map(|o| k1 + o).collect(),
            RingRule::Factors(factors) => factors
                .iter()
                .map(|f| (f * k1 as f64).round() as u64)
                .collect(),
        }
    }
}

/// Result of the critical smallest-ring-size search.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalK1 {
    /// Minimal k1 whose mean edge probability clears the threshold.
    pub k1: u64,
    /// `lambda_1` evaluated at that k1.
    pub lambda1: f64,
    /// The threshold `log n / (n alpha)`.
    pub threshold: f64,
    /// Ring sizes produced by the rule at that k1.
    pub ring_sizes: Vec<u64>,
}

/// Smallest integer `k1 >= 1` such that the profile produced by `rule`
/// satisfies `lambda_1 > log n / (n alpha)` (strict). Scans upward from 1;
/// the scan ends at the largest k1 the rule keeps within the pool.
pub fn critical_k1(
    n: u64,
    alpha: f64,
    pool: u64,
    mu: &[f64],
    rule: &RingRule,
) -> Result<CriticalK1> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    validate_mu(mu)?;
    if mu.len() != rule.class_count() {
        return Err(Error::ClassCountMismatch {
            mu: mu.len(),
            rings: rule.class_count(),
        });
    }
    if pool == 0 {
        return Err(Error::ZeroPool);
    }

    let threshold = (n as f64).ln() / (n as f64 * alpha);
    for k1 in 1..=pool {
        let sizes = rule.ring_sizes(k1);
        if sizes.iter().any(|&k| k > pool) {
            // Ring sizes only grow with k1; nothing larger can be valid.
            break;
        }
        if sizes.iter().any(|&k| k == 0) {
            continue;
        }
        let lambda1 = lambda1(mu, &sizes, pool)?;
        if lambda1 > threshold {
            return Ok(CriticalK1 {
                k1,
                lambda1,
                threshold,
                ring_sizes: sizes,
            });
        }
    }
    Err(Error::NoSolution)
}

/// Disk radius whose torus pair-connection probability `pi * rho^2` equals
/// `alpha`. Fails for `alpha >= pi/4`, where the matching radius would reach
/// the torus half-width and border effects would reappear.
pub fn matched_rho(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if alpha >= std::f64::consts::FRAC_PI_4 {
        return Err(Error::NoMatchingRadius(alpha));
    }
    Ok((alpha / std::f64::consts::PI).sqrt())
}

/// Pair-connection probability `pi * rho^2` of a disk channel on the torus.
pub fn matched_alpha(rho: f64) -> f64 {
    std::f64::consts::PI * rho * rho
}

/// Edge-occupation probability above which the key graph, thinned edge by
/// edge, stays connected with high probability: `log n / (n * lambda1)`.
pub fn critical_transmissibility(n: u64, lambda1: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    if !(lambda1 > 0.0) {
        return Err(Error::NonPositiveLambda);
    }
    Ok((n as f64).ln() / (n as f64 * lambda1))
}

/// Finite-`n` diagnostics for the scaling regime of the connectivity law.
///
/// `omega_ratio` and `c_n` report raw values rather than pass/fail because
/// their asymptotic conditions are not decidable at a single `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    /// Ring sizes nondecreasing with the largest at most half the pool.
    pub ordering_ok: bool,
    /// Pool grows at least linearly: `pool >= sigma * n`.
    pub pool_ok: bool,
    /// `p_11 * n * alpha`; must diverge with `n` for the connectivity law.
    pub omega_ratio: f64,
    /// `Lambda_1 * n / log n`; the law separates at the limit value 1.
    pub c_n: f64,
}

/// Evaluates the scaling diagnostics for a profile at network size `n` and
/// channel probability `alpha`. Purely diagnostic; accepts lenient profiles.
pub fn check_scaling(
    n: u64,
    profile: &NetworkProfile,
    alpha: f64,
    sigma: f64,
) -> Result<ScalingReport> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }

    let largest = *profile.ring_sizes().iter().max().expect("nonempty");
    let ordering_ok = profile.is_nondecreasing() && largest * 2 <= profile.pool();
    let pool_ok = profile.pool() as f64 >= sigma * n as f64;

    let k1 = profile.ring_sizes()[0];
    let p11 = edge_prob(k1, k1, profile.pool())?;
    let lambda1 = lambda1(profile.mu(), profile.ring_sizes(), profile.pool())?;
    let omega_ratio = p11 * n as f64 * alpha;
    let c_n = alpha * lambda1 * n as f64 / (n as f64).ln();

    Ok(ScalingReport {
        ordering_ok,
        pool_ok,
        omega_ratio,
        c_n,
    })
}

/// Outcome of checking the analytic bounds on the key-sharing probability.
///
/// `None` marks a bound whose own precondition failed; the remaining bounds
/// are still evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `1 - exp(-k_i k_j / pool) <= p <= k_i k_j / (pool - k_i)`.
    pub sandwich: Option<bool>,
    /// `C(pool - ceil(a k_i), k_j) / C(pool, k_j) <= (C(pool - k_i, k_j) / C(pool, k_j))^a`.
    pub combinatorial: Option<bool>,
    /// `C(pool - k_i, k_j) / C(pool, k_j) <= exp(-k_i k_j / pool)`.
    pub exponential: Option<bool>,
    /// `p / (k_i k_j / pool)`, monitoring the asymptotic equivalence.
    pub equivalence_ratio: Option<f64>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        [self.sandwich, self.combinatorial, self.exponential]
            .iter()
            .all(|b| *b == Some(true))
    }
}

/// Checks the sandwich, combinatorial, and exponential bounds for a ring pair,
/// with exponent `a >= 1` for the combinatorial bound. All sides are computed
/// with the same product-form evaluator as [`edge_prob`].
pub fn verify_bounds(k_i: u64, k_j: u64, pool: u64, a: f64) -> Result<BoundReport> {
    validate_ring_pair(k_i, k_j, pool)?;
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::ExponentBelowOne(a));
    }

    let product = (k_i * k_j) as f64;
    let (sandwich, exponential, equivalence_ratio) = if k_i + k_j <= pool {
        let miss = miss_ratio(k_i, k_j, pool);
        let p = 1.0 - miss;
        let lower = 1.0 - (-product / pool as f64).exp();
        let upper = product / (pool - k_i) as f64;
        (
            Some(lower <= p && p <= upper),
            Some(miss <= (-product / pool as f64).exp()),
            Some(p / (product / pool as f64)),
        )
    } else {
        (None, None, None)
    };

    let scaled = (a * k_i as f64).ceil() as u64;
    let combinatorial = if k_i + k_j <= pool && scaled + k_j <= pool {
        let lhs = miss_ratio(scaled, k_j, pool);
        let rhs = miss_ratio(k_i, k_j, pool).powf(a);
        Some(lhs <= rhs)
    } else {
        None
    };

    Ok(BoundReport {
        sandwich,
        combinatorial,
        exponential,
        equivalence_ratio,
    })
}
