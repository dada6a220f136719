//! Seeded random generation of class assignments, key rings, and the three
//! graph families (key graph, on/off channel graph, disk channel graph).
//!
//! All randomness flows through [`RandomStream`], a `(master_seed,
//! substream_id)` pair. The generator family is fixed: ChaCha12, keyed by a
//! SplitMix64 expansion of the pair. Identical pairs produce identical sample
//! sequences on every platform and under any thread count, so experiments are
//! reproducible across builds as long as these two algorithms stay fixed.

use std::collections::HashMap;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::theory::{validate_mu, NetworkProfile};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministically mixes a label into a seed, for carving independent
/// per-cell or per-trial seeds out of one master seed.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    mix64(seed ^ mix64(label.wrapping_mul(GOLDEN_GAMMA) ^ 0xE703_7ED1_A0B4_28DB))
}

/// Handle to a reproducible random substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStream {
    master_seed: u64,
    substream_id: u64,
}

impl RandomStream {
    /// Root stream of a master seed (substream 0).
    pub fn new(master_seed: u64) -> Self {
        RandomStream {
            master_seed,
            substream_id: 0,
        }
    }

    pub fn with_substream(master_seed: u64, substream_id: u64) -> Self {
        RandomStream {
            master_seed,
            substream_id,
        }
    }

    /// Child stream for `label`. Children with distinct labels are
    /// statistically independent; the derivation is pure mixing, so it can be
    /// replayed from any thread.
    pub fn substream(&self, label: u64) -> Self {
        RandomStream {
            master_seed: self.master_seed,
            substream_id: derive_seed(self.substream_id, label),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn substream_id(&self) -> u64 {
        self.substream_id
    }

    /// Starts the sample sequence of this stream. Every call returns an
    /// identical sequence.
    pub fn sequence(&self) -> StreamSequence {
        let mut state = self.master_seed ^ mix64(self.substream_id ^ 0xA076_1D64_78BD_642F);
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        StreamSequence {
            rng: ChaCha12Rng::from_seed(seed),
        }
    }
}

/// Draws from one [`RandomStream`].
pub struct StreamSequence {
    rng: ChaCha12Rng,
}

impl StreamSequence {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 significant bits.
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, bound)`, unbiased (Lemire widening multiply).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let mut product = u128::from(self.next_u64()) * u128::from(bound);
        let mut low = product as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                product = u128::from(self.next_u64()) * u128::from(bound);
                low = product as u64;
            }
        }
        (product >> 64) as u64
    }
}

/// Per-node class indices and key rings drawn for one network realization.
///
/// Classes are 0-based indices into the profile; keys are 1-based labels in
/// `1..=pool`. Each ring is sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyRingAssignment {
    classes: Vec<usize>,
    rings: Vec<Vec<u64>>,
    pool: u64,
}

impl KeyRingAssignment {
    /// Builds an assignment from explicit rings, checking that every ring is
    /// sorted, duplicate-free, and within `1..=pool`.
    pub fn new(classes: Vec<usize>, rings: Vec<Vec<u64>>, pool: u64) -> Result<Self> {
        if classes.len() != rings.len() {
            return Err(Error::ClassCountMismatch {
                mu: classes.len(),
                rings: rings.len(),
            });
        }
        if pool == 0 {
            return Err(Error::ZeroPool);
        }
        for ring in &rings {
            if ring.windows(2).any(|w| w[1] <= w[0])
                || ring.iter().any(|&key| key == 0 || key > pool)
            {
                return Err(Error::MalformedRing);
            }
        }
        Ok(KeyRingAssignment {
            classes,
            rings,
            pool,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn ring(&self, node: usize) -> &[u64] {
        &self.rings[node]
    }

    pub fn pool(&self) -> u64 {
        self.pool
    }
}

/// Node positions on the half-open unit square `[0, 1)^2`, torus units.
#[derive(Debug, Clone, PartialEq)]
pub struct Positions {
    coords: Vec<(f64, f64)>,
}

impl Positions {
    pub fn new(coords: Vec<(f64, f64)>) -> Result<Self> {
        for &(x, y) in &coords {
            if !(0.0..1.0).contains(&x) || !(0.0..1.0).contains(&y) {
                return Err(Error::ProbabilityOutOfRange(if x < 0.0 || x >= 1.0 {
                    x
                } else {
                    y
                }));
            }
        }
        Ok(Positions { coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }
}

/// Draws `n` independent class indices from the mix `mu`.
pub fn sample_classes(n: usize, mu: &[f64], stream: &RandomStream) -> Result<Vec<usize>> {
    validate_mu(mu)?;
    let mut cumulative = Vec::with_capacity(mu.len());
    let mut total = 0.0;
    for &m in mu {
        total += m;
        cumulative.push(total);
    }
    let mut sequence = stream.sequence();
    Ok((0..n)
        .map(|_| {
            // Scale by the realized total so the top class absorbs the
            // normalization slack instead of falling out of range.
            let u = sequence.next_f64() * total;
            cumulative
                .iter()
                .position(|&c| u < c)
                .unwrap_or(mu.len() - 1)
        })
        .collect())
}

/// Uniform `k`-subset of `{0, .., pool-1}` by partial Fisher–Yates over a
/// sparse swap map; O(k) time and memory, no rejection.
fn sample_subset(sequence: &mut StreamSequence, pool: u64, k: u64) -> Vec<u64> {
    let mut swaps: HashMap<u64, u64> = HashMap::with_capacity(k as usize);
    let mut picked = Vec::with_capacity(k as usize);
    for t in 0..k {
        let j = t + sequence.next_below(pool - t);
        let value_at_j = swaps.get(&j).copied().unwrap_or(j);
        let value_at_t = swaps.get(&t).copied().unwrap_or(t);
        swaps.insert(j, value_at_t);
        picked.push(value_at_j);
    }
    picked
}

/// Draws a key ring for every node: node `x` receives a uniform random
/// `k`-subset of the pool, with `k` set by its class, independently across
/// nodes.
pub fn sample_key_rings(
    classes: &[usize],
    profile: &NetworkProfile,
    stream: &RandomStream,
) -> Result<KeyRingAssignment> {
    let ring_sizes = profile.ring_sizes();
    for &class in classes {
        if class >= ring_sizes.len() {
            return Err(Error::ClassOutOfRange {
                class,
                classes: ring_sizes.len(),
            });
        }
    }
    let pool = profile.pool();
    let mut sequence = stream.sequence();
    let rings = classes
        .iter()
        .map(|&class| {
            let mut ring = sample_subset(&mut sequence, pool, ring_sizes[class]);
            for key in &mut ring {
                *key += 1; // keys are labeled 1..=pool
            }
            ring.sort_unstable();
            ring
        })
        .collect();
    Ok(KeyRingAssignment {
        classes: classes.to_vec(),
        rings,
        pool,
    })
}

/// Pools at most this large get bitset rings in the pairwise builder.
const BITSET_POOL_LIMIT: u64 = 1 << 16;

/// Builds the key graph: an edge wherever two rings share at least one key.
///
/// Uses a key-to-holders inverted index, which outruns pairwise ring
/// comparison by orders of magnitude in the sparse regime `k << pool`.
/// [`build_key_graph_pairwise`] is the direct route kept for cross-checking.
pub fn build_key_graph(assignment: &KeyRingAssignment) -> Graph {
    let n = assignment.len();
    let mut graph = Graph::empty(n);
    let mut holders: HashMap<u64, Vec<usize>> = HashMap::new();
    for node in 0..n {
        for &key in assignment.ring(node) {
            holders.entry(key).or_default().push(node);
        }
    }
    for nodes in holders.values() {
        for (i, &x) in nodes.iter().enumerate() {
            for &y in &nodes[i + 1..] {
                graph.add_edge(x, y);
            }
        }
    }
    graph
}

/// Pairwise key-graph construction: tests every node pair for ring
/// intersection, via per-node pool bitsets for small pools and sorted-slice
/// merging otherwise.
pub fn build_key_graph_pairwise(assignment: &KeyRingAssignment) -> Graph {
    let n = assignment.len();
    let mut graph = Graph::empty(n);
    if assignment.pool() <= BITSET_POOL_LIMIT {
        let words = (assignment.pool() as usize + 1).div_ceil(64);
        let masks: Vec<Vec<u64>> = (0..n)
            .map(|node| {
                let mut mask = vec![0u64; words];
                for &key in assignment.ring(node) {
                    mask[key as usize / 64] |= 1 << (key % 64);
                }
                mask
            })
            .collect();
        for x in 0..n {
            for y in (x + 1)..n {
                if masks[x].iter().zip(&masks[y]).any(|(a, b)| a & b != 0) {
                    graph.add_edge(x, y);
                }
            }
        }
    } else {
        for x in 0..n {
            for y in (x + 1)..n {
                if sorted_intersects(assignment.ring(x), assignment.ring(y)) {
                    graph.add_edge(x, y);
                }
            }
        }
    }
    graph
}

fn sorted_intersects(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Samples the on/off channel graph: every unordered pair is an edge
/// independently with probability `alpha`.
pub fn sample_er(n: usize, alpha: f64, stream: &RandomStream) -> Result<Graph> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ProbabilityOutOfRange(alpha));
    }
    let mut sequence = stream.sequence();
    let mut graph = Graph::empty(n);
    for x in 0..n {
        for y in (x + 1)..n {
            if sequence.next_f64() < alpha {
                graph.add_edge(x, y);
            }
        }
    }
    Ok(graph)
}

/// Uniform node positions on `[0, 1)^2`.
pub fn sample_positions(n: usize, stream: &RandomStream) -> Positions {
    let mut sequence = stream.sequence();
    Positions {
        coords: (0..n)
            .map(|_| (sequence.next_f64(), sequence.next_f64()))
            .collect(),
    }
}

/// Disk channel graph from fixed positions: an edge wherever the toroidal
/// distance is strictly below `rho`. Per-coordinate displacement wraps as
/// `min(|d|, 1 - |d|)`.
pub fn rgg_from_positions(positions: &Positions, rho: f64) -> Result<Graph> {
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::RhoOutOfRange(rho));
    }
    let coords = positions.coords();
    let n = coords.len();
    let rho_squared = rho * rho;
    let mut graph = Graph::empty(n);
    for x in 0..n {
        for y in (x + 1)..n {
            let mut dx = (coords[x].0 - coords[y].0).abs();
            dx = dx.min(1.0 - dx);
            let mut dy = (coords[x].1 - coords[y].1).abs();
            dy = dy.min(1.0 - dy);
            if dx * dx + dy * dy < rho_squared {
                graph.add_edge(x, y);
            }
        }
    }
    Ok(graph)
}

/// Samples positions and builds the disk channel graph. On the torus the
/// marginal edge probability is exactly `pi * rho^2`.
pub fn sample_rgg(n: usize, rho: f64, stream: &RandomStream) -> Result<Graph> {
    rgg_from_positions(&sample_positions(n, stream), rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_replay_identically() {
        let stream = RandomStream::new(42).substream(7);
        let a: Vec<u64> = (0..32).map(|_| stream.sequence().next_u64()).collect();
        let first: Vec<u64> = {
            let mut s = stream.sequence();
            (0..32).map(|_| s.next_u64()).collect()
        };
        let second: Vec<u64> = {
            let mut s = stream.sequence();
            (0..32).map(|_| s.next_u64()).collect()
        };
        assert_eq!(first, second);
        assert_eq!(a[0], first[0]);
    }

    #[test]
    fn distinct_labels_distinct_streams() {
        let root = RandomStream::new(1);
        let a = root.substream(0).sequence().next_u64();
        let b = root.substream(1).sequence().next_u64();
        assert_ne!(a, b);
        let c = RandomStream::new(2).substream(0).sequence().next_u64();
        assert_ne!(a, c);
    }

    #[test]
    fn next_below_stays_in_range() {
        let mut sequence = RandomStream::new(9).sequence();
        for bound in [1u64, 2, 3, 10, 1000, u64::MAX] {
            for _ in 0..200 {
                assert!(sequence.next_below(bound) < bound);
            }
        }
    }

    #[test]
    fn degenerate_class_mix() {
        let stream = RandomStream::new(5);
        assert_eq!(sample_classes(5, &[1.0], &stream).unwrap(), vec![0; 5]);
        assert!(sample_classes(0, &[1.0], &stream).unwrap().is_empty());
        assert!(sample_classes(3, &[0.7, 0.4], &stream).is_err());
    }

    #[test]
    fn class_frequencies_match_mix() {
        let n = 100_000;
        let classes = sample_classes(n, &[0.5, 0.5], &RandomStream::new(11)).unwrap();
        let count = classes.iter().filter(|&&c| c == 0).count() as f64;
        let standard_error = (0.25 / n as f64).sqrt();
        assert!((count / n as f64 - 0.5).abs() < 3.0 * standard_error);
    }

    #[test]
    fn full_pool_ring_is_forced() {
        let profile = NetworkProfile::homogeneous(4, 4).unwrap();
        let assignment = sample_key_rings(&[0, 0], &profile, &RandomStream::new(3)).unwrap();
        assert_eq!(assignment.ring(0), &[1, 2, 3, 4]);
        assert_eq!(assignment.ring(1), &[1, 2, 3, 4]);

        let tiny = NetworkProfile::homogeneous(1, 1).unwrap();
        let assignment = sample_key_rings(&[0, 0, 0], &tiny, &RandomStream::new(3)).unwrap();
        assert!((0..3).all(|x| assignment.ring(x) == [1]));
    }

    #[test]
    fn ring_sizes_follow_classes() {
        let profile = NetworkProfile::new(vec![0.5, 0.5], vec![3, 7], 100).unwrap();
        let classes = vec![0, 1, 0, 1, 1];
        let assignment = sample_key_rings(&classes, &profile, &RandomStream::new(17)).unwrap();
        for (node, &class) in classes.iter().enumerate() {
            assert_eq!(assignment.ring(node).len() as u64, [3u64, 7][class]);
            let ring = assignment.ring(node);
            assert!(ring.windows(2).all(|w| w[0] < w[1]), "sorted, no dups");
            assert!(ring.iter().all(|&k| (1..=100).contains(&k)));
        }
    }

    #[test]
    fn key_inclusion_is_uniform() {
        // Marginal inclusion probability of each key is k / pool.
        let profile = NetworkProfile::homogeneous(3, 10).unwrap();
        let n = 100_000;
        let classes = vec![0; n];
        let assignment = sample_key_rings(&classes, &profile, &RandomStream::new(23)).unwrap();
        let mut counts = [0u64; 10];
        for node in 0..n {
            for &key in assignment.ring(node) {
                counts[(key - 1) as usize] += 1;
            }
        }
        let expected = 0.3;
        let standard_error = (expected * (1.0 - expected) / n as f64).sqrt();
        for &count in &counts {
            let frequency = count as f64 / n as f64;
            assert!(
                (frequency - expected).abs() < 3.0 * standard_error,
                "frequency {frequency}"
            );
        }
    }

    #[test]
    fn key_graph_by_inspection() {
        let assignment = KeyRingAssignment::new(vec![0, 0], vec![vec![1], vec![1]], 5).unwrap();
        let g = build_key_graph(&assignment);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let assignment = KeyRingAssignment::new(vec![0, 0], vec![vec![1], vec![2]], 5).unwrap();
        assert_eq!(build_key_graph(&assignment).edge_count(), 0);

        let assignment = KeyRingAssignment::new(
            vec![0, 0, 0],
            vec![vec![1, 2], vec![2, 3], vec![4, 5]],
            5,
        )
        .unwrap();
        let g = build_key_graph(&assignment);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn key_graph_routes_agree() {
        let profile = NetworkProfile::new(vec![0.4, 0.6], vec![4, 9], 200).unwrap();
        for seed in 0..20 {
            let stream = RandomStream::new(seed);
            let classes = sample_classes(150, profile.mu(), &stream.substream(0)).unwrap();
            let assignment =
                sample_key_rings(&classes, &profile, &stream.substream(1)).unwrap();
            let fast = build_key_graph(&assignment);
            let direct = build_key_graph_pairwise(&assignment);
            assert_eq!(fast, direct, "seed {seed}");
        }
    }

    #[test]
    fn key_graph_routes_agree_large_pool() {
        // Pool past the bitset limit exercises the sorted-merge path.
        let profile = NetworkProfile::homogeneous(40, (1 << 16) + 1).unwrap();
        let stream = RandomStream::new(77);
        let classes = vec![0; 60];
        let assignment = sample_key_rings(&classes, &profile, &stream).unwrap();
        assert_eq!(
            build_key_graph(&assignment),
            build_key_graph_pairwise(&assignment)
        );
    }

    #[test]
    fn er_extremes() {
        let stream = RandomStream::new(1);
        assert_eq!(sample_er(40, 0.0, &stream).unwrap().edge_count(), 0);
        assert_eq!(
            sample_er(40, 1.0, &stream).unwrap().edge_count(),
            40 * 39 / 2
        );
        assert!(sample_er(4, 1.5, &stream).is_err());
    }

    #[test]
    fn er_edge_frequency() {
        let n = 500;
        let alpha = 0.2;
        let trials = 100;
        let pairs = (n * (n - 1) / 2) as f64;
        let mut total_edges = 0usize;
        for seed in 0..trials {
            total_edges += sample_er(n, alpha, &RandomStream::new(seed))
                .unwrap()
                .edge_count();
        }
        let mean = total_edges as f64 / trials as f64;
        let standard_error = (pairs * alpha * (1.0 - alpha) / trials as f64).sqrt();
        assert!((mean - alpha * pairs).abs() < 3.0 * standard_error);
    }

    #[test]
    fn rgg_wraps_around_the_torus() {
        let positions = Positions::new(vec![(0.1, 0.1), (0.9, 0.1)]).unwrap();
        let g = rgg_from_positions(&positions, 0.25).unwrap();
        assert!(g.has_edge(0, 1), "wrapped distance 0.2 < 0.25");

        let positions = Positions::new(vec![(0.1, 0.1), (0.5, 0.1)]).unwrap();
        let g = rgg_from_positions(&positions, 0.25).unwrap();
        assert!(!g.has_edge(0, 1), "distance 0.4 >= 0.25");

        let positions = Positions::new(vec![(0.3, 0.7), (0.3, 0.7)]).unwrap();
        let g = rgg_from_positions(&positions, 0.01).unwrap();
        assert!(g.has_edge(0, 1), "coincident points are adjacent");
    }

    #[test]
    fn rgg_rejects_bad_radius() {
        let positions = Positions::new(vec![(0.0, 0.0)]).unwrap();
        assert!(rgg_from_positions(&positions, 0.5).is_err());
        assert!(rgg_from_positions(&positions, 0.0).is_err());
    }

    #[test]
    fn rgg_determinism_and_small_cases() {
        let stream = RandomStream::new(99);
        let a = sample_rgg(50, 0.2, &stream).unwrap();
        let b = sample_rgg(50, 0.2, &stream).unwrap();
        assert_eq!(a, b);
        assert_eq!(sample_rgg(1, 0.2, &stream).unwrap().edge_count(), 0);
        assert_eq!(sample_rgg(0, 0.2, &stream).unwrap().vertex_count(), 0);
    }

    #[test]
    fn rgg_edge_frequency_matches_matched_alpha() {
        // At rho = sqrt(0.2 / pi) the pair-connection probability is 0.2.
        let rho = crate::theory::matched_rho(0.2).unwrap();
        let mut edges = 0usize;
        let mut pairs = 0usize;
        for seed in 0..50 {
            let g = sample_rgg(64, rho, &RandomStream::new(seed)).unwrap();
            edges += g.edge_count();
            pairs += 64 * 63 / 2;
        }
        let frequency = edges as f64 / pairs as f64;
        let standard_error = (0.2 * 0.8 / pairs as f64).sqrt();
        // Pair outcomes within one sample are dependent; allow extra slack.
        assert!((frequency - 0.2).abs() < 6.0 * standard_error);
    }

    #[test]
    fn positions_stay_in_unit_square() {
        let positions = sample_positions(10_000, &RandomStream::new(4));
        assert!(positions
            .coords()
            .iter()
            .all(|&(x, y)| (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y)));
        assert!(Positions::new(vec![(1.0, 0.2)]).is_err());
    }
}
