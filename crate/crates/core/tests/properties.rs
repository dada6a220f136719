//! Property tests for the closed-form layer, the graph analysis, and the
//! samplers. Exhaustive or brute-force oracles live here, independent of the
//! implementations they check.

use proptest::prelude::*;

use keygraph::graph::Graph;
use keygraph::sampler::{
    build_key_graph, build_key_graph_pairwise, sample_classes, sample_er, sample_key_rings,
    RandomStream,
};
use keygraph::theory::{
    derive, edge_prob, matched_alpha, matched_rho, verify_bounds, ChannelModel, NetworkProfile,
};

/// Brute-force key-sharing probability: enumerate every pair of k-subsets of
/// a pool of `pool` keys (as bitmasks) and count intersecting pairs. Only
/// feasible for tiny pools; that is the point.
fn enumerated_edge_prob(k_i: u32, k_j: u32, pool: u32) -> f64 {
    let subsets = |k: u32| -> Vec<u32> {
        (0u32..1 << pool)
            .filter(|mask| mask.count_ones() == k)
            .collect()
    };
    let rings_i = subsets(k_i);
    let rings_j = subsets(k_j);
    let mut intersecting = 0u64;
    for &a in &rings_i {
        for &b in &rings_j {
            if a & b != 0 {
                intersecting += 1;
            }
        }
    }
    intersecting as f64 / (rings_i.len() as f64 * rings_j.len() as f64)
}

#[test]
fn edge_prob_equals_enumeration_for_all_tiny_pools() {
    for pool in 1..=8u32 {
        for k_i in 1..=pool {
            for k_j in 1..=pool {
                let exact = edge_prob(k_i as u64, k_j as u64, pool as u64).unwrap();
                let enumerated = enumerated_edge_prob(k_i, k_j, pool);
                assert!(
                    (exact - enumerated).abs() <= 1e-12,
                    "({k_i}, {k_j}, {pool}): {exact} vs {enumerated}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn edge_prob_is_symmetric(k_i in 1u64..=300, k_j in 1u64..=300, pool in 1u64..=100_000) {
        prop_assume!(k_i <= pool && k_j <= pool);
        let a = edge_prob(k_i, k_j, pool).unwrap();
        let b = edge_prob(k_j, k_i, pool).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert_eq!(a == 1.0, k_i + k_j > pool);
    }

    #[test]
    fn edge_prob_is_monotone(k_i in 1u64..=200, k_j in 1u64..=200, pool in 2u64..=50_000) {
        prop_assume!(k_i + 1 <= pool && k_j <= pool);
        let base = edge_prob(k_i, k_j, pool).unwrap();
        // Nondecreasing in each ring size.
        prop_assert!(edge_prob(k_i + 1, k_j, pool).unwrap() >= base);
        prop_assert!(edge_prob(k_i, (k_j + 1).min(pool), pool).unwrap() >= base);
        // Nonincreasing in the pool.
        prop_assert!(edge_prob(k_i, k_j, pool + 1).unwrap() <= base);
    }

    #[test]
    fn matched_radius_round_trips(rho in 1e-6f64..0.499_999) {
        let recovered = matched_rho(matched_alpha(rho)).unwrap();
        prop_assert!((recovered - rho).abs() <= 1e-12);
        prop_assert!((matched_alpha(recovered) - matched_alpha(rho)).abs() <= 1e-12);
    }

    #[test]
    fn analytic_bounds_hold(
        k_i in 1u64..=100,
        k_j in 1u64..=100,
        a in 1.0f64..=4.0,
        pool_slack in 0u64..=99_000,
    ) {
        // Pool large enough for every bound's precondition.
        let pool = ((a * k_i as f64).ceil() as u64 + k_j).max(k_i + k_j) + pool_slack;
        prop_assume!(pool <= 100_000);
        let report = verify_bounds(k_i, k_j, pool, a).unwrap();
        prop_assert_eq!(report.sandwich, Some(true));
        prop_assert_eq!(report.combinatorial, Some(true));
        prop_assert_eq!(report.exponential, Some(true));
        let ratio = report.equivalence_ratio.unwrap();
        prop_assert!(ratio > 0.0 && ratio <= 1.0 + 1e-12);
    }

    #[test]
    fn lambda_ordering_follows_ring_ordering(
        mu_raw in prop::collection::vec(0.05f64..1.0, 1..=5),
        ring_steps in prop::collection::vec(0u64..=40, 1..=5),
        k1 in 1u64..=60,
        pool_slack in 0u64..=5_000,
    ) {
        let classes = mu_raw.len().min(ring_steps.len());
        let total: f64 = mu_raw[..classes].iter().sum();
        let mu: Vec<f64> = mu_raw[..classes].iter().map(|m| m / total).collect();
        let mut rings = Vec::with_capacity(classes);
        let mut k = k1;
        for step in &ring_steps[..classes] {
            k += step;
            rings.push(k);
        }
        let pool = rings.iter().max().unwrap() + pool_slack.max(1);
        let profile = NetworkProfile::new(mu, rings, pool).unwrap();
        let derived = derive(&profile, &ChannelModel::OnOff { alpha: 0.37 });
        for window in derived.lambda().windows(2) {
            prop_assert!(window[0] <= window[1]);
        }
        for (lambda, capital) in derived.lambda().iter().zip(derived.capital_lambda()) {
            prop_assert!((capital - 0.37 * lambda).abs() <= 1e-15);
        }
    }
}

/// Breadth-first component oracle, deliberately separate from the union-find
/// path used by `Graph::components`.
fn bfs_component_sizes(graph: &Graph) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for v in 0..n {
                if graph.has_edge(u, v) && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

#[test]
fn union_find_agrees_with_bfs_on_random_graphs() {
    for seed in 0..1000u64 {
        let n = 2 + (seed % 40) as usize;
        let alpha = ((seed % 17) as f64 + 1.0) / 20.0;
        let graph = sample_er(n, alpha, &RandomStream::new(seed)).unwrap();
        let summary = graph.components();
        let oracle = bfs_component_sizes(&graph);
        assert_eq!(summary.sizes, oracle, "seed {seed}");
        assert_eq!(summary.connected, oracle.len() == 1, "seed {seed}");
        assert_eq!(graph.is_connected(), oracle.len() == 1, "seed {seed}");
    }
}

fn arbitrary_graph() -> impl Strategy<Value = Graph> {
    (2usize..40, any::<u64>(), 0.0f64..=1.0).prop_map(|(n, seed, alpha)| {
        sample_er(n, alpha, &RandomStream::new(seed)).unwrap()
    })
}

proptest! {
    #[test]
    fn component_sizes_partition_vertices(graph in arbitrary_graph()) {
        let summary = graph.components();
        prop_assert_eq!(summary.sizes.iter().sum::<usize>(), graph.vertex_count());
        prop_assert_eq!(summary.connected, summary.sizes.len() == 1);
        if summary.connected && graph.vertex_count() >= 2 {
            prop_assert_eq!(summary.isolated_count, 0);
        }
    }

    #[test]
    fn adding_an_edge_is_monotone(graph in arbitrary_graph(), pick in any::<u64>()) {
        let n = graph.vertex_count();
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !graph.has_edge(u, v))
            .collect();
        prop_assume!(!missing.is_empty());
        let (u, v) = missing[(pick % missing.len() as u64) as usize];
        let before = graph.components();
        let mut larger = graph.clone();
        larger.add_edge(u, v);
        let after = larger.components();
        prop_assert!(after.giant_fraction >= before.giant_fraction);
        prop_assert!(after.isolated_count <= before.isolated_count);
    }

    #[test]
    fn intersection_is_commutative_and_idempotent(
        g1 in arbitrary_graph(),
        seed in any::<u64>(),
        alpha in 0.0f64..=1.0,
    ) {
        let g2 = sample_er(g1.vertex_count(), alpha, &RandomStream::new(seed)).unwrap();
        let ab = g1.intersection(&g2).unwrap();
        let ba = g2.intersection(&g1).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(&ab.intersection(&g2).unwrap(), &ab);
        prop_assert_eq!(&g1.intersection(&g1).unwrap(), &g1);
    }

    #[test]
    fn key_graph_routes_agree_on_random_assignments(
        seed in any::<u64>(),
        n in 1usize..=200,
        k1 in 1u64..=12,
        spread in 0u64..=10,
    ) {
        let pool = (k1 + spread) * 4;
        let profile = NetworkProfile::new(
            vec![0.5, 0.5],
            vec![k1, k1 + spread],
            pool,
        ).unwrap();
        let stream = RandomStream::new(seed);
        let classes = sample_classes(n, profile.mu(), &stream.substream(0)).unwrap();
        let assignment = sample_key_rings(&classes, &profile, &stream.substream(1)).unwrap();
        prop_assert_eq!(
            build_key_graph(&assignment),
            build_key_graph_pairwise(&assignment)
        );
    }

    #[test]
    fn sampling_replays_identically(seed in any::<u64>(), n in 0usize..=80) {
        let profile = NetworkProfile::new(vec![0.3, 0.7], vec![3, 5], 64).unwrap();
        let stream = RandomStream::new(seed);
        let classes = sample_classes(n, profile.mu(), &stream.substream(0)).unwrap();
        prop_assert_eq!(
            &classes,
            &sample_classes(n, profile.mu(), &stream.substream(0)).unwrap()
        );
        let rings = sample_key_rings(&classes, &profile, &stream.substream(1)).unwrap();
        prop_assert_eq!(
            &rings,
            &sample_key_rings(&classes, &profile, &stream.substream(1)).unwrap()
        );
        let er = sample_er(n, 0.4, &stream.substream(2)).unwrap();
        prop_assert_eq!(&er, &sample_er(n, 0.4, &stream.substream(2)).unwrap());
    }
}
