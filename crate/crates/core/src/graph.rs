//! Undirected simple graphs over vertices `0..n` with bitset adjacency rows,
//! plus isolated-node, connectivity, and component analysis.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Undirected simple graph stored as a symmetric bit matrix, one bitset row
/// per vertex. No self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    row_words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        let row_words = n.div_ceil(WORD_BITS);
        Graph {
            n,
            row_words,
            bits: vec![0; n * row_words],
        }
    }

    /// Graph on `n` vertices with every pair adjacent.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for x in 0..n {
            for y in (x + 1)..n {
                g.add_edge(x, y);
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Inserts the undirected edge `{x, y}`. Self-loops are rejected.
    pub fn add_edge(&mut self, x: usize, y: usize) {
        assert!(x != y, "self-loops are not allowed");
        assert!(x < self.n && y < self.n, "vertex out of range");
        self.bits[x * self.row_words + y / WORD_BITS] |= 1 << (y % WORD_BITS);
        self.bits[y * self.row_words + x / WORD_BITS] |= 1 << (x % WORD_BITS);
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        if x == y || x >= self.n || y >= self.n {
            return false;
        }
        self.bits[x * self.row_words + y / WORD_BITS] & (1 << (y % WORD_BITS)) != 0
    }

    pub fn degree(&self, x: usize) -> usize {
        self.row(x).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = self.bits.iter().map(|w| w.count_ones() as usize).sum();
        total / 2
    }

    fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.row_words..(x + 1) * self.row_words]
    }

    /// Edges as `(u, v)` with `u < v`, ascending in `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.row(u)
                .iter()
                .enumerate()
                .flat_map(move |(word_index, &word)| {
                    // Mask off v <= u so each edge appears once.
                    let base = word_index * WORD_BITS;
                    let masked = if base + WORD_BITS <= u + 1 {
                        0
                    } else if base <= u {
                        word & !((1u64 << ((u + 1) - base)) - 1)
                    } else {
                        word
                    };
                    BitIter { word: masked, base }.map(move |v| (u, v))
                })
        })
    }

    /// Edgewise intersection. Both graphs must have the same vertex count.
    pub fn intersection(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a & b)
            .collect();
        Ok(Graph {
            n: self.n,
            row_words: self.row_words,
            bits,
        })
    }

    /// Number of degree-0 vertices.
    pub fn count_isolated(&self) -> usize {
        (0..self.n)
            .filter(|&x| self.row(x).iter().all(|&w| w == 0))
            .count()
    }

    /// True when every vertex pair is joined by a path. Graphs on 0 or 1
    /// vertices count as connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(self.n);
        for (u, v) in self.edges() {
            uf.union(u, v);
        }
        uf.component_count() == 1
    }

    /// Full component breakdown.
    pub fn components(&self) -> ComponentSummary {
        let mut uf = UnionFind::new(self.n);
        for (u, v) in self.edges() {
            uf.union(u, v);
        }
        let mut sizes = Vec::new();
        for x in 0..self.n {
            if uf.find(x) == x {
                sizes.push(uf.size_of(x));
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));

        let isolated_count = self.count_isolated();
        let connected = self.n <= 1 || sizes.len() == 1;
        let giant_fraction = if self.n == 0 {
            0.0
        } else {
            sizes.first().copied().unwrap_or(0) as f64 / self.n as f64
        };
        ComponentSummary {
            sizes,
            isolated_count,
            connected,
            giant_fraction,
        }
    }

    /// Writes the edge list, one `u v` pair per line with `u < v`, sorted
    /// ascending. This is the interchange format used by `--dump-graph`.
    pub fn write_edge_list<W: std::io::Write>(&self, writer: &mut W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(writer, "{u} {v}")?;
        }
        Ok(())
    }
}

struct BitIter {
    word: u64,
    base: usize,
}

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let bit = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + bit)
    }
}

/// Component structure of a graph: size multiset (descending), degree-0
/// count, connectivity, and the largest component's share of all vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSummary {
    pub sizes: Vec<usize>,
    pub isolated_count: usize,
    pub connected: bool,
    pub giant_fraction: f64,
}

impl ComponentSummary {
    pub fn giant_size(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }
}

/// Disjoint-set forest with path compression and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut current = x;
        while self.parent[current] != root {
            let next = self.parent[current];
            self.parent[current] = root;
            current = next;
        }
        root
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let mut a = self.find(x);
        let mut b = self.find(y);
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.size[a] += self.size[b];
        self.parent[b] = a;
        self.components -= 1;
    }

    pub fn size_of(&self, root: usize) -> usize {
        self.size[root]
    }

    pub fn component_count(&self) -> usize {
        self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    fn two_triangles() -> Graph {
        let mut g = Graph::empty(6);
        for &(u, v) in &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            g.add_edge(u, v);
        }
        g
    }

    #[test]
    fn isolated_counts() {
        assert_eq!(Graph::complete(5).count_isolated(), 0);
        assert_eq!(Graph::empty(7).count_isolated(), 7);
        assert_eq!(path(4).count_isolated(), 0);
    }

    #[test]
    fn connectivity() {
        assert!(path(10).is_connected());
        assert!(!two_triangles().is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(Graph::empty(0).is_connected());
        assert!(!Graph::empty(2).is_connected());
    }

    #[test]
    fn component_summaries() {
        let summary = two_triangles().components();
        assert_eq!(summary.sizes, vec![3, 3]);
        assert_eq!(summary.giant_fraction, 0.5);
        assert!(!summary.connected);
        assert_eq!(summary.isolated_count, 0);

        let mut star = Graph::empty(5);
        for leaf in 1..5 {
            star.add_edge(0, leaf);
        }
        let summary = star.components();
        assert_eq!(summary.sizes, vec![5]);
        assert!(summary.connected);
        assert_eq!(summary.isolated_count, 0);

        let summary = Graph::empty(3).components();
        assert_eq!(summary.sizes, vec![1, 1, 1]);
        assert_eq!(summary.isolated_count, 3);
        assert!(!summary.connected);
        assert!((summary.giant_fraction - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn component_sizes_partition_vertices() {
        let g = two_triangles();
        assert_eq!(g.components().sizes.iter().sum::<usize>(), 6);
        let g = path(9);
        assert_eq!(g.components().sizes.iter().sum::<usize>(), 9);
    }

    #[test]
    fn intersection_identity_and_absorption() {
        let g = two_triangles();
        let with_complete = g.intersection(&Graph::complete(6)).unwrap();
        assert_eq!(with_complete, g);
        let with_empty = g.intersection(&Graph::empty(6)).unwrap();
        assert_eq!(with_empty.edge_count(), 0);
        assert!(matches!(
            g.intersection(&Graph::empty(5)),
            Err(Error::VertexCountMismatch { .. })
        ));
    }

    #[test]
    fn intersection_by_edges() {
        let mut g1 = Graph::empty(3);
        g1.add_edge(0, 1);
        g1.add_edge(1, 2);
        let mut g2 = Graph::empty(3);
        g2.add_edge(1, 2);
        g2.add_edge(0, 2);
        let meet = g1.intersection(&g2).unwrap();
        assert_eq!(meet.edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn edge_iteration_covers_upper_triangle_once() {
        // Vertex counts that straddle word boundaries.
        for n in [1, 2, 63, 64, 65, 130] {
            let g = Graph::complete(n);
            let edges: Vec<_> = g.edges().collect();
            assert_eq!(edges.len(), n * (n - 1) / 2, "n = {n}");
            for window in edges.windows(2) {
                assert!(window[0] < window[1]);
            }
            assert!(edges.iter().all(|&(u, v)| u < v));
            assert_eq!(g.edge_count(), edges.len());
        }
    }

    #[test]
    fn dump_format_is_sorted_pairs() {
        let mut g = Graph::empty(70);
        g.add_edge(65, 2);
        g.add_edge(0, 69);
        g.add_edge(0, 3);
        let mut buffer = Vec::new();
        g.write_edge_list(&mut buffer).unwrap();
        assert_eq!(String::from_utf8(buffer).unwrap(), "0 3\n0 69\n2 65\n");
    }

    #[test]
    fn connected_graph_has_no_isolated_vertices() {
        let g = path(12);
        assert!(g.is_connected());
        assert_eq!(g.count_isolated(), 0);
    }
}
