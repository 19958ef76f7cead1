//! Undirected simple graphs stored as adjacency row bitsets.
//!
//! Vertices are `0..n`. Every row is a bitset of `words` 64-bit words; bits at
//! indices `>= n` are always clear, the matrix is symmetric and the diagonal is
//! empty. All query results are plain values and the graph itself is immutable
//! once built.

mod edgelist;
mod enumerate;
mod generate;
pub mod graph6;
mod metrics;

use std::fmt;

use thiserror::Error;

pub use edgelist::{parse_edge_list, write_edge_list};
pub use enumerate::{
    connected_graph_count_brute_force, enumerate_connected, enumerate_connected_masks, graph_from_mask, pair_count,
    ConnectedGraphs, MAX_ENUMERATION_ORDER,
};
pub use generate::{generate, Family};
pub use metrics::{
    bfs_distances, bipartiteness, count_walks, diameter, distances_and_diameter, is_connected, structure_flags,
    Bipartiteness, Diameter, DistanceMatrix, GraphStats,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("edge ({v}, {v}) is a self-loop")]
    SelfLoop { v: usize },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameter { family: &'static str, reason: String },
    #[error("built-in enumeration supports 1 <= n <= {max}, got n = {n}; supply a graph6 corpus file instead")]
    EnumerationRange { n: usize, max: usize },
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let words = n.div_ceil(64);
        Ok(Self {
            n,
            words,
            rows: vec![0; n * words],
        })
    }

    /// Builds a graph from an edge list. Duplicate pairs collapse to one edge.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub(crate) fn clear_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of 64-bit words per adjacency row.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Copy of the graph with edge `uv` removed. Removing a non-edge is a no-op.
    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        let mut h = self.clone();
        if u < self.n && v < self.n && u != v {
            h.clear_edge(u, v);
        }
        h
    }

    /// Same edges on `n` vertices, `n >= self.order()`; the new vertices are isolated.
    pub fn padded(&self, n: usize) -> Self {
        assert!(n >= self.n);
        let mut h = Self::empty(n).expect("n >= 1");
        for (u, v) in self.edges() {
            h.insert_edge(u, v);
        }
        h
    }

    /// Subgraph on the same vertex set keeping exactly the edges for which `keep` is true.
    pub fn spanning_subgraph(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Self {
        let mut h = Self::empty(self.n).expect("n >= 1");
        for (u, v) in self.edges() {
            if keep(u, v) {
                h.insert_edge(u, v);
            }
        }
        h
    }

    /// True when every edge of `self` is an edge of `other` (same order required).
    pub fn is_edge_subset_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency_f64(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (u, v) in self.edges() {
            a[u * self.n + v] = 1.0;
            a[v * self.n + u] = 1.0;
        }
        a
    }

    pub fn to_graph6(&self) -> String {
        graph6::encode(self)
    }

    pub fn from_graph6(s: &str) -> Result<Self, GraphError> {
        graph6::decode(s)
    }

    /// Checks the representation invariants; used by tests and after decoding.
    pub fn check_invariants(&self) -> bool {
        let tail_ok = (0..self.n).all(|v| {
            let row = self.row(v);
            let spare = self.words * 64 - self.n;
            spare == 0 || row[self.words - 1] >> (64 - spare) == 0
        });
        let loops = (0..self.n).any(|v| self.has_edge(v, v));
        let symmetric = (0..self.n).all(|u| self.neighbors(u).all(|v| self.has_edge(v, u)));
        tail_ok && !loops && symmetric
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {})", self.n, self.to_graph6())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_graph6())
    }
}

/// Iterates set bit positions of a word slice.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_triangle_and_path() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert!(k3.check_invariants());
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(p3.edge_count(), 2);
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(2, &[(0, 0)]), Err(GraphError::SelfLoop { v: 0 }));
        assert_eq!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { u: 0, v: 2, n: 2 })
        );
        assert_eq!(Graph::empty(0), Err(GraphError::Empty));
    }

    #[test]
    fn wide_rows_keep_invariants() {
        let edges: Vec<_> = (0..129).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(130, &edges).unwrap();
        assert_eq!(g.words(), 3);
        assert!(g.check_invariants());
        assert_eq!(g.neighbors(64).collect::<Vec<_>>(), vec![63, 65]);
        let h = g.without_edge(63, 64);
        assert_eq!(h.edge_count(), 128);
        assert!(h.is_edge_subset_of(&g));
        assert!(!g.is_edge_subset_of(&h));
    }
}
