//! Exhaustive enumeration of labeled connected graphs by edge mask.
//!
//! Bit `k` of a mask selects the `k`-th vertex pair in graph6 column order:
//! `(0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...`.

use std::ops::Range;

use super::{Graph, GraphError};

pub const MAX_ENUMERATION_ORDER: usize = 7;

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

/// Rows as plain `u64` masks; `n <= 64` assumed by callers.
fn rows_from_mask(pairs: &[(usize, usize)], n: usize, mask: u64, rows: &mut [u64]) {
    rows[..n].fill(0);
    let mut m = mask;
    while m != 0 {
        let k = m.trailing_zeros() as usize;
        m &= m - 1;
        let (i, j) = pairs[k];
        rows[i] |= 1 << j;
        rows[j] |= 1 << i;
    }
}

fn rows_connected(rows: &[u64], n: usize) -> bool {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= rows[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == full
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n).expect("n >= 1");
    for (k, &(i, j)) in pairs(n).iter().enumerate() {
        if mask >> k & 1 == 1 {
            g.insert_edge(i, j);
        }
    }
    g
}

/// Streams every labeled connected graph on `n` vertices whose mask lies in `masks`.
pub struct ConnectedGraphs {
    n: usize,
    pairs: Vec<(usize, usize)>,
    masks: Range<u64>,
    rows: [u64; MAX_ENUMERATION_ORDER],
}

impl Iterator for ConnectedGraphs {
    type Item = (u64, Graph);

    fn next(&mut self) -> Option<Self::Item> {
        for mask in self.masks.by_ref() {
            rows_from_mask(&self.pairs, self.n, mask, &mut self.rows);
            if rows_connected(&self.rows, self.n) {
                let mut g = Graph::empty(self.n).expect("n >= 1");
                for v in 0..self.n {
                    g.rows[v] = self.rows[v];
                }
                return Some((mask, g));
            }
        }
        None
    }
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if (1..=MAX_ENUMERATION_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(GraphError::EnumerationRange {
            n,
            max: MAX_ENUMERATION_ORDER,
        })
    }
}

/// Every labeled connected graph on `n` vertices, exactly once, in increasing mask order.
pub fn enumerate_connected(n: usize) -> Result<impl Iterator<Item = Graph>, GraphError> {
    Ok(enumerate_connected_masks(n, 0..1u64 << pair_count(n))?.map(|(_, g)| g))
}

/// Connected graphs restricted to a sub-range of the mask space, for partitioned sweeps.
pub fn enumerate_connected_masks(n: usize, masks: Range<u64>) -> Result<ConnectedGraphs, GraphError> {
    check_order(n)?;
    let end = masks.end.min(1u64 << pair_count(n));
    Ok(ConnectedGraphs {
        n,
        pairs: pairs(n),
        masks: masks.start..end,
        rows: [0; MAX_ENUMERATION_ORDER],
    })
}

/// Independent count: builds every masked graph as a `Graph` and tests connectivity
/// with a plain depth-first search. Slow; meant as a cross-check for small `n`.
pub fn connected_graph_count_brute_force(n: usize) -> u64 {
    let all = pairs(n);
    let mut count = 0;
    for mask in 0..1u64 << all.len() {
        let edges: Vec<_> = all
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..n {
                if g.has_edge(v, u) && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        count += seen.iter().all(|&s| s) as u64;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::metrics::is_connected;

    #[test]
    fn small_counts_match_brute_force() {
        let expected = [1, 1, 4, 38, 728];
        for n in 1..=5 {
            let fast = enumerate_connected(n).unwrap().count() as u64;
            assert_eq!(fast, expected[n - 1], "n = {n}");
            assert_eq!(fast, connected_graph_count_brute_force(n), "n = {n}");
        }
    }

    #[test]
    fn emitted_graphs_are_connected_and_distinct() {
        let graphs: Vec<_> = enumerate_connected(4).unwrap().collect();
        assert!(graphs.iter().all(|g| is_connected(g) && g.check_invariants()));
        let mut codes: Vec<_> = graphs.iter().map(Graph::to_graph6).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), 38);
    }

    #[test]
    fn mask_order_matches_graph6_bits() {
        // Bits 0 and 2 select (0,1) and (1,2): the path 0-1-2.
        let g = graph_from_mask(3, 0b101);
        assert_eq!(g.to_graph6(), "Bg");
    }

    #[test]
    fn partitions_cover_the_mask_space() {
        let total = 1u64 << pair_count(5);
        let parts: usize = (0..4)
            .map(|p| {
                enumerate_connected_masks(5, p * total / 4..(p + 1) * total / 4)
                    .unwrap()
                    .count()
            })
            .sum();
        assert_eq!(parts, 728);
        assert!(matches!(
            enumerate_connected(8),
            Err(GraphError::EnumerationRange { n: 8, .. })
        ));
        assert!(enumerate_connected(0).is_err());
    }
}
