//! Distances, connectivity, bipartiteness certificates and walk counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{bits, Graph};

/// Graph diameter. A disconnected graph has no finite diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diameter {
    Finite(u32),
    Disconnected,
}

impl Diameter {
    pub fn finite(self) -> Option<u32> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Disconnected => None,
        }
    }
}

/// All-pairs hop distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

const UNREACHABLE: u32 = u32::MAX;

impl DistanceMatrix {
    /// `None` when `v` is unreachable from `u`.
    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        match self.dist[u * self.n + v] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

/// Proof of (non-)bipartiteness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartiteness {
    /// Proper two-coloring, one entry (0 or 1) per vertex.
    Bipartite { coloring: Vec<u8> },
    /// An odd cycle, listed as its vertices in order; its length is `cycle.len()`.
    NonBipartite { odd_cycle: Vec<usize> },
}

impl Bipartiteness {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartiteness::Bipartite { .. })
    }

    /// Re-checks the certificate against `g`.
    pub fn verify(&self, g: &Graph) -> bool {
        match self {
            Bipartiteness::Bipartite { coloring } => {
                coloring.len() == g.order() && g.edges().all(|(u, v)| coloring[u] != coloring[v])
            }
            Bipartiteness::NonBipartite { odd_cycle } => {
                let k = odd_cycle.len();
                k % 2 == 1 && (0..k).all(|i| g.has_edge(odd_cycle[i], odd_cycle[(i + 1) % k]))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub is_regular: bool,
    pub is_connected: bool,
    pub bipartition: Bipartiteness,
    pub diameter: Diameter,
}

/// BFS from `src`, writing hop counts into `out` (length n).
fn bfs_into(g: &Graph, src: usize, out: &mut [u32]) {
    out.fill(UNREACHABLE);
    let w = g.words();
    let mut seen = vec![0u64; w];
    let mut frontier = vec![0u64; w];
    let mut next = vec![0u64; w];
    seen[src / 64] |= 1 << (src % 64);
    frontier[src / 64] |= 1 << (src % 64);
    out[src] = 0;
    let mut depth = 0;
    loop {
        next.fill(0);
        for v in bits(&frontier) {
            for (nx, r) in next.iter_mut().zip(g.row(v)) {
                *nx |= r;
            }
        }
        let mut any = false;
        for (nx, s) in next.iter_mut().zip(seen.iter_mut()) {
            *nx &= !*s;
            *s |= *nx;
            any |= *nx != 0;
        }
        if !any {
            break;
        }
        depth += 1;
        for v in bits(&next) {
            out[v] = depth;
        }
        std::mem::swap(&mut frontier, &mut next);
    }
}

/// Hop distances from a single source; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, src: usize) -> Vec<Option<u32>> {
    let mut out = vec![0; g.order()];
    bfs_into(g, src, &mut out);
    out.into_iter().map(|d| (d != UNREACHABLE).then_some(d)).collect()
}

pub fn distances_and_diameter(g: &Graph) -> (DistanceMatrix, Diameter) {
    let n = g.order();
    let mut dist = vec![0u32; n * n];
    for s in 0..n {
        bfs_into(g, s, &mut dist[s * n..(s + 1) * n]);
    }
    let diameter = if dist.contains(&UNREACHABLE) {
        Diameter::Disconnected
    } else {
        Diameter::Finite(dist.iter().copied().max().unwrap_or(0))
    };
    (DistanceMatrix { n, dist }, diameter)
}

/// Diameter only.
pub fn diameter(g: &Graph) -> Diameter {
    let n = g.order();
    let mut row = vec![0u32; n];
    let mut best = 0;
    for s in 0..n {
        bfs_into(g, s, &mut row);
        for &d in &row {
            if d == UNREACHABLE {
                return Diameter::Disconnected;
            }
            best = best.max(d);
        }
    }
    Diameter::Finite(best)
}

pub fn is_connected(g: &Graph) -> bool {
    let w = g.words();
    let mut seen = vec![0u64; w];
    let mut stack = vec![0usize];
    seen[0] = 1;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for (i, (&r, s)) in g.row(v).iter().zip(seen.iter_mut()).enumerate() {
            let mut fresh = r & !*s;
            *s |= fresh;
            while fresh != 0 {
                let b = fresh.trailing_zeros() as usize;
                fresh &= fresh - 1;
                stack.push(i * 64 + b);
                count += 1;
            }
        }
    }
    count == g.order()
}

/// Two-coloring by BFS per component; on conflict returns the odd cycle through
/// the conflicting edge and the BFS tree.
pub fn bipartiteness(g: &Graph) -> Bipartiteness {
    let n = g.order();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for y in g.neighbors(x) {
                if color[y] == u8::MAX {
                    color[y] = 1 - color[x];
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                } else if color[y] == color[x] {
                    return Bipartiteness::NonBipartite {
                        odd_cycle: tree_cycle(x, y, &parent, &depth),
                    };
                }
            }
        }
    }
    Bipartiteness::Bipartite { coloring: color }
}

fn tree_cycle(x: usize, y: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (x, y);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

pub fn structure_flags(g: &Graph) -> GraphStats {
    let degrees = g.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let min_degree = degrees.iter().copied().min().unwrap_or(0);
    let diameter = diameter(g);
    GraphStats {
        n: g.order(),
        m: degrees.iter().sum::<usize>() / 2,
        max_degree,
        min_degree,
        is_regular: max_degree == min_degree,
        is_connected: diameter != Diameter::Disconnected,
        bipartition: bipartiteness(g),
        diameter,
    }
}

/// Number of walks with `k` vertices (`k - 1` edges): the grand sum of `A^(k-1)`.
pub fn count_walks(g: &Graph, k: usize) -> BigUint {
    assert!(k >= 1, "a walk has at least one vertex");
    let n = g.order();
    let mut ends: Vec<BigUint> = vec![BigUint::one(); n];
    for _ in 1..k {
        let next = (0..n)
            .map(|v| g.neighbors(v).fold(BigUint::zero(), |acc, u| acc + &ends[u]))
            .collect();
        ends = next;
    }
    ends.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn paw() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn path_distances() {
        let p3 = generate(Family::Path(3)).unwrap();
        let (d, diam) = distances_and_diameter(&p3);
        assert_eq!(diam, Diameter::Finite(2));
        assert_eq!(d.get(0, 2), Some(2));
        let p6 = generate(Family::Path(6)).unwrap();
        assert_eq!(diameter(&p6), Diameter::Finite(5));
        assert_eq!(diameter(&generate(Family::Complete(5)).unwrap()), Diameter::Finite(1));
    }

    #[test]
    fn disconnected_marker() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let (d, diam) = distances_and_diameter(&g);
        assert_eq!(diam, Diameter::Disconnected);
        assert_eq!(d.get(0, 3), None);
        assert!(!is_connected(&g));
        assert!(!structure_flags(&g).is_connected);
        assert_eq!(diameter(&Graph::empty(1).unwrap()), Diameter::Finite(0));
    }

    #[test]
    fn certificates() {
        let k33 = generate(Family::CompleteBipartite(3, 3)).unwrap();
        let s = structure_flags(&k33);
        assert_eq!(
            s.bipartition,
            Bipartiteness::Bipartite {
                coloring: vec![0, 0, 0, 1, 1, 1]
            }
        );
        assert!(s.is_regular && s.max_degree == 3);
        let c5 = generate(Family::Cycle(5)).unwrap();
        let b = bipartiteness(&c5);
        assert!(b.verify(&c5));
        match b {
            Bipartiteness::NonBipartite { odd_cycle } => assert_eq!(odd_cycle.len(), 5),
            _ => panic!("C5 is not bipartite"),
        }
        let s = structure_flags(&paw());
        assert!(s.is_connected && !s.bipartition.is_bipartite() && !s.is_regular);
        assert_eq!(s.max_degree, 3);
        assert!(s.bipartition.verify(&paw()));
    }

    #[test]
    fn walk_counts() {
        let k2 = generate(Family::Complete(2)).unwrap();
        assert_eq!(count_walks(&k2, 2), BigUint::from(2u32));
        let p3 = generate(Family::Path(3)).unwrap();
        assert_eq!(count_walks(&p3, 1), BigUint::from(3u32));
        // A^2 of P3 = [[1,0,1],[0,2,0],[1,0,1]], grand sum 6.
        assert_eq!(count_walks(&p3, 3), BigUint::from(6u32));
        let g = paw();
        assert_eq!(count_walks(&g, 2), BigUint::from(2 * g.edge_count()));
    }
}
