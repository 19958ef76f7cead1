use crate::eig::vector::{eigenvector_estimate, Target};
use crate::eig::{Interval, Spectrum};
use crate::graph::{bfs_distances, bipartiteness, diameter, is_connected, Graph};

use super::{hyp, BoundError, BoundVerdict, CheckId, Relation, TolerancePolicy};

pub const MAX_BIPARTIZATION_ORDER: usize = 24;

/// Spanning subgraph keeping the edges across the sign pattern of an eigenvector
/// for the smallest eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct SignCut {
    pub subgraph: Graph,
    /// Vertices with a negative entry.
    pub negative_side: Vec<usize>,
    /// Entries whose sign is not certified; placed on the nonnegative side.
    pub near_zero: Vec<usize>,
    /// The eigenvector was certified and every sign is resolved.
    pub signs_certified: bool,
    pub entrywise_error: f64,
    pub spanning: bool,
    pub bipartite: bool,
    pub proper: bool,
    pub connected: bool,
}

pub fn sign_cut_subgraph(g: &Graph, policy: &TolerancePolicy) -> Result<SignCut, BoundError> {
    if !is_connected(g) {
        return Err(BoundError::Hypothesis("G must be connected".into()));
    }
    if bipartiteness(g).is_bipartite() {
        return Err(BoundError::Hypothesis("G must be nonbipartite".into()));
    }
    let est = eigenvector_estimate(&Spectrum::with_config(g, &policy.eig), Target::Smallest);
    // Without a certificate, fall back to a floating threshold for "zero".
    let delta = if est.is_certified() { est.entrywise_error } else { 1e-9 };
    let mut negative = vec![false; g.order()];
    let mut near_zero = Vec::new();
    for (i, &x) in est.entries.iter().enumerate() {
        if x.abs() <= delta {
            near_zero.push(i);
        } else {
            negative[i] = x < 0.0;
        }
    }
    let h = g.spanning_subgraph(|u, v| negative[u] != negative[v]);
    Ok(SignCut {
        negative_side: (0..g.order()).filter(|&i| negative[i]).collect(),
        signs_certified: est.is_certified() && near_zero.is_empty(),
        near_zero,
        entrywise_error: est.entrywise_error,
        spanning: h.order() == g.order(),
        bipartite: bipartiteness(&h).is_bipartite(),
        proper: h.edge_count() < g.edge_count(),
        connected: is_connected(&h),
        subgraph: h,
    })
}

/// For `H = G - uv`: `dist_H(w, u) + dist_H(w, v) <= 2 diam(G)` for every `w`.
pub fn edge_deletion_distance_lemma(g: &Graph, edge: (usize, usize)) -> Result<BoundVerdict, BoundError> {
    let (u, v) = edge;
    if !g.has_edge(u, v) {
        return Err(BoundError::EdgeNotInGraph { u, v });
    }
    let d = diameter(g).finite();
    let h = g.without_edge(u, v);
    let du = bfs_distances(&h, u);
    let dv = bfs_distances(&h, v);
    let h_connected = du.iter().all(Option::is_some);
    let hyps = vec![hyp("G_connected", d.is_some()), hyp("H_connected", h_connected)];
    let (Some(d), true) = (d, h_connected) else {
        return Ok(BoundVerdict::skipped(CheckId::DistLemma, Relation::Ge, hyps));
    };
    let (w, worst) = (0..g.order())
        .map(|w| (w, du[w].unwrap() + dv[w].unwrap()))
        .max_by_key(|&(w, s)| (s, std::cmp::Reverse(w)))
        .unwrap();
    Ok(BoundVerdict::decided(
        CheckId::DistLemma,
        Relation::Ge,
        hyps,
        Interval::from_int(2 * d as i64),
        Interval::from_int(worst as i64),
        0,
    )
    .note(format!("worst vertex {w}")))
}

fn check_order(g: &Graph) -> Result<(), BoundError> {
    if g.order() > MAX_BIPARTIZATION_ORDER {
        return Err(BoundError::TooLarge {
            n: g.order(),
            max: MAX_BIPARTIZATION_ORDER,
        });
    }
    Ok(())
}

/// Maximum cut by Gray-code enumeration of the `2^(n-1)` bipartitions with vertex 0 fixed.
pub fn max_cut(g: &Graph) -> Result<u64, BoundError> {
    check_order(g)?;
    let n = g.order();
    let rows: Vec<u32> = (0..n).map(|v| g.row(v)[0] as u32).collect();
    let deg: Vec<i64> = rows.iter().map(|r| r.count_ones() as i64).collect();
    let mut side = 0u32;
    let mut cut = 0i64;
    let mut best = 0i64;
    for k in 1u64..1 << (n - 1) {
        let v = k.trailing_zeros() as usize + 1;
        let inside = (rows[v] & side).count_ones() as i64;
        if side >> v & 1 == 0 {
            cut += deg[v] - 2 * inside;
        } else {
            cut += 2 * inside - deg[v];
        }
        side ^= 1 << v;
        best = best.max(cut);
    }
    Ok(best as u64)
}

/// Maximum cut by direct evaluation of every bipartition; an oracle for [`max_cut`].
pub fn max_cut_brute_force(g: &Graph) -> Result<u64, BoundError> {
    check_order(g)?;
    let edges: Vec<_> = g.edges().collect();
    Ok((0u64..1 << (g.order() - 1))
        .map(|mask| {
            let side = |x: usize| x > 0 && mask >> (x - 1) & 1 == 1;
            edges.iter().filter(|&&(a, b)| side(a) != side(b)).count() as u64
        })
        .max()
        .unwrap_or(0))
}

/// Fewest edge deletions making `G` bipartite: `m - maxcut(G)`.
pub fn min_bipartization(g: &Graph) -> Result<u64, BoundError> {
    Ok(g.edge_count() as u64 - max_cut(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;
    use crate::graph::{enumerate_connected, generate, Family};

    #[test]
    fn bipartization_examples() {
        assert_eq!(min_bipartization(&generate(Family::Complete(3)).unwrap()), Ok(1));
        assert_eq!(min_bipartization(&generate(Family::Complete(5)).unwrap()), Ok(4));
        assert_eq!(min_bipartization(&generate(Family::Cycle(5)).unwrap()), Ok(1));
        assert_eq!(min_bipartization(&generate(Family::Petersen).unwrap()), Ok(3));
        assert_eq!(min_bipartization(&Graph::empty(1).unwrap()), Ok(0));
        assert!(matches!(
            min_bipartization(&generate(Family::Path(25)).unwrap()),
            Err(BoundError::TooLarge { .. })
        ));
    }

    /// Smallest edge set whose removal leaves a bipartite graph, by subset search.
    fn deletion_oracle(g: &Graph) -> u64 {
        let edges: Vec<_> = g.edges().collect();
        (0u64..1 << edges.len())
            .filter(|&mask| {
                let h = g.spanning_subgraph(|a, b| {
                    let k = edges.iter().position(|&e| e == (a, b)).unwrap();
                    mask >> k & 1 == 0
                });
                bipartiteness(&h).is_bipartite()
            })
            .map(|mask| mask.count_ones() as u64)
            .min()
            .unwrap()
    }

    #[test]
    fn gray_code_matches_oracles() {
        for n in 1..=5 {
            for g in enumerate_connected(n).unwrap() {
                let fast = min_bipartization(&g).unwrap();
                assert_eq!(fast, g.edge_count() as u64 - max_cut_brute_force(&g).unwrap());
                assert_eq!(fast, deletion_oracle(&g), "{g:?}");
                assert_eq!(fast == 0, bipartiteness(&g).is_bipartite());
            }
        }
    }

    #[test]
    fn distance_lemma_examples() {
        let k3 = generate(Family::Complete(3)).unwrap();
        let v = edge_deletion_distance_lemma(&k3, (0, 1)).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert_eq!(v.lhs, v.rhs);
        let c5 = generate(Family::Cycle(5)).unwrap();
        let v = edge_deletion_distance_lemma(&c5, (0, 4)).unwrap();
        assert_eq!((v.verdict, v.rhs), (Verdict::Holds, Some(Interval::from_int(4))));
        let p3 = generate(Family::Path(3)).unwrap();
        assert_eq!(
            edge_deletion_distance_lemma(&p3, (0, 1)).unwrap().verdict,
            Verdict::Skipped
        );
        assert!(edge_deletion_distance_lemma(&p3, (0, 2)).is_err());
    }

    #[test]
    fn sign_cut_examples() {
        let policy = TolerancePolicy::with_cap(256);
        let c5 = generate(Family::Cycle(5)).unwrap();
        let s = sign_cut_subgraph(&c5, &policy).unwrap();
        assert!(s.spanning && s.bipartite && s.proper);
        let k3 = generate(Family::Complete(3)).unwrap();
        let s = sign_cut_subgraph(&k3, &policy).unwrap();
        assert!(s.bipartite && s.proper && s.connected);
        assert_eq!(s.subgraph.edge_count(), 2);
        let pet = generate(Family::Petersen).unwrap();
        let s = sign_cut_subgraph(&pet, &policy).unwrap();
        assert!(s.bipartite && s.proper);
        let k33 = generate(Family::CompleteBipartite(3, 3)).unwrap();
        assert!(sign_cut_subgraph(&k33, &policy).is_err());
    }
}
