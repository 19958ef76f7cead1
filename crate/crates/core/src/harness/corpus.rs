use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::HarnessError;

/// Graph6 corpus, one graph per nonblank line.
pub fn read_corpus(path: &Path) -> Result<Vec<Graph>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            Graph::from_graph6(l.trim()).map_err(|source| HarnessError::Corpus {
                path: path.to_path_buf(),
                line: i + 1,
                source,
            })
        })
        .collect()
}

/// Random connected graph: a uniformly shuffled random-attachment spanning tree
/// plus every other pair independently with probability `p`.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((order[i], order[j]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("vertices in range, no loops")
}

/// `count` connected graphs with orders uniform in `min_n..=max_n` and edge
/// densities uniform in `[0, 0.5)`, reproducible from `seed`.
pub fn random_corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    assert!(1 <= min_n && min_n <= max_n, "bad order range {min_n}..={max_n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(min_n..=max_n);
            let p = rng.random_range(0.0..0.5);
            random_connected_graph(&mut rng, n, p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_connected;

    #[test]
    fn corpus_is_connected_and_reproducible() {
        let a = random_corpus(50, 2, 12, 7);
        assert_eq!(a, random_corpus(50, 2, 12, 7));
        assert_ne!(a, random_corpus(50, 2, 12, 8));
        assert!(a.iter().all(|g| is_connected(g) && (2..=12).contains(&g.order())));
    }

    #[test]
    fn corpus_file_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.g6");
        std::fs::write(&path, "Bw\n\nBg\n?\n").unwrap();
        let err = read_corpus(&path).unwrap_err();
        assert!(matches!(err, HarnessError::Corpus { line: 4, .. }), "{err}");
        std::fs::write(&path, "Bw\nBg\n").unwrap();
        assert_eq!(read_corpus(&path).unwrap().len(), 2);
        assert!(matches!(
            read_corpus(&dir.path().join("missing")),
            Err(HarnessError::Io { .. })
        ));
    }
}
