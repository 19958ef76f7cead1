//! Named graph families with fixed vertex numbering.

use super::{Graph, GraphError};

/// Named families.
///
/// Numbering: `Complete` and `Cycle` use `0..n` with the cycle `0-1-..-(n-1)-0`;
/// `Path(n)` is the path `0-1-..-(n-1)` on `n` vertices (length `n-1`);
/// `CompleteBipartite(a, b)` has parts `0..a` and `a..a+b`; `Star(k)` has
/// center `0` and leaves `1..=k`; `Petersen` has outer cycle `0..5`, spokes
/// `i - i+5` and inner pentagram `5+i - 5+(i+2)%5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    CompleteBipartite(usize, usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    Petersen,
}

impl Family {
    /// Parses `name` with positional size parameters, e.g. `("complete_bipartite", [3, 3])`.
    pub fn parse(name: &str, params: &[usize]) -> Result<Self, GraphError> {
        let arity = |k: usize, family: &'static str| -> Result<(), GraphError> {
            if params.len() == k {
                Ok(())
            } else {
                Err(GraphError::InvalidParameter {
                    family,
                    reason: format!("expected {k} parameter(s), got {}", params.len()),
                })
            }
        };
        Ok(match name {
            "complete" => {
                arity(1, "complete")?;
                Family::Complete(params[0])
            }
            "complete_bipartite" => {
                arity(2, "complete_bipartite")?;
                Family::CompleteBipartite(params[0], params[1])
            }
            "path" => {
                arity(1, "path")?;
                Family::Path(params[0])
            }
            "cycle" => {
                arity(1, "cycle")?;
                Family::Cycle(params[0])
            }
            "star" => {
                arity(1, "star")?;
                Family::Star(params[0])
            }
            "petersen" => {
                arity(0, "petersen")?;
                Family::Petersen
            }
            other => return Err(GraphError::UnknownFamily(other.to_string())),
        })
    }
}

fn positive(family: &'static str, what: &str, x: usize, min: usize) -> Result<(), GraphError> {
    if x < min {
        Err(GraphError::InvalidParameter {
            family,
            reason: format!("{what} must be >= {min}, got {x}"),
        })
    } else {
        Ok(())
    }
}

pub fn generate(family: Family) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let n = match family {
        Family::Complete(n) => {
            positive("complete", "n", n, 1)?;
            for j in 1..n {
                edges.extend((0..j).map(|i| (i, j)));
            }
            n
        }
        Family::CompleteBipartite(a, b) => {
            positive("complete_bipartite", "a", a, 1)?;
            positive("complete_bipartite", "b", b, 1)?;
            for i in 0..a {
                edges.extend((a..a + b).map(|j| (i, j)));
            }
            a + b
        }
        Family::Path(n) => {
            positive("path", "n", n, 1)?;
            edges.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        Family::Cycle(n) => {
            positive("cycle", "n", n, 3)?;
            edges.extend((0..n).map(|i| (i, (i + 1) % n)));
            n
        }
        Family::Star(k) => {
            positive("star", "leaves", k, 1)?;
            edges.extend((1..=k).map(|i| (0, i)));
            k + 1
        }
        Family::Petersen => {
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            10
        }
    };
    Graph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{distances_and_diameter, structure_flags, Diameter};

    #[test]
    fn family_sizes() {
        assert_eq!(generate(Family::Complete(4)).unwrap().edge_count(), 6);
        let k33 = generate(Family::CompleteBipartite(3, 3)).unwrap();
        assert_eq!(k33.edge_count(), 9);
        assert!(structure_flags(&k33).bipartition.is_bipartite());
        let c5 = generate(Family::Cycle(5)).unwrap();
        assert!(!structure_flags(&c5).bipartition.is_bipartite());
        assert_eq!(distances_and_diameter(&c5).1, Diameter::Finite(2));
        let pet = generate(Family::Petersen).unwrap();
        assert_eq!(pet.edge_count(), 15);
        assert!(pet.degrees().iter().all(|&d| d == 3));
        assert_eq!(distances_and_diameter(&pet).1, Diameter::Finite(2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate(Family::CompleteBipartite(0, 3)).is_err());
        assert!(generate(Family::Cycle(2)).is_err());
        assert!(generate(Family::Complete(0)).is_err());
        assert!(matches!(
            Family::parse("wheel", &[5]),
            Err(GraphError::UnknownFamily(_))
        ));
        assert!(Family::parse("complete_bipartite", &[3]).is_err());
        assert_eq!(Family::parse("star", &[3]).unwrap(), Family::Star(3));
    }
}
