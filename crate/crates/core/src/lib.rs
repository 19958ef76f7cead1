//! Certified spectral bounds for small graphs.
//!
//! * [`graph`]: bitset graphs, graph6 and edge-list I/O, generators, metrics, enumeration.
//! * [`eig`]: exact eigenvalue counting, dyadic enclosures, certified eigenvectors.
//! * [`bounds`]: one evaluator per inequality, returning a three-valued verdict.
//! * [`constructions`]: the two extremal families and their validators.
//! * [`harness`]: sweeps, report records and persistence.

pub mod bounds;
pub mod constructions;
pub mod eig;
pub mod graph;
pub mod harness;
