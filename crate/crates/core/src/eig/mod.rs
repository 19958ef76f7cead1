//! Certified eigenvalue enclosures and eigenvector estimates for adjacency matrices.

pub mod charpoly;
pub mod count;
pub mod enclose;
pub mod interval;
mod sturm;
pub mod vector;

use thiserror::Error;

pub use charpoly::CharPoly;
pub use count::{eigenvalue_count_below, CountMethod};
pub use enclose::{
    bits_for_tolerance, extreme_eigenvalues, extreme_eigenvalues_with, Backend, Bracket, EigConfig, SpectralSummary,
    Spectrum, DEFAULT_MAX_PRECISION_BITS, PRECISION_ENV,
};
pub use interval::{Interval, Round};
pub use vector::{
    eigenvector_estimate, perron_vector_estimate, rayleigh_quotient, rayleigh_quotient_f64, EigenvectorEstimate, Target,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigError {
    #[error("graph is disconnected; the Perron eigenvalue need not be simple")]
    Disconnected,
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vector has a non-finite entry")]
    NonFinite,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}
