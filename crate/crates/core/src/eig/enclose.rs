//! Canonical dyadic brackets for individual eigenvalues.
//!
//! At precision `q` the bracket of the `k`-th smallest eigenvalue `lambda` is
//! `[c, c + 1] / 2^q` with `c = floor(lambda * 2^q)`, found as the largest `c`
//! for which fewer than `k + 1` eigenvalues lie strictly below `c / 2^q`. The
//! answer depends only on `(lambda, q)`, never on the search path, so results are
//! cached per characteristic polynomial and coarser brackets are read off finer
//! ones.

use rustc_hash::FxHashMap;
use std::cell::{Cell, OnceCell, RefCell};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

use super::charpoly::CharPoly;
use super::count::{count_below_dyadic, count_below_interval_ldl};
use super::interval::Interval;
use super::EigError;

pub const DEFAULT_MAX_PRECISION_BITS: u32 = 256;
pub const PRECISION_ENV: &str = "SPECGAP_MAX_PRECISION_BITS";
/// Largest order for which the characteristic-polynomial route is the default.
pub const EXACT_ORDER_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    SturmExact,
    IntervalLdl,
}

impl Backend {
    pub fn tag(self) -> &'static str {
        match self {
            Backend::SturmExact => "sturm_exact",
            Backend::IntervalLdl => "interval_ldl",
        }
    }

    pub fn for_order(n: usize) -> Self {
        if n <= EXACT_ORDER_LIMIT {
            Backend::SturmExact
        } else {
            Backend::IntervalLdl
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigConfig {
    pub max_precision_bits: u32,
    /// `None` picks by order.
    pub backend: Option<Backend>,
}

impl Default for EigConfig {
    fn default() -> Self {
        let max_precision_bits = std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&b| b > 0)
            .unwrap_or(DEFAULT_MAX_PRECISION_BITS);
        Self {
            max_precision_bits,
            backend: None,
        }
    }
}

/// Bracket `[c, c + 1] / 2^bits` of one eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub mantissa: BigInt,
    pub bits: u32,
    /// Requested precision exceeded the cap; `bits` is the cap.
    pub capped: bool,
}

impl Bracket {
    pub fn interval(&self) -> Interval {
        Interval::from_dyadic(&self.mantissa, &(&self.mantissa + 1), self.bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSummary {
    pub mu: Interval,
    pub mu_min: Interval,
    pub precision_bits: u32,
    pub method: Backend,
    pub capped: bool,
}

thread_local! {
    static CACHE: RefCell<FxHashMap<CharPoly, Vec<Option<(u32, BigInt)>>>> = RefCell::new(FxHashMap::default());
}

const CACHE_LIMIT: usize = 1 << 20;

/// Spectrum oracle for one graph.
pub struct Spectrum {
    graph: Graph,
    poly: CharPoly,
    floats: OnceCell<Vec<f64>>,
    backend: Backend,
    cap: u32,
    ldl_fallback: Cell<bool>,
}

impl Spectrum {
    pub fn new(g: &Graph) -> Self {
        Self::with_config(g, &EigConfig::default())
    }

    pub fn with_config(g: &Graph, cfg: &EigConfig) -> Self {
        Self {
            graph: g.clone(),
            poly: CharPoly::of(g),
            floats: OnceCell::new(),
            backend: cfg.backend.unwrap_or_else(|| Backend::for_order(g.order())),
            cap: cfg.max_precision_bits,
            ldl_fallback: Cell::new(false),
        }
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn charpoly(&self) -> &CharPoly {
        &self.poly
    }

    pub fn max_precision_bits(&self) -> u32 {
        self.cap
    }

    /// Backend that answered every probe so far.
    pub fn method(&self) -> Backend {
        if self.ldl_fallback.get() {
            Backend::SturmExact
        } else {
            self.backend
        }
    }

    /// Floating-point eigenvalues, ascending. Used only to seed searches.
    pub fn approximate_eigenvalues(&self) -> &[f64] {
        self.floats.get_or_init(|| {
            let n = self.order();
            let m = DMatrix::from_row_slice(n, n, &self.graph.adjacency_f64());
            let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        })
    }

    fn count_below(&self, c: &BigInt, q: u32) -> usize {
        if self.backend == Backend::IntervalLdl {
            let t = BigRational::new(c.clone(), BigInt::one() << q);
            if let Some(tf) = t.to_f64().filter(|f| BigRational::from_float(*f).as_ref() == Some(&t)) {
                if let Some(k) = count_below_interval_ldl(&self.graph, tf) {
                    return k;
                }
            }
            self.ldl_fallback.set(true);
        }
        count_below_dyadic(&self.poly, c, q)
    }

    /// Bracket of the `k`-th smallest eigenvalue (0-based) at `bits` fractional bits.
    pub fn eigenvalue(&self, k: usize, bits: u32) -> Bracket {
        let n = self.order();
        assert!(k < n, "eigenvalue index {k} out of range for order {n}");
        let q = bits.min(self.cap);
        let capped = bits > self.cap;
        let cached = CACHE.with(|c| c.borrow().get(&self.poly).and_then(|v| v[k].clone()));
        if let Some((cq, cm)) = &cached {
            if *cq >= q {
                let mantissa = cm.div_floor(&(BigInt::one() << (cq - q)));
                return Bracket {
                    mantissa,
                    bits: q,
                    capped,
                };
            }
        }
        let holds = |c: &BigInt| self.count_below(c, q) <= k;
        let (lo, hi) = match &cached {
            Some((cq, cm)) => (cm << (q - cq), (cm + 1) << (q - cq)),
            None => {
                let r = BigInt::from(self.graph.max_degree() + 1) << q;
                (-r.clone(), r)
            }
        };
        let guess = BigRational::from_float(self.approximate_eigenvalues()[k])
            .map(|f| (f * BigRational::from_integer(BigInt::one() << q)).floor().to_integer());
        let mantissa = search(lo, hi, guess, holds);
        CACHE.with(|c| {
            let mut c = c.borrow_mut();
            if c.len() >= CACHE_LIMIT {
                c.clear();
            }
            let slot = c.entry(self.poly.clone()).or_insert_with(|| vec![None; n]);
            slot[k] = Some((q, mantissa.clone()));
        });
        Bracket {
            mantissa,
            bits: q,
            capped,
        }
    }

    pub fn largest(&self, bits: u32) -> Bracket {
        self.eigenvalue(self.order() - 1, bits)
    }

    pub fn smallest(&self, bits: u32) -> Bracket {
        self.eigenvalue(0, bits)
    }

    pub fn summary(&self, bits: u32) -> SpectralSummary {
        let mu = self.largest(bits);
        let mu_min = self.smallest(bits);
        SpectralSummary {
            mu: mu.interval(),
            mu_min: mu_min.interval(),
            precision_bits: mu.bits,
            method: self.method(),
            capped: mu.capped,
        }
    }
}

/// Largest `c` in `[lo, hi)` with `holds(c)`, given `holds(lo)` and `!holds(hi)`.
fn search(mut lo: BigInt, mut hi: BigInt, guess: Option<BigInt>, holds: impl Fn(&BigInt) -> bool) -> BigInt {
    if let Some(g) = guess.filter(|g| *g > lo && *g < hi) {
        let mut step = BigInt::one();
        if holds(&g) {
            lo = g;
            loop {
                let t = &lo + &step;
                if t >= hi {
                    break;
                }
                if holds(&t) {
                    lo = t;
                    step <<= 1;
                } else {
                    hi = t;
                    break;
                }
            }
        } else {
            hi = g;
            loop {
                let t = &hi - &step;
                if t <= lo {
                    break;
                }
                if holds(&t) {
                    lo = t;
                    break;
                }
                hi = t;
                step <<= 1;
            }
        }
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if holds(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Fractional bits needed for width at most `tol`.
pub fn bits_for_tolerance(tol: f64) -> Result<u32, EigError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(EigError::InvalidTolerance(tol));
    }
    Ok((-tol.log2()).ceil().max(0.0) as u32)
}

/// Enclosures of the largest and smallest eigenvalue, each of width at most `tol`
/// unless the precision cap intervenes (then `capped` is set).
pub fn extreme_eigenvalues(g: &Graph, tol: f64) -> Result<SpectralSummary, EigError> {
    extreme_eigenvalues_with(g, tol, &EigConfig::default())
}

pub fn extreme_eigenvalues_with(g: &Graph, tol: f64, cfg: &EigConfig) -> Result<SpectralSummary, EigError> {
    let bits = bits_for_tolerance(tol)?;
    Ok(Spectrum::with_config(g, cfg).summary(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::interval::rational;
    use crate::graph::{generate, Family};

    #[test]
    fn complete_graph_spectrum() {
        let k5 = generate(Family::Complete(5)).unwrap();
        let s = extreme_eigenvalues(&k5, 1e-9).unwrap();
        assert!(s.mu.contains(&rational(4, 1)) && s.mu_min.contains(&rational(-1, 1)));
        // Integer eigenvalues are exact lower endpoints.
        assert_eq!(s.mu.lo(), &rational(4, 1));
        assert!(s.mu.width() <= rational(1, 1_000_000_000));
    }

    #[test]
    fn cycle_sum_encloses_closed_form() {
        let c5 = generate(Family::Cycle(5)).unwrap();
        let s = extreme_eigenvalues(&c5, 1e-12).unwrap();
        let sum = &s.mu + &s.mu_min;
        // 2 + 2cos(4pi/5) = (3 - sqrt 5) / 2
        let exact = (3.0 - 5f64.sqrt()) / 2.0;
        assert!(sum.lo_f64() <= exact + 1e-15 && sum.hi_f64() >= exact - 1e-15);
        assert!(sum.width() <= rational(1, 1_000_000_000));
    }

    #[test]
    fn brackets_are_route_independent() {
        let g = generate(Family::Petersen).unwrap();
        let a = Spectrum::new(&g);
        let fine = a.eigenvalue(8, 40);
        let coarse_from_cache = a.eigenvalue(8, 10);
        CACHE.with(|c| c.borrow_mut().clear());
        let fresh = Spectrum::new(&g).eigenvalue(8, 10);
        assert_eq!(coarse_from_cache, fresh);
        assert_eq!(fine.mantissa, BigInt::from(1u64 << 40));
    }

    #[test]
    fn interval_backend_agrees() {
        let cfg = EigConfig {
            max_precision_bits: 256,
            backend: Some(Backend::IntervalLdl),
        };
        for g in crate::graph::enumerate_connected(5).unwrap().step_by(37) {
            CACHE.with(|c| c.borrow_mut().clear());
            let a = Spectrum::with_config(&g, &cfg).summary(30);
            CACHE.with(|c| c.borrow_mut().clear());
            let b = Spectrum::new(&g).summary(30);
            assert_eq!((a.mu, a.mu_min), (b.mu, b.mu_min), "{g:?}");
        }
    }

    #[test]
    fn cap_limits_precision() {
        let cfg = EigConfig {
            max_precision_bits: 16,
            backend: None,
        };
        let s = extreme_eigenvalues_with(&generate(Family::Path(4)).unwrap(), 1e-12, &cfg).unwrap();
        assert!(s.capped && s.precision_bits == 16);
        assert!(extreme_eigenvalues(&generate(Family::Path(4)).unwrap(), 0.0).is_err());
    }
}
