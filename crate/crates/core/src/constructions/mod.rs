//! The two extremal families: a triangle and `K_{k,k}` joined by a path, and
//! `K_{r,r}` and `K_s` joined by a path.
//!
//! Numbering is fixed: the first block's vertices come first, then the path
//! interior, then the second block. The path attaches to vertex 2 of the
//! triangle (resp. vertex 0 of `K_{r,r}`) and to the first vertex of the second
//! block. A path of length `L` has `L` edges and `L - 1` interior vertices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::bounds::{
    check_nonbipartite_gap, decide, min_bipartization, BoundVerdict, Relation, TolerancePolicy, Verdict,
    MAX_BIPARTIZATION_ORDER,
};
use crate::eig::interval::rational;
use crate::eig::{Interval, Spectrum};
use crate::graph::{bipartiteness, diameter, Diameter, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("k = {0}: the triangle/K_(k,k) family needs k >= 3")]
    K(usize),
    #[error("D = {0}: the triangle/K_(k,k) family needs D >= 4")]
    D(u32),
    #[error("epsilon = {0} must lie strictly between 0 and 1/16")]
    Epsilon(String),
    #[error("n = {n} is too small: path length {length} (need at least 1)")]
    TooSmall { n: usize, length: i64 },
}

/// One validated claim about a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: &'static str,
    pub lhs: Interval,
    pub rhs: Interval,
    pub relation: Relation,
    pub verdict: Verdict,
    pub precision_bits: u32,
}

impl Claim {
    fn new(name: &'static str, relation: Relation, lhs: Interval, rhs: Interval, precision_bits: u32) -> Self {
        let verdict = relation.judge(&lhs, &rhs);
        Self {
            name,
            lhs,
            rhs,
            relation,
            verdict,
            precision_bits,
        }
    }

    fn exact(name: &'static str, relation: Relation, lhs: BigRational, rhs: BigRational) -> Self {
        Self::new(name, relation, Interval::point(lhs), Interval::point(rhs), 0)
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionReport {
    /// `thm2:k=3,D=4` or `thm3:n=100,eps=1/20`.
    pub label: String,
    pub graph: Graph,
    pub claims: Vec<Claim>,
    /// The gap lower bound for nonbipartite graphs, evaluated on the instance.
    pub gap_check: Option<BoundVerdict>,
    pub notes: Vec<String>,
}

impl ConstructionReport {
    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }

    /// Fails if any claim fails, else undecided if any is undecided.
    pub fn overall(&self) -> Verdict {
        let verdicts = self
            .claims
            .iter()
            .map(|c| c.verdict)
            .chain(self.gap_check.iter().map(|v| v.verdict));
        verdicts.fold(Verdict::Holds, |acc, v| match (acc, v) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Holds,
        })
    }

    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.verdict == Verdict::Holds)
            && self.gap_check.as_ref().is_none_or(|v| v.verdict == Verdict::Holds)
    }
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn add_clique(g: &mut Graph, vs: std::ops::Range<usize>) {
    for a in vs.clone() {
        for b in a + 1..vs.end {
            g.insert_edge(a, b);
        }
    }
}

fn add_biclique(g: &mut Graph, left: std::ops::Range<usize>, right: std::ops::Range<usize>) {
    for a in left {
        for b in right.clone() {
            g.insert_edge(a, b);
        }
    }
}

/// Path `from -> interior[0] -> ... -> to` through `interior`.
fn add_path(g: &mut Graph, from: usize, interior: std::ops::Range<usize>, to: usize) {
    let mut prev = from;
    for v in interior {
        g.insert_edge(prev, v);
        prev = v;
    }
    g.insert_edge(prev, to);
}

/// Triangle on `{0, 1, 2}`, path of length `D - 3` from vertex 2 to the first
/// vertex of `K_{k,k}`; order `D + 2k - 1`.
pub fn theorem2_graph(k: usize, d: u32) -> Result<Graph, ConstructionError> {
    if k < 3 {
        return Err(ConstructionError::K(k));
    }
    if d < 4 {
        return Err(ConstructionError::D(d));
    }
    let n = d as usize + 2 * k - 1;
    let length = n - 2 * k - 2;
    let base = 3 + length - 1;
    debug_assert_eq!(base + 2 * k, n);
    let mut g = Graph::empty(n).expect("n >= 1");
    add_clique(&mut g, 0..3);
    add_path(&mut g, 2, 3..base, base);
    add_biclique(&mut g, base..base + k, base + k..n);
    Ok(g)
}

fn structural_claims(g: &Graph, order: usize, expected_diameter: Option<u32>) -> (Vec<Claim>, Diameter) {
    let diam = diameter(g);
    let mut claims = vec![Claim::exact(
        "ORDER",
        Relation::Eq,
        int(g.order() as i64),
        int(order as i64),
    )];
    // Flags are encoded as 0/1.
    claims.push(Claim::exact(
        "CONNECTED",
        Relation::Eq,
        int((diam != Diameter::Disconnected) as i64),
        int(1),
    ));
    if let Some(want) = expected_diameter {
        let got = diam.finite().map_or(-1, i64::from);
        claims.push(Claim::exact("DIAMETER", Relation::Eq, int(got), int(want as i64)));
    }
    (claims, diam)
}

/// Builds the triangle/`K_{k,k}` instance and validates order, diameter,
/// nonbipartiteness, `mu > k` and `mu + mu_min < 4 / (k-1)^(2D-4)`.
pub fn build_theorem2_construction(
    k: usize,
    d: u32,
    policy: &TolerancePolicy,
) -> Result<ConstructionReport, ConstructionError> {
    let g = theorem2_graph(k, d)?;
    let n = g.order();
    let (mut claims, _) = structural_claims(&g, d as usize + 2 * k - 1, Some(d));
    claims.push(Claim::exact(
        "NONBIPARTITE",
        Relation::Eq,
        int(!bipartiteness(&g).is_bipartite() as i64),
        int(1),
    ));
    let s = Spectrum::with_config(&g, &policy.eig);
    let kk = Interval::from_int(k as i64);
    let (lhs, rhs, bits) = decide(policy, Relation::Gt, |b| (s.largest(b).interval(), kk.clone()));
    claims.push(Claim::new("MU_GT_K", Relation::Gt, lhs, rhs, bits));
    let bound = Interval::point(BigRational::new(
        BigInt::from(4),
        num_traits::pow(BigInt::from(k - 1), 2 * d as usize - 4),
    ));
    let (lhs, rhs, bits) = decide(policy, Relation::Lt, |b| {
        (&s.largest(b).interval() + &s.smallest(b).interval(), bound.clone())
    });
    claims.push(Claim::new("GAP_UPPER", Relation::Lt, lhs, rhs, bits));
    let gap_check = Some(check_nonbipartite_gap(&g, policy));
    Ok(ConstructionReport {
        label: format!("thm2:k={k},D={d}"),
        graph: g,
        claims,
        gap_check,
        notes: vec![format!("n = {n}, path length {}", n - 2 * k - 2)],
    })
}

/// Parameters of the `K_{r,r}`/`K_s` family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem3Params {
    pub n: usize,
    pub epsilon: BigRational,
    pub r: usize,
    pub s: usize,
    pub path_length: usize,
}

pub fn theorem3_params(n: usize, epsilon: &BigRational) -> Result<Theorem3Params, ConstructionError> {
    if !(epsilon.is_positive() && epsilon < &rational(1, 16)) {
        return Err(ConstructionError::Epsilon(epsilon.to_string()));
    }
    let r = n.div_ceil(4) + 1;
    let s = ((rational(1, 2) - epsilon) * int(n as i64))
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap_or(0);
    let length = n as i64 - 2 * r as i64 - s as i64 + 1;
    if length < 1 || s < 1 {
        return Err(ConstructionError::TooSmall { n, length });
    }
    Ok(Theorem3Params {
        n,
        epsilon: epsilon.clone(),
        r,
        s,
        path_length: length as usize,
    })
}

/// `K_{r,r}` on `0..2r`, path of length `n - 2r - s + 1` from vertex 0 to the first vertex of `K_s`.
pub fn theorem3_graph(p: &Theorem3Params) -> Graph {
    let (r, s, n) = (p.r, p.s, p.n);
    let base = 2 * r + p.path_length - 1;
    debug_assert_eq!(base + s, n);
    let mut g = Graph::empty(n).expect("n >= 1");
    add_biclique(&mut g, 0..r, r..2 * r);
    add_path(&mut g, 0, 2 * r..base, base);
    add_clique(&mut g, base..n);
    g
}

/// Enclosure of `n^(-e)` for rational `e >= 0`, with `bits` fractional bits of
/// the root taken.
fn inverse_rational_power(n: usize, e: &BigRational, bits: u32) -> Interval {
    let (p, q) = (e.numer().to_u32().unwrap(), e.denom().to_u32().unwrap());
    let np = num_traits::pow(BigInt::from(n), p as usize);
    if q == 1 {
        return Interval::point(BigRational::new(BigInt::one(), np));
    }
    // x = (n^p)^(1/q); floor/ceil of x * 2^bits through integer q-th roots.
    let scaled = np << (q * bits);
    let lo = scaled.nth_root(q);
    let hi = if num_traits::pow(lo.clone(), q as usize) == scaled {
        lo.clone()
    } else {
        &lo + 1
    };
    let unit = BigInt::one() << bits;
    Interval::new(BigRational::new(unit.clone(), hi), BigRational::new(unit, lo))
}

/// Builds the `K_{r,r}`/`K_s` instance and evaluates its claims at this `n`.
pub fn build_theorem3_construction(
    n: usize,
    epsilon: &BigRational,
    policy: &TolerancePolicy,
) -> Result<ConstructionReport, ConstructionError> {
    let p = theorem3_params(n, epsilon)?;
    let g = theorem3_graph(&p);
    let (mut claims, _) = structural_claims(&g, n, None);
    let s = p.s as i64;
    let clique_deletions = s * (s - 1) / 2 - Integer::div_floor(&(s * s), &4);
    let nn = int((n * n) as i64);
    claims.push(Claim::exact(
        "BIPARTIZATION_BOUND",
        Relation::Ge,
        int(clique_deletions),
        (rational(1, 16) - epsilon) * &nn,
    ));
    let eps_n = epsilon * int(n as i64);
    claims.push(Claim::exact(
        "PATH_LENGTH",
        Relation::Gt,
        int(p.path_length as i64),
        &eps_n - int(4),
    ));
    // The whole instance is out of reach of exhaustive cuts (its order exceeds
    // 16 / epsilon), but the clique block alone is checked when small enough.
    if p.s <= MAX_BIPARTIZATION_ORDER {
        let mut clique = Graph::empty(p.s).expect("s >= 1");
        add_clique(&mut clique, 0..p.s);
        let exact = min_bipartization(&clique).expect("order checked");
        claims.push(Claim::exact(
            "CLIQUE_BIPARTIZATION_EXACT",
            Relation::Eq,
            int(exact as i64),
            int(clique_deletions),
        ));
    }
    let spec = Spectrum::with_config(&g, &policy.eig);
    let (lhs, rhs, bits) = decide(policy, Relation::Lt, |b| {
        (
            &spec.largest(b).interval() + &spec.smallest(b).interval(),
            inverse_rational_power(n, &eps_n, b + 8),
        )
    });
    let notes = vec![
        format!("r = {}, s = {}, path length {}", p.r, p.s, p.path_length),
        format!("certified mu + mu_min in {lhs}"),
    ];
    claims.push(Claim::new("GAP_UPPER", Relation::Lt, lhs, rhs, bits));
    Ok(ConstructionReport {
        label: format!("thm3:n={n},eps={epsilon}"),
        graph: g,
        claims,
        gap_check: None,
        notes,
    })
}

/// Reports for every `(k, D)` in the grid, in row-major order.
pub fn theorem2_grid(
    ks: &[usize],
    ds: &[u32],
    policy: &TolerancePolicy,
) -> Vec<Result<ConstructionReport, ConstructionError>> {
    ks.iter()
        .flat_map(|&k| ds.iter().map(move |&d| build_theorem2_construction(k, d, policy)))
        .collect()
}
