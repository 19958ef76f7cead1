//! Inequality evaluators with three-valued verdicts.
//!
//! Every check encloses both sides and compares the enclosures:
//!
//! | relation | holds            | fails             |
//! |----------|------------------|-------------------|
//! | `>`      | `lhs.lo > rhs.hi`  | `lhs.hi <= rhs.lo`  |
//! | `>=`     | `lhs.lo >= rhs.hi` | `lhs.hi < rhs.lo`   |
//! | `<`      | `lhs.hi < rhs.lo`  | `lhs.lo >= rhs.hi`  |
//! | `=`      | both the same point | disjoint          |
//!
//! and anything else is undecided. A check whose hypotheses fail is `Skipped`.

mod spectral;
mod structural;

use rustc_hash::FxHashMap;
use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eig::interval::{cmp, difference, max};
use crate::eig::{CharPoly, EigConfig, Interval};

pub use spectral::{
    check_diameter_power, check_edge_deletions, check_eigenvector_ratio, check_nonbipartite_gap,
    check_regular_edge_deletions, check_regular_variants, check_subgraph_gap, check_theorem4, sachs_dichotomy,
    SachsOutcome,
};
pub use structural::{
    edge_deletion_distance_lemma, max_cut, max_cut_brute_force, min_bipartization, sign_cut_subgraph, SignCut,
    MAX_BIPARTIZATION_ORDER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckId {
    #[serde(rename = "T1")]
    T1,
    #[serde(rename = "T1a_strong")]
    T1aStrong,
    #[serde(rename = "T2")]
    T2,
    #[serde(rename = "T11")]
    T11,
    #[serde(rename = "T21")]
    T21,
    #[serde(rename = "T4")]
    T4,
    #[serde(rename = "CGN")]
    Cgn,
    #[serde(rename = "P1")]
    P1,
    #[serde(rename = "P1_MINMAX")]
    P1MinMax,
    #[serde(rename = "P2")]
    P2,
    #[serde(rename = "WALK")]
    Walk,
    #[serde(rename = "P2_POWER_SUM")]
    P2PowerSum,
    #[serde(rename = "DIST_LEMMA")]
    DistLemma,
    /// Validation of one triangle/`K_{k,k}` instance.
    #[serde(rename = "THM2")]
    Thm2,
    /// Validation of one `K_{r,r}`/`K_s` instance.
    #[serde(rename = "THM3")]
    Thm3,
}

impl CheckId {
    pub const ALL: [CheckId; 13] = [
        CheckId::T1,
        CheckId::T1aStrong,
        CheckId::T2,
        CheckId::T11,
        CheckId::T21,
        CheckId::T4,
        CheckId::Cgn,
        CheckId::P1,
        CheckId::P1MinMax,
        CheckId::P2,
        CheckId::Walk,
        CheckId::P2PowerSum,
        CheckId::DistLemma,
    ];

    /// Whole-construction validations; not per-graph checks.
    pub const CONSTRUCTIONS: [CheckId; 2] = [CheckId::Thm2, CheckId::Thm3];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::T1 => "T1",
            CheckId::T1aStrong => "T1a_strong",
            CheckId::T2 => "T2",
            CheckId::T11 => "T11",
            CheckId::T21 => "T21",
            CheckId::T4 => "T4",
            CheckId::Cgn => "CGN",
            CheckId::P1 => "P1",
            CheckId::P1MinMax => "P1_MINMAX",
            CheckId::P2 => "P2",
            CheckId::Walk => "WALK",
            CheckId::P2PowerSum => "P2_POWER_SUM",
            CheckId::DistLemma => "DIST_LEMMA",
            CheckId::Thm2 => "THM2",
            CheckId::Thm3 => "THM3",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = BoundError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .chain(CheckId::CONSTRUCTIONS)
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| BoundError::UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
            Verdict::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Eq => "=",
        }
    }

    pub fn judge(self, lhs: &Interval, rhs: &Interval) -> Verdict {
        let (holds, fails) = match self {
            Relation::Gt => (cmp(lhs.lo(), rhs.hi()).is_gt(), cmp(lhs.hi(), rhs.lo()).is_le()),
            Relation::Ge => (cmp(lhs.lo(), rhs.hi()).is_ge(), cmp(lhs.hi(), rhs.lo()).is_lt()),
            Relation::Lt => (cmp(lhs.hi(), rhs.lo()).is_lt(), cmp(lhs.lo(), rhs.hi()).is_ge()),
            Relation::Eq => (
                lhs.is_point() && lhs == rhs,
                cmp(lhs.hi(), rhs.lo()).is_lt() || cmp(rhs.hi(), lhs.lo()).is_lt(),
            ),
        };
        if holds {
            Verdict::Holds
        } else if fails {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    }

    /// Signed distance by which the claim is certified; positive iff it holds
    /// (for `>=` and `=` zero also holds).
    pub fn margin(self, lhs: &Interval, rhs: &Interval) -> BigRational {
        match self {
            Relation::Gt | Relation::Ge => difference(lhs.lo(), rhs.hi()),
            Relation::Lt => difference(rhs.lo(), lhs.hi()),
            Relation::Eq => -max(
                difference(lhs.hi(), rhs.lo()).abs(),
                difference(rhs.hi(), lhs.lo()).abs(),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub held: bool,
}

pub(crate) fn hyp(name: &'static str, held: bool) -> Hypothesis {
    Hypothesis { name, held }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVerdict {
    pub check_id: CheckId,
    pub lhs: Option<Interval>,
    pub rhs: Option<Interval>,
    pub relation: Relation,
    pub verdict: Verdict,
    pub hypotheses: Vec<Hypothesis>,
    pub precision_bits: u32,
    pub notes: Vec<String>,
}

impl BoundVerdict {
    pub(crate) fn skipped(check_id: CheckId, relation: Relation, hypotheses: Vec<Hypothesis>) -> Self {
        Self {
            check_id,
            lhs: None,
            rhs: None,
            relation,
            verdict: Verdict::Skipped,
            hypotheses,
            precision_bits: 0,
            notes: Vec::new(),
        }
    }

    pub(crate) fn decided(
        check_id: CheckId,
        relation: Relation,
        hypotheses: Vec<Hypothesis>,
        lhs: Interval,
        rhs: Interval,
        precision_bits: u32,
    ) -> Self {
        let verdict = relation.judge(&lhs, &rhs);
        Self {
            check_id,
            lhs: Some(lhs),
            rhs: Some(rhs),
            relation,
            verdict,
            hypotheses,
            precision_bits,
            notes: Vec::new(),
        }
    }

    pub(crate) fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn margin(&self) -> Option<BigRational> {
        Some(self.relation.margin(self.lhs.as_ref()?, self.rhs.as_ref()?))
    }

    /// `name=yes|no` pairs joined by `;`.
    pub fn hypothesis_report(&self) -> String {
        self.hypotheses
            .iter()
            .map(|h| format!("{}={}", h.name, if h.held { "yes" } else { "no" }))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// How much precision the evaluators may spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TolerancePolicy {
    /// First attempt, in fractional bits per eigenvalue bracket.
    pub initial_bits: u32,
    /// Retries target a width of `|rhs| / f` for each `f` in order.
    pub refine_divisors: [u32; 2],
    pub eig: EigConfig,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            initial_bits: 12,
            refine_divisors: [8, 64],
            eig: EigConfig::default(),
        }
    }
}

impl TolerancePolicy {
    pub fn with_cap(max_precision_bits: u32) -> Self {
        Self {
            eig: EigConfig {
                max_precision_bits,
                backend: None,
            },
            ..Self::default()
        }
    }

    pub fn cap(&self) -> u32 {
        self.eig.max_precision_bits
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("H is not a subgraph of G")]
    NotSubgraph,
    #[error("H equals G; a proper subgraph is required")]
    NotProperSubgraph,
    #[error("({u}, {v}) is not an edge of G")]
    EdgeNotInGraph { u: usize, v: usize },
    #[error("order {n} exceeds the exhaustive limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
}

/// `floor(log2 |x|)` up to one unit, for nonzero `x`.
fn log2_estimate(x: &BigRational) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// Runs `eval` at increasing precision until the relation is decided.
///
/// Retries aim at a combined enclosure width of `|rhs| / f`; the bit count for
/// each retry is extrapolated from the width observed at the previous attempt.
pub(crate) fn decide(
    policy: &TolerancePolicy,
    relation: Relation,
    mut eval: impl FnMut(u32) -> (Interval, Interval),
) -> (Interval, Interval, u32) {
    let cap = policy.cap();
    let mut bits = policy.initial_bits.min(cap);
    let (mut lhs, mut rhs) = eval(bits);
    for f in policy.refine_divisors {
        if relation.judge(&lhs, &rhs) != Verdict::Undecided || bits >= cap {
            break;
        }
        let scale = {
            let m = crate::eig::interval::min(rhs.lo().abs(), rhs.hi().abs());
            if m.is_zero() {
                crate::eig::interval::max(rhs.magnitude(), lhs.magnitude())
            } else {
                m
            }
        };
        let width = lhs.width() + rhs.width();
        let next = if scale.is_zero() || width.is_zero() {
            bits * 2
        } else {
            let target = scale / BigRational::from_integer(f.into());
            let extra = log2_estimate(&width) - log2_estimate(&target) + 2;
            bits + extra.max(4) as u32
        };
        bits = next.min(cap);
        (lhs, rhs) = eval(bits);
    }
    (lhs, rhs, bits)
}

/// Everything a memoized [`decide`] call reads: a tag naming the comparison, the
/// characteristic polynomials whose brackets it uses, and the integer
/// parameters of its right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct DecideKey {
    tag: &'static str,
    polys: Vec<CharPoly>,
    params: Vec<i64>,
    policy: (u32, [u32; 2], u32),
}

const DECIDE_MEMO_LIMIT: usize = 1 << 18;

thread_local! {
    static DECIDED: RefCell<FxHashMap<DecideKey, (Interval, Interval, u32)>> = RefCell::new(FxHashMap::default());
}

/// [`decide`] memoized per thread. Brackets are a function of the characteristic
/// polynomial, so labeled copies of one graph share the work. `eval` must depend
/// on nothing beyond `polys` and `params`.
pub(crate) fn decide_cached(
    policy: &TolerancePolicy,
    relation: Relation,
    tag: &'static str,
    polys: &[&CharPoly],
    params: &[i64],
    eval: impl FnMut(u32) -> (Interval, Interval),
) -> (Interval, Interval, u32) {
    let key = DecideKey {
        tag,
        polys: polys.iter().map(|&p| p.clone()).collect(),
        params: params.to_vec(),
        policy: (policy.initial_bits, policy.refine_divisors, policy.cap()),
    };
    if let Some(hit) = DECIDED.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let out = decide(policy, relation, eval);
    DECIDED.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= DECIDE_MEMO_LIMIT {
            m.clear();
        }
        m.insert(key, out.clone());
    });
    out
}
