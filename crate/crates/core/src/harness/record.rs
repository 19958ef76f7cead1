use std::sync::Arc;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundVerdict, Verdict};
use crate::eig::interval::{decimal, Round};

/// Significant digits of every decimal endpoint in a record.
pub const DECIMAL_DIGITS: usize = 17;

/// One evaluated (graph, check) pair with exact enclosures.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Position of the graph in the source.
    pub index: usize,
    /// Graph6 text, or construction parameters.
    pub graph_id: Arc<str>,
    pub graph6: Arc<str>,
    /// Deleted edge, for checks on `G - e`.
    pub edge: Option<(usize, usize)>,
    pub verdict: BoundVerdict,
    pub wall_time: Duration,
}

impl Outcome {
    pub fn record(&self) -> RunRecord {
        let v = &self.verdict;
        let lo = |x: &Option<crate::eig::Interval>| x.as_ref().map(|i| i.lo_decimal(DECIMAL_DIGITS));
        let hi = |x: &Option<crate::eig::Interval>| x.as_ref().map(|i| i.hi_decimal(DECIMAL_DIGITS));
        RunRecord {
            index: self.index,
            graph_id: self.graph_id.to_string(),
            graph6: self.graph6.to_string(),
            edge: self.edge.map(|(u, v)| [u, v]),
            check_id: v.check_id.as_str().to_string(),
            relation: v.relation.symbol().to_string(),
            lhs_lo: lo(&v.lhs),
            lhs_hi: hi(&v.lhs),
            rhs_lo: lo(&v.rhs),
            rhs_hi: hi(&v.rhs),
            verdict: v.verdict,
            hypothesis_report: v.hypothesis_report(),
            precision_bits: v.precision_bits,
            margin: v.margin().map(|m| decimal(&m, DECIMAL_DIGITS, Round::Down)),
            notes: v.notes.clone(),
            wall_time_us: self.wall_time.as_micros() as u64,
        }
    }
}

/// Serialized form of an [`Outcome`]: one JSON line in the detail report.
///
/// Endpoints are decimal strings rounded outward, so `[lhs_lo, lhs_hi]` still
/// encloses the quantity. `margin` is rounded down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub index: usize,
    pub graph_id: String,
    pub graph6: String,
    pub edge: Option<[usize; 2]>,
    pub check_id: String,
    pub relation: String,
    pub lhs_lo: Option<String>,
    pub lhs_hi: Option<String>,
    pub rhs_lo: Option<String>,
    pub rhs_hi: Option<String>,
    pub verdict: Verdict,
    pub hypothesis_report: String,
    pub precision_bits: u32,
    pub margin: Option<String>,
    pub notes: Vec<String>,
    pub wall_time_us: u64,
}

impl RunRecord {
    /// Copy with timing zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> RunRecord {
        RunRecord {
            wall_time_us: 0,
            ..self.clone()
        }
    }
}

/// Exact value of a decimal string as written by the report: an integer, or
/// `[-]d.ddd e[-]k`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int_part, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() || !int_part.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut x = BigRational::from_integer(all);
    let scale = BigRational::from_integer(num_traits::pow(ten, shift.unsigned_abs() as usize));
    if shift >= 0 {
        x *= scale;
    } else {
        x /= scale;
    }
    if neg && !x.is_zero() {
        x = -x;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::check_nonbipartite_gap;
    use crate::bounds::TolerancePolicy;
    use crate::eig::interval::rational;
    use crate::graph::{generate, Family};

    #[test]
    fn decimals_round_trip() {
        for (num, den) in [(1, 3), (-2, 7), (5, 1), (0, 1), (-1, 1 << 40), (123456789, 1000)] {
            let x = rational(num, den);
            let down = parse_decimal(&decimal(&x, DECIMAL_DIGITS, Round::Down)).unwrap();
            let up = parse_decimal(&decimal(&x, DECIMAL_DIGITS, Round::Up)).unwrap();
            assert!(down <= x && x <= up, "{x}");
        }
        assert_eq!(parse_decimal("-1.5e-2"), Some(rational(-3, 200)));
        assert_eq!(parse_decimal("12"), Some(rational(12, 1)));
        assert_eq!(parse_decimal("x"), None);
        assert_eq!(parse_decimal(".5"), None);
    }

    #[test]
    fn record_json_round_trip() {
        let c5 = generate(Family::Cycle(5)).unwrap();
        let v = check_nonbipartite_gap(&c5, &TolerancePolicy::default());
        let o = Outcome {
            index: 3,
            graph_id: c5.to_graph6().into(),
            graph6: c5.to_graph6().into(),
            edge: None,
            verdict: v,
            wall_time: Duration::from_micros(17),
        };
        let r = o.record();
        assert_eq!(r.check_id, "T2");
        assert_eq!(r.verdict, Verdict::Holds);
        let lo = parse_decimal(r.lhs_lo.as_ref().unwrap()).unwrap();
        let hi = parse_decimal(r.lhs_hi.as_ref().unwrap()).unwrap();
        let exact = o.verdict.lhs.as_ref().unwrap();
        assert!(&lo <= exact.lo() && exact.hi() <= &hi);
        let line = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<RunRecord>(&line).unwrap(), r);
    }
}
