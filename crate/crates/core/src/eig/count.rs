//! Counting adjacency eigenvalues strictly below a shift `t`.
//!
//! Three certified routes:
//! * characteristic polynomial + sign variations of the shifted polynomial
//!   (a real-rooted polynomial has exactly as many positive roots as sign
//!   variations, multiplicities included);
//! * exact rational symmetric elimination of `A - tI` with 1x1/2x2 pivots
//!   (Sylvester inertia);
//! * outward-rounded `f64` interval elimination, which may decline to answer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::Graph;

use super::charpoly::CharPoly;

/// Backend for a single count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Characteristic polynomial, sign variations after a Taylor shift.
    CharPoly,
    /// Characteristic polynomial, Sturm chains of the square-free factors.
    Sturm,
    /// Exact rational LDL^T with 1x1/2x2 pivots.
    ExactLdl,
    /// Outward-rounded floating LDL^T. May be undecided.
    IntervalLdl,
}

/// Number of eigenvalues of `g` strictly below `t`.
///
/// Returns `None` only for [`CountMethod::IntervalLdl`] when a pivot cannot be
/// separated from zero or `t` is not representable as an `f64`.
pub fn eigenvalue_count_below(g: &Graph, t: &BigRational, method: CountMethod) -> Option<usize> {
    match method {
        CountMethod::CharPoly => Some(count_below_charpoly(&CharPoly::of(g), t)),
        CountMethod::Sturm => Some(super::sturm::count_below(&CharPoly::of(g), t)),
        CountMethod::ExactLdl => Some(count_below_exact_ldl(g, t)),
        CountMethod::IntervalLdl => {
            let tf = exact_f64(t)?;
            count_below_interval_ldl(g, tf)
        }
    }
}

fn exact_f64(t: &BigRational) -> Option<f64> {
    use num_traits::ToPrimitive;
    let f = t.to_f64()?;
    (f.is_finite() && BigRational::from_float(f).as_ref() == Some(t)).then_some(f)
}

/// Roots of the characteristic polynomial strictly below `t`.
pub fn count_below_charpoly(p: &CharPoly, t: &BigRational) -> usize {
    let n = p.degree();
    let (above, at) = shifted_signs(p.coeffs(), t.numer(), t.denom());
    n - above - at
}

/// Roots strictly below `c / 2^q`.
pub(crate) fn count_below_dyadic(p: &CharPoly, c: &BigInt, q: u32) -> usize {
    let n = p.degree();
    let (above, at) = shifted_signs(p.coeffs(), c, &(BigInt::one() << q));
    n - above - at
}

/// For `t = a / b` (`b > 0`) returns (roots above `t`, multiplicity of `t`).
fn shifted_signs(c: &[BigInt], a: &BigInt, b: &BigInt) -> (usize, usize) {
    let n = c.len() - 1;
    // Q(w) = sum_k c_k b^(n-k) (w + a)^k = b^n p(t + w/b), by Horner in (w + a).
    let mut r: Vec<BigInt> = Vec::with_capacity(n + 1);
    r.push(c[n].clone());
    let mut bpow = BigInt::one();
    for k in (0..n).rev() {
        bpow *= b;
        r.push(BigInt::zero());
        for i in (1..r.len()).rev() {
            let carry = &r[i - 1] * a;
            let prev = std::mem::take(&mut r[i - 1]);
            r[i] += prev;
            r[i - 1] = carry;
        }
        // r now holds (old) * (w + a) with r[i] = old[i-1] + a*old[i]
        r[0] += &c[k] * &bpow;
    }
    let at = r.iter().take_while(|x| x.is_zero()).count();
    let mut variations = 0;
    let mut last = 0i8;
    for x in &r[at..] {
        let s = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            variations += 1;
        }
        last = s;
    }
    (variations, at)
}

/// Inertia of the symmetric rational matrix `A - tI`: number of negative eigenvalues.
pub fn count_below_exact_ldl(g: &Graph, t: &BigRational) -> usize {
    let n = g.order();
    let mut s: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        -t.clone()
                    } else if g.has_edge(i, j) {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut negative = 0;
    while !alive.is_empty() {
        if let Some(pos) = alive.iter().position(|&i| !s[i][i].is_zero()) {
            let p = alive.swap_remove(pos);
            let d = s[p][p].clone();
            if d.is_negative() {
                negative += 1;
            }
            for &r in &alive {
                if s[r][p].is_zero() {
                    continue;
                }
                let l = &s[r][p] / &d;
                for &c in &alive {
                    if !s[p][c].is_zero() {
                        let delta = &l * &s[p][c];
                        s[r][c] -= delta;
                    }
                }
            }
            continue;
        }
        // All remaining diagonal entries vanish: pivot on a nonzero off-diagonal pair.
        let pair = alive
            .iter()
            .enumerate()
            .find_map(|(a, &i)| alive[a + 1..].iter().find(|&&j| !s[i][j].is_zero()).map(|&j| (i, j)));
        let Some((i, j)) = pair else { break };
        // Block [[0, b], [b, 0]] has one negative and one positive eigenvalue.
        negative += 1;
        alive.retain(|&x| x != i && x != j);
        let b = s[i][j].clone();
        // Schur complement: S_rc -= (S_ri S_jc + S_rj S_ic) / b
        for &r in &alive {
            for &c in &alive {
                let delta = (&s[r][i] * &s[j][c] + &s[r][j] * &s[i][c]) / &b;
                if !delta.is_zero() {
                    s[r][c] -= delta;
                }
            }
        }
    }
    negative
}

#[derive(Clone, Copy, Debug)]
struct Ival {
    lo: f64,
    hi: f64,
}

impl Ival {
    fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }
    fn sub(self, o: Self) -> Self {
        Self {
            lo: (self.lo - o.hi).next_down(),
            hi: (self.hi - o.lo).next_up(),
        }
    }
    fn mul(self, o: Self) -> Self {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
    fn div(self, o: Self) -> Self {
        debug_assert!(o.lo > 0.0 || o.hi < 0.0);
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
    /// Smallest absolute value in the interval.
    fn mignitude(self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }
}

/// Negative inertia of `A - tI` in outward-rounded floating point, or `None`
/// when some pivot interval straddles zero.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn count_below_interval_ldl(g: &Graph, t: f64) -> Option<usize> {
    let n = g.order();
    let mut s: Vec<Ival> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            Ival::point(if i == j {
                -t
            } else if g.has_edge(i, j) {
                1.0
            } else {
                0.0
            })
        })
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut negative = 0;
    while !alive.is_empty() {
        let (pos, &p) = alive
            .iter()
            .enumerate()
            .max_by(|a, b| s[a.1 * n + a.1].mignitude().total_cmp(&s[b.1 * n + b.1].mignitude()))?;
        let d = s[p * n + p];
        // Negated so that NaN also declines.
        if !(d.mignitude() > 0.0) || !d.lo.is_finite() || !d.hi.is_finite() {
            return None;
        }
        if d.hi < 0.0 {
            negative += 1;
        }
        alive.swap_remove(pos);
        for (a, &r) in alive.iter().enumerate() {
            let srp = s[r * n + p];
            if srp.lo == 0.0 && srp.hi == 0.0 {
                continue;
            }
            let l = srp.div(d);
            for &c in &alive[a..] {
                let v = s[r * n + c].sub(l.mul(s[p * n + c]));
                s[r * n + c] = v;
                s[c * n + r] = v;
            }
        }
    }
    Some(negative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::interval::rational;
    use crate::graph::{generate, Family};

    fn all_methods(g: &Graph, t: &BigRational) -> Vec<Option<usize>> {
        [
            CountMethod::CharPoly,
            CountMethod::Sturm,
            CountMethod::ExactLdl,
            CountMethod::IntervalLdl,
        ]
        .iter()
        .map(|&m| eigenvalue_count_below(g, t, m))
        .collect()
    }

    #[test]
    fn closed_form_counts() {
        let k3 = generate(Family::Complete(3)).unwrap();
        // Zero diagonal: the floating elimination has no usable 1x1 pivot.
        let c = all_methods(&k3, &rational(0, 1));
        assert_eq!(&c[..3], &[Some(2); 3]);
        assert!(c[3].is_none() || c[3] == Some(2));
        assert_eq!(
            eigenvalue_count_below(&k3, &rational(1, 2), CountMethod::IntervalLdl),
            Some(2)
        );
        let p3 = generate(Family::Path(3)).unwrap();
        // t = 0 is an eigenvalue of P3: strict count is 1.
        let c = all_methods(&p3, &rational(0, 1));
        assert_eq!(&c[..3], &[Some(1); 3]);
        assert!(c[3].is_none() || c[3] == Some(1));
        let c5 = generate(Family::Cycle(5)).unwrap();
        let c = all_methods(&c5, &rational(2, 1));
        assert_eq!(&c[..3], &[Some(4); 3]);
    }

    #[test]
    fn counts_at_eigenvalues_with_multiplicity() {
        // K4 spectrum {3, -1, -1, -1}
        let k4 = generate(Family::Complete(4)).unwrap();
        for (t, want) in [((-1, 1), 0), ((-1, 2), 3), ((3, 1), 3), ((7, 2), 4), ((-3, 2), 0)] {
            let t = rational(t.0, t.1);
            for m in [CountMethod::CharPoly, CountMethod::Sturm, CountMethod::ExactLdl] {
                assert_eq!(eigenvalue_count_below(&k4, &t, m), Some(want), "{m:?} at {t}");
            }
        }
        // K_{2,2} spectrum {2, 0, 0, -2}: forces 2x2 pivots at t = 0.
        let c4 = generate(Family::Cycle(4)).unwrap();
        assert_eq!(count_below_exact_ldl(&c4, &rational(0, 1)), 1);
        assert_eq!(count_below_exact_ldl(&c4, &rational(1, 1000)), 3);
    }

    #[test]
    fn non_dyadic_shift() {
        let p3 = generate(Family::Path(3)).unwrap();
        // sqrt 2 ~ 1.41421: 7/5 below, 3/2 above
        assert_eq!(
            eigenvalue_count_below(&p3, &rational(7, 5), CountMethod::CharPoly),
            Some(2)
        );
        assert_eq!(
            eigenvalue_count_below(&p3, &rational(3, 2), CountMethod::CharPoly),
            Some(3)
        );
        assert_eq!(
            eigenvalue_count_below(&p3, &rational(1, 3), CountMethod::IntervalLdl),
            None
        );
    }

    #[test]
    fn backends_agree_on_small_graphs() {
        let shifts: Vec<BigRational> = (-14..=14).map(|k| rational(k, 4)).chain([rational(1, 1024)]).collect();
        for g in crate::graph::enumerate_connected(4).unwrap() {
            for t in &shifts {
                let exact = count_below_charpoly(&CharPoly::of(&g), t);
                assert_eq!(count_below_exact_ldl(&g, t), exact, "{g:?} t={t}");
                assert_eq!(
                    super::super::sturm::count_below(&CharPoly::of(&g), t),
                    exact,
                    "{g:?} t={t}"
                );
                if let Some(c) = eigenvalue_count_below(&g, t, CountMethod::IntervalLdl) {
                    assert_eq!(c, exact, "{g:?} t={t}");
                }
            }
        }
    }
}
