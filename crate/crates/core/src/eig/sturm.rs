//! Sturm sequences over the rationals.
//!
//! The characteristic polynomial is split into its gcd chain
//! `g_0 = p, g_{k+1} = gcd(g_k, g_k')`; the roots of `g_k` are exactly the roots
//! of `p` with multiplicity greater than `k`, so summing the distinct-root
//! counts over the chain counts roots with multiplicity.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::charpoly::CharPoly;

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(k.into()))
            .collect(),
    )
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn div_exact(a: &Poly, b: &Poly) -> Poly {
    let db = b.len() - 1;
    let mut r = a.clone();
    let mut q = vec![BigRational::zero(); a.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &b[db];
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

fn monic(p: Poly) -> Poly {
    let lead = p.last().unwrap().clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

fn eval_sign(p: &Poly, t: &BigRational) -> i8 {
    let v = p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c);
    sign(&v)
}

fn sign(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Distinct roots of the square-free `f` strictly below `t`.
fn distinct_below(f: &Poly, t: &BigRational) -> usize {
    let mut chain = vec![f.clone(), derivative(f)];
    while chain.last().is_some_and(|p| p.len() > 1) {
        let k = chain.len();
        let r = rem(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    let at_minus_inf = variations(chain.iter().map(|p| {
        let s = sign(p.last().unwrap());
        if (p.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    let at_t = variations(chain.iter().map(|p| eval_sign(p, t)));
    at_minus_inf - at_t - usize::from(eval_sign(f, t) == 0)
}

/// Roots of `p` strictly below `t`, with multiplicity.
pub fn count_below(p: &CharPoly, t: &BigRational) -> usize {
    let mut g: Poly = p
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut total = 0;
    while g.len() > 1 {
        let next = gcd(&g, &derivative(&g));
        let squarefree = if next.len() == 1 {
            g.clone()
        } else {
            div_exact(&g, &next)
        };
        total += distinct_below(&squarefree, t);
        g = next;
    }
    debug_assert!(g.len() == 1 && g[0].is_one());
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::interval::rational;
    use num_bigint::BigInt;

    fn poly(c: &[i64]) -> CharPoly {
        CharPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn repeated_roots_counted_with_multiplicity() {
        // (x - 1)^3 (x + 2) = x^4 - x^3 - 3x^2 + 5x - 2
        let p = poly(&[-2, 5, -3, -1, 1]);
        assert_eq!(count_below(&p, &rational(0, 1)), 1);
        assert_eq!(count_below(&p, &rational(1, 1)), 1);
        assert_eq!(count_below(&p, &rational(3, 2)), 4);
        assert_eq!(count_below(&p, &rational(-2, 1)), 0);
        assert_eq!(count_below(&p, &rational(-19, 10)), 1);
    }

    #[test]
    fn linear_and_constant_edges() {
        assert_eq!(count_below(&poly(&[0, 1]), &rational(0, 1)), 0);
        assert_eq!(count_below(&poly(&[0, 1]), &rational(1, 7)), 1);
        assert_eq!(count_below(&poly(&[1]), &rational(5, 1)), 0);
    }
}
