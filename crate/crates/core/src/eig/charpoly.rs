//! Exact integer characteristic polynomial `det(xI - A)`.
//!
//! Computed modulo several primes by Hessenberg reduction and recombined with
//! the Chinese remainder theorem. The number of primes comes from the bound
//! `sum |c_k| <= prod (1 + |lambda_i|) <= (1 + max_degree)^n`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::Graph;

/// Monic characteristic polynomial, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

const SMALL_PRIME: u64 = 2_147_483_647;

impl CharPoly {
    pub fn of(g: &Graph) -> Self {
        if let Some(small) = small_coefficients(g) {
            return Self {
                coeffs: small.into_iter().map(BigInt::from).collect(),
            };
        }
        Self {
            coeffs: multimodular(g),
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            coeffs.last().is_some_and(One::is_one),
            "characteristic polynomial must be monic"
        );
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients as `i64` when they all fit.
    pub fn small(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// Upper bound on the bit length of `sum |c_k|`, with two spare bits.
fn coefficient_bits(g: &Graph) -> u64 {
    let n = g.order() as f64;
    let delta = g.max_degree() as f64;
    (n * (1.0 + delta).log2()).ceil() as u64 + 2
}

/// Exact coefficients through a single 31-bit prime when the bound allows.
pub(crate) fn small_coefficients(g: &Graph) -> Option<Vec<i64>> {
    if coefficient_bits(g) + 1 >= 31 {
        return None;
    }
    let p = SMALL_PRIME;
    let residues = charpoly_mod(g, p, |a, b| a * b % p);
    Some(
        residues
            .into_iter()
            .map(|r| if r > p / 2 { r as i64 - p as i64 } else { r as i64 })
            .collect(),
    )
}

fn multimodular(g: &Graph) -> Vec<BigInt> {
    let needed = coefficient_bits(g) + 1;
    let primes = primes_below_2_62();
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut bits = 0;
    for &p in primes {
        let residues = charpoly_mod(g, p, |a, b| ((a as u128 * b as u128) % p as u128) as u64);
        if acc.is_empty() {
            acc = residues.into_iter().map(BigInt::from).collect();
        } else {
            // Garner step: x += M * ((r - x) * M^-1 mod p)
            let m_mod = (&modulus % p).to_u64().unwrap();
            let m_inv = inverse_mod(m_mod, p);
            for (x, r) in acc.iter_mut().zip(residues) {
                let x_mod = (&*x % p + p).to_u64().unwrap() % p;
                let diff = (r + p - x_mod) % p;
                let t = (diff as u128 * m_inv as u128 % p as u128) as u64;
                *x += &modulus * t;
            }
        }
        modulus *= p;
        bits += 61;
        if bits >= needed {
            break;
        }
    }
    assert!(bits >= needed, "ran out of CRT primes");
    let half = &modulus >> 1;
    acc.into_iter()
        .map(|x| if x > half { x - &modulus } else { x })
        .collect()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    // Below 2^32 products fit in a u64; the wide path is much slower.
    let mul = |a: u64, b: u64| {
        if p < 1 << 32 {
            a * b % p
        } else {
            (a as u128 * b as u128 % p as u128) as u64
        }
    };
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Characteristic polynomial modulo prime `p` (coefficients in increasing degree).
fn charpoly_mod(g: &Graph, p: u64, mul: impl Fn(u64, u64) -> u64) -> Vec<u64> {
    let n = g.order();
    let mut h = vec![0u64; n * n];
    for (u, v) in g.edges() {
        h[u * n + v] = 1;
        h[v * n + u] = 1;
    }
    let sub = |a: u64, b: u64| if a >= b { a - b } else { a + p - b };
    let add = |a: u64, b: u64| {
        let s = a + b;
        if s >= p {
            s - p
        } else {
            s
        }
    };
    // Similarity reduction to upper Hessenberg form.
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i * n + j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            for c in 0..n {
                h.swap(piv * n + c, (j + 1) * n + c);
            }
            for r in 0..n {
                h.swap(r * n + piv, r * n + j + 1);
            }
        }
        let inv = inverse_mod(h[(j + 1) * n + j], p);
        for i in j + 2..n {
            let hij = h[i * n + j];
            if hij == 0 {
                continue;
            }
            let u = mul(hij, inv);
            for c in 0..n {
                let t = mul(u, h[(j + 1) * n + c]);
                h[i * n + c] = sub(h[i * n + c], t);
            }
            for r in 0..n {
                let t = mul(u, h[r * n + i]);
                h[r * n + j + 1] = add(h[r * n + j + 1], t);
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut next = vec![0u64; k + 1];
        let diag = h[(k - 1) * n + (k - 1)];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = add(next[d + 1], c);
            next[d] = sub(next[d], mul(diag, c));
        }
        let mut prod = 1u64;
        for i in (1..k).rev() {
            prod = mul(prod, h[i * n + (i - 1)]);
            if prod == 0 {
                break;
            }
            let coef = mul(h[(i - 1) * n + (k - 1)], prod);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i - 1].iter().enumerate() {
                next[d] = sub(next[d], mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, each larger than `2^61`.
fn primes_below_2_62() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(400);
        let mut c = (1u64 << 62) - 1;
        while out.len() < 400 {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Faddeev-LeVerrier over exact integers, independent of the modular route.
    fn leverrier(g: &Graph) -> Vec<BigInt> {
        let n = g.order();
        let a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(g.has_edge(i, j) as i64)).collect())
            .collect();
        let matmul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum()).collect())
                .collect()
        };
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
        for k in 1..=n {
            let mut next = matmul(&a, &m);
            for i in 0..n {
                next[i][i] += &c[n - k + 1];
            }
            m = next;
            let am = matmul(&a, &m);
            let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
            c[n - k] = -tr / BigInt::from(k);
        }
        c
    }

    #[test]
    fn closed_forms() {
        // K3: (x-2)(x+1)^2 = x^3 - 3x - 2
        assert_eq!(
            CharPoly::of(&generate(Family::Complete(3)).unwrap()).coeffs(),
            &ints(&[-2, -3, 0, 1])[..]
        );
        // P3: x^3 - 2x
        assert_eq!(
            CharPoly::of(&generate(Family::Path(3)).unwrap()).coeffs(),
            &ints(&[0, -2, 0, 1])[..]
        );
        // single vertex: x
        assert_eq!(CharPoly::of(&Graph::empty(1).unwrap()).coeffs(), &ints(&[0, 1])[..]);
    }

    #[test]
    fn modular_route_matches_leverrier() {
        for g in [
            generate(Family::Petersen).unwrap(),
            generate(Family::CompleteBipartite(3, 4)).unwrap(),
            generate(Family::Cycle(7)).unwrap(),
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap(),
        ] {
            assert_eq!(CharPoly::of(&g).coeffs(), &leverrier(&g)[..], "{g:?}");
            assert_eq!(
                CharPoly {
                    coeffs: multimodular(&g)
                }
                .coeffs(),
                &leverrier(&g)[..],
                "{g:?}"
            );
        }
    }

    #[test]
    fn large_coefficients_need_several_primes() {
        let g = generate(Family::Complete(30)).unwrap();
        let p = CharPoly::of(&g);
        // (x - 29)(x + 1)^29 evaluated at 0 is -29.
        assert_eq!(p.coeffs()[0], BigInt::from(-29));
        assert!(small_coefficients(&g).is_none());
        assert!(p.eval(&BigRational::from_integer(29.into())).is_zero());
        assert!(p.eval(&BigRational::from_integer((-1).into())).is_zero());
    }

    #[test]
    fn primes_are_prime() {
        let ps = primes_below_2_62();
        assert!(ps.iter().take(5).all(|&p| p > 1 << 61 && is_prime(p)));
        assert!(!is_prime((1 << 61) + 1));
        assert!(is_prime((1u64 << 61) - 1));
    }
}
