//! Eigenvector estimates with certified entrywise error.
//!
//! A floating eigenvector is rounded to an integer vector `z`. With the exact
//! Rayleigh quotient `rho = z'Az / z'z`, the exact residual
//! `R = |Az|^2 - (z'Az)^2 / z'z` and a certified gap `gamma` between `rho` and
//! the rest of the spectrum, the angle `theta` to the true eigenvector obeys
//! `sin(theta) <= sqrt(R) / (gamma |z|)`. Then for the suitably signed unit
//! eigenvector `v`, `| |z| v - z |_2 <= sqrt(2 R) / gamma =: E`, which bounds
//! every coordinate.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::graph::{is_connected, Graph};

use super::enclose::Spectrum;
use super::interval::{dyadic_owned, Interval};
use super::EigError;

/// Bits of the integer rounding `z = round(v * 2^SCALE_BITS)`.
pub const SCALE_BITS: u32 = 40;
/// Slack covering the rounding of `z_i / |z|` to `f64`.
const ENTRY_SLACK: f64 = 1.0 / (1u64 << 50) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Largest,
    Smallest,
}

#[derive(Debug, Clone)]
pub struct EigenvectorEstimate {
    /// Approximate unit eigenvector.
    pub entries: Vec<f64>,
    /// Integer vector the certificate is about; `entries ~ scaled / |scaled|`.
    pub scaled: Vec<BigInt>,
    /// Certified bound on `max_i |entries_i - v_i|`; infinite when not certified.
    pub entrywise_error: f64,
    /// Certified bound on `| |z| v - z |_2` in the integer scale.
    pub scaled_error: Option<BigRational>,
    /// Enclosure of the eigenvalue the vector belongs to.
    pub eigenvalue: Interval,
    /// Exact Rayleigh quotient of `scaled`.
    pub rayleigh: BigRational,
}

impl EigenvectorEstimate {
    pub fn is_certified(&self) -> bool {
        self.scaled_error.is_some()
    }

    /// Every entry certified strictly positive.
    pub fn certified_positive(&self) -> bool {
        self.is_certified() && self.entries.iter().all(|&x| x - self.entrywise_error > 0.0)
    }

    /// `ceil(E)` in the integer scale.
    pub fn scaled_error_ceil(&self) -> Option<BigInt> {
        self.scaled_error.as_ref().map(|e| e.ceil().to_integer())
    }
}

fn float_eigenvector(g: &Graph, target: Target) -> Vec<f64> {
    let n = g.order();
    let m = DMatrix::from_row_slice(n, n, &g.adjacency_f64());
    let eig = m.symmetric_eigen();
    let pick = (0..n)
        .max_by(|&a, &b| {
            let (x, y) = (eig.eigenvalues[a], eig.eigenvalues[b]);
            match target {
                Target::Largest => x.total_cmp(&y),
                Target::Smallest => y.total_cmp(&x),
            }
        })
        .expect("n >= 1");
    let mut v: Vec<f64> = eig.eigenvectors.column(pick).iter().copied().collect();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-9).copied() {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    v
}

fn adjacency_times(g: &Graph, z: &[BigInt]) -> Vec<BigInt> {
    (0..g.order()).map(|v| g.neighbors(v).map(|u| &z[u]).sum()).collect()
}

/// Certifies an eigenvector for the largest or smallest eigenvalue.
///
/// Refuses (infinite error) when the eigenvalue cannot be separated from the
/// next one at the precision cap.
pub fn eigenvector_estimate(spec: &Spectrum, target: Target) -> EigenvectorEstimate {
    let g = spec.graph();
    let n = g.order();
    let v = float_eigenvector(g, target);
    let z: Vec<BigInt> = v
        .iter()
        .map(|x| BigInt::from((x * (1u64 << SCALE_BITS) as f64).round() as i64))
        .collect();
    let az = adjacency_times(g, &z);
    let zz: BigInt = z.iter().map(|x| x * x).sum();
    let zaz: BigInt = z.iter().zip(&az).map(|(a, b)| a * b).sum();
    let azaz: BigInt = az.iter().map(|x| x * x).sum();
    let rho = BigRational::new(zaz.clone(), zz.clone());
    // Residual R = |Az|^2 - (z'Az)^2 / z'z, kept as the integer R z'z.
    let residual_num = &azaz * &zz - &zaz * &zaz;
    let (bits, idx) = (
        40u32,
        match target {
            Target::Largest => n - 1,
            Target::Smallest => 0,
        },
    );
    let eigenvalue = spec.eigenvalue(idx, bits).interval();
    let mut scaled_error = None;
    if n == 1 {
        scaled_error = Some(BigRational::zero());
    } else {
        for b in [bits, 80, spec.max_precision_bits()] {
            // gamma = G / (z'z 2^b) with G an integer.
            let g_num = match target {
                Target::Largest => (&zaz << b as usize) - (&spec.eigenvalue(n - 2, b).mantissa + 1u32) * &zz,
                Target::Smallest => &spec.eigenvalue(1, b).mantissa * &zz - (&zaz << b as usize),
            };
            if g_num.is_positive() {
                // E^2 = 2R / gamma^2 = 2 (R z'z) z'z 2^(2b) / G^2, then rounded up to 2^-64.
                let e2_num = (&residual_num * &zz) << (2 * b as usize + 1 + 128);
                let e2 = e2_num.div_ceil(&(&g_num * &g_num));
                let mut root = e2.sqrt();
                if &root * &root < e2 {
                    root += 1;
                }
                scaled_error = Some(dyadic_owned(root, 64));
                break;
            }
            if b >= spec.max_precision_bits() {
                break;
            }
        }
    }
    let norm_lo = dyadic_owned((&zz << 128usize).sqrt(), 64);
    let entrywise_error = match &scaled_error {
        Some(e) if norm_lo.is_positive() => (e / &norm_lo)
            .to_f64()
            .map_or(f64::INFINITY, |d| d.next_up() + ENTRY_SLACK),
        _ => f64::INFINITY,
    };
    let norm = zz.to_f64().unwrap_or(f64::NAN).sqrt();
    let entries = z.iter().map(|x| x.to_f64().unwrap_or(f64::NAN) / norm).collect();
    EigenvectorEstimate {
        entries,
        scaled: z,
        entrywise_error,
        scaled_error,
        eigenvalue,
        rayleigh: rho,
    }
}

/// Perron vector of a connected graph.
pub fn perron_vector_estimate(g: &Graph) -> Result<EigenvectorEstimate, EigError> {
    if !is_connected(g) {
        return Err(EigError::Disconnected);
    }
    Ok(eigenvector_estimate(&Spectrum::new(g), Target::Largest))
}

/// Exact Rayleigh quotient `x'Ax / x'x` as a point interval.
pub fn rayleigh_quotient(g: &Graph, x: &[BigRational]) -> Result<Interval, EigError> {
    if x.len() != g.order() {
        return Err(EigError::LengthMismatch {
            expected: g.order(),
            got: x.len(),
        });
    }
    let xx: BigRational = x.iter().map(|a| a * a).sum();
    if xx.is_zero() {
        return Err(EigError::ZeroVector);
    }
    let xax: BigRational =
        g.edges().map(|(u, v)| &x[u] * &x[v]).sum::<BigRational>() * BigRational::from_integer(2.into());
    Ok(Interval::point(xax / xx))
}

/// Rayleigh quotient of an `f64` vector; entries are converted exactly.
pub fn rayleigh_quotient_f64(g: &Graph, x: &[f64]) -> Result<Interval, EigError> {
    let exact: Option<Vec<BigRational>> = x.iter().map(|&a| BigRational::from_float(a)).collect();
    rayleigh_quotient(g, &exact.ok_or(EigError::NonFinite)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::interval::rational;
    use crate::graph::{generate, Family};

    #[test]
    fn path_vector_matches_closed_form() {
        let p3 = generate(Family::Path(3)).unwrap();
        let e = perron_vector_estimate(&p3).unwrap();
        let exact = [0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5];
        assert!(e.certified_positive());
        assert!(e.entrywise_error < 1e-9);
        for (a, b) in e.entries.iter().zip(exact) {
            assert!((a - b).abs() <= e.entrywise_error);
        }
    }

    #[test]
    fn regular_graph_vector_is_constant() {
        let c5 = generate(Family::Cycle(5)).unwrap();
        let e = perron_vector_estimate(&c5).unwrap();
        let c = 1.0 / 5f64.sqrt();
        assert!(e.entries.iter().all(|x| (x - c).abs() <= e.entrywise_error));
    }

    #[test]
    fn degenerate_smallest_is_refused() {
        // K4 has -1 with multiplicity 3.
        let k4 = generate(Family::Complete(4)).unwrap();
        let e = eigenvector_estimate(&Spectrum::new(&k4), Target::Smallest);
        assert!(!e.is_certified() && e.entrywise_error.is_infinite());
        let disconnected = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            perron_vector_estimate(&disconnected),
            Err(EigError::Disconnected)
        ));
    }

    #[test]
    fn rayleigh_examples() {
        let k3 = generate(Family::Complete(3)).unwrap();
        let ones = vec![rational(1, 1); 3];
        assert_eq!(rayleigh_quotient(&k3, &ones).unwrap(), Interval::from_int(2));
        let p3 = generate(Family::Path(3)).unwrap();
        assert_eq!(rayleigh_quotient(&p3, &ones).unwrap(), Interval::point(rational(4, 3)));
        let c5 = generate(Family::Cycle(5)).unwrap();
        let x: Vec<_> = [1, -1, 1, -1, 0].iter().map(|&a| rational(a, 1)).collect();
        assert_eq!(rayleigh_quotient(&c5, &x).unwrap(), Interval::point(rational(-3, 2)));
        assert!(matches!(
            rayleigh_quotient(&p3, &vec![rational(0, 1); 3]),
            Err(EigError::ZeroVector)
        ));
    }
}
