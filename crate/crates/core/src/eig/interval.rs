//! Closed intervals with exact rational endpoints.
//!
//! Arithmetic is exact on the endpoints, so every result encloses the exact
//! value of the corresponding real expression. Eigenvalue enclosures have
//! dyadic endpoints; quotients may not.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

/// Rounding direction for decimal rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mantissa / 2^q` in lowest terms. Only powers of two can cancel, so this
/// avoids a general gcd.
pub fn dyadic(mantissa: &BigInt, q: u32) -> BigRational {
    dyadic_owned(mantissa.clone(), q as u64)
}

pub fn dyadic_owned(mantissa: BigInt, q: u64) -> BigRational {
    if mantissa.is_zero() {
        return BigRational::zero();
    }
    let tz = mantissa.trailing_zeros().unwrap_or(0).min(q);
    BigRational::new_raw(mantissa >> tz, BigInt::one() << (q - tz))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(cmp(&lo, &hi).is_le(), "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn from_int(x: i64) -> Self {
        Self::point(BigRational::from_integer(x.into()))
    }

    pub fn from_bigint(x: BigInt) -> Self {
        Self::point(BigRational::from_integer(x))
    }

    /// `[lo / 2^q, hi / 2^q]`.
    pub fn from_dyadic(lo: &BigInt, hi: &BigInt, q: u32) -> Self {
        Self::new(dyadic(lo, q), dyadic(hi, q))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        cmp(&self.lo, x).is_le() && cmp(x, &self.hi).is_le()
    }

    pub fn is_point(&self) -> bool {
        cmp(&self.lo, &self.hi).is_eq()
    }

    /// Largest absolute value over the interval.
    pub fn magnitude(&self) -> BigRational {
        max(self.lo.abs(), self.hi.abs())
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    /// Every element strictly greater than every element of `other`.
    pub fn certainly_gt(&self, other: &Interval) -> bool {
        cmp(&self.lo, &other.hi).is_gt()
    }

    pub fn certainly_ge(&self, other: &Interval) -> bool {
        cmp(&self.lo, &other.hi).is_ge()
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Interval {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            })
        } else {
            None
        }
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        other.recip().map(|r| self * &r)
    }

    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::from_int(1);
        }
        let a = pow_reduced(&self.lo, e);
        let b = pow_reduced(&self.hi, e);
        if e % 2 == 1 || !self.lo.is_negative() {
            Interval { lo: a, hi: b }
        } else if !self.hi.is_positive() {
            Interval { lo: b, hi: a }
        } else {
            Interval {
                lo: BigRational::zero(),
                hi: max(a, b),
            }
        }
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        if k.is_negative() {
            Interval {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            Interval {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: min(self.lo.clone(), other.lo.clone()),
            hi: max(self.hi.clone(), other.hi.clone()),
        }
    }

    /// Enclosure of `sqrt(x)` for `x >= 0`, endpoints rounded outward to `bits` fractional bits.
    pub fn sqrt(&self, bits: u32) -> Interval {
        assert!(!self.lo.is_negative(), "sqrt of a negative interval");
        Interval {
            lo: sqrt_bound(&self.lo, bits, Round::Down),
            hi: sqrt_bound(&self.hi, bits, Round::Up),
        }
    }

    pub fn lo_decimal(&self, digits: usize) -> String {
        decimal(&self.lo, digits, Round::Down)
    }

    pub fn hi_decimal(&self, digits: usize) -> String {
        decimal(&self.hi, digits, Round::Up)
    }
}

/// Dyadic bound on `sqrt(x)` with `bits` fractional bits, rounded in direction `dir`.
pub fn sqrt_bound(x: &BigRational, bits: u32, dir: Round) -> BigRational {
    assert!(!x.is_negative());
    let scaled = x.numer() << (2 * bits as usize);
    let n = match dir {
        Round::Down => scaled.div_floor(x.denom()),
        Round::Up => scaled.div_ceil(x.denom()),
    };
    let mut root = n.sqrt();
    if dir == Round::Up && &root * &root < n {
        root += 1;
    }
    dyadic(&root, bits)
}

// Powers of a reduced fraction stay reduced, so skip the gcd work.
fn pow_reduced(x: &BigRational, e: u32) -> BigRational {
    BigRational::new_raw(x.numer().pow(e), x.denom().pow(e))
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return Interval {
                lo: &self.lo * &o.lo,
                hi: &self.hi * &o.hi,
            };
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min_by(|a, b| cmp(a, b)).unwrap().clone();
        let hi = c.iter().max_by(|a, b| cmp(a, b)).unwrap().clone();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(12), self.hi_decimal(12))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(17), self.hi_decimal(17))
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Decimal rendering with `digits` significant digits, rounded toward -inf
/// (`Down`) or +inf (`Up`). Integers are printed exactly.
pub fn decimal(x: &BigRational, digits: usize, dir: Round) -> String {
    // Inputs need not be in lowest terms.
    if x.numer().is_multiple_of(x.denom()) {
        return (x.numer() / x.denom()).to_string();
    }
    let digits = digits.max(1) as i64;
    let neg = x.is_negative();
    let mag = x.abs();
    // floor(log10(mag)), estimated from bit lengths then corrected.
    let bits = mag.numer().bits() as i64 - mag.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let ten_pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    while cmp(&ten_pow(e), &mag).is_gt() {
        e -= 1;
    }
    while cmp(&ten_pow(e + 1), &mag).is_le() {
        e += 1;
    }
    let scaled = &mag * ten_pow(digits - 1 - e);
    // Magnitude rounding: away from zero when the requested direction points away.
    let away = (dir == Round::Up) != neg;
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut m = if away && !r.is_zero() { q + 1 } else { q };
    let mut text = m.to_string();
    if text.len() as i64 > digits {
        e += 1;
        m /= 10;
        text = m.to_string();
    }
    let (head, tail) = text.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg && m.sign() != Sign::NoSign { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Total order on rationals by cross-multiplication. `Ratio`'s own `Ord`
/// expands continued fractions, which is slow for dyadics with long denominators.
pub fn cmp(a: &BigRational, b: &BigRational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// `a - b` without reducing to lowest terms.
pub fn difference(a: &BigRational, b: &BigRational) -> BigRational {
    if a.denom() == b.denom() {
        return BigRational::new_raw(a.numer() - b.numer(), a.denom().clone());
    }
    BigRational::new_raw(a.numer() * b.denom() - b.numer() * a.denom(), a.denom() * b.denom())
}

pub fn min(a: BigRational, b: BigRational) -> BigRational {
    if cmp(&a, &b).is_le() {
        a
    } else {
        b
    }
}

pub fn max(a: BigRational, b: BigRational) -> BigRational {
    if cmp(&a, &b).is_ge() {
        a
    } else {
        b
    }
}

/// Compares `x` against zero.
pub fn sign_of(x: &BigRational) -> Ordering {
    x.cmp(&BigRational::zero())
}
