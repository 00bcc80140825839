//! Scalar backends: exact rationals for identity checks, `f64` for quadrature.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Exact,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

/// Field operations shared by both backends.
///
/// Methods take references so the big-rational backend avoids needless clones.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn over(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Q) -> Self;
    fn to_f64(&self) -> f64;
    /// Square root when it exists in the backend (perfect squares for rationals).
    fn try_sqrt(&self) -> Option<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).over(&Self::from_i64(den))
    }
}

impl Scalar for Q {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn over(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn try_sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn over(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(q: &Q) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

/// Shorthand for an exact rational `num/den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(p, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats a rational as `"p/q"` (denominator always present).
pub fn format_rational(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Converts an `f64` to the nearest "simple" rational; used only for CLI input.
pub fn rational_from_decimal(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.contains('/') {
        return parse_rational(s);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let numer: BigInt = digits.parse().map_err(|_| Error::Parse(s.to_string()))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let v = Q::new(numer, denom);
    Ok(if neg { -v } else { v })
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Rising factorial `(a)_m` in any scalar backend.
pub fn pochhammer<S: Scalar>(a: &S, m: u32) -> S {
    let mut acc = S::one();
    let mut term = a.clone();
    for _ in 0..m {
        acc = acc.times(&term);
        term = term.plus(&S::one());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let v = parse_rational("-6/4").unwrap();
        assert_eq!(v, q(-3, 2));
        assert_eq!(format_rational(&v), "-3/2");
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimal_input() {
        assert_eq!(rational_from_decimal("0.2").unwrap(), q(1, 5));
        assert_eq!(rational_from_decimal("-1.25").unwrap(), q(-5, 4));
        assert_eq!(rational_from_decimal("3/5").unwrap(), q(3, 5));
        assert!(rational_from_decimal("1e3").is_err());
    }

    #[test]
    fn perfect_square_roots() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
        assert_eq!(rational_sqrt(&q(-1, 1)), None);
    }

    #[test]
    fn rising_factorial() {
        assert_eq!(pochhammer(&q(1, 2), 2), q(3, 4));
        assert_eq!(pochhammer(&qi(3), 0), qi(1));
        assert_eq!(pochhammer(&2.0f64, 3), 24.0);
    }
}
