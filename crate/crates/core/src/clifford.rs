//! Exact and floating-point arithmetic in the universal Clifford algebra `Cl_n`
//! with the negative-definite convention `e_i e_i = -1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 6;

/// A basis blade `e_A`, stored as a bitmask over `{e_1, .., e_n}` (bit `i` is `e_{i+1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(pub u16);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn vector(i: usize) -> Blade {
        Blade(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Blade {
        Blade(indices.iter().fold(0u16, |m, &i| m | (1 << i)))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn fits(self, n: usize) -> bool {
        (self.0 as u32) < (1u32 << n)
    }

    /// `(-1)^{|A|(|A|-1)/2}` is negative.
    pub fn reversion_flips(self) -> bool {
        let g = self.grade();
        (g * g.saturating_sub(1) / 2) % 2 == 1
    }

    /// `(-1)^{|A|(|A|+1)/2}` is negative.
    pub fn conjugation_flips(self) -> bool {
        let g = self.grade();
        (g * (g + 1) / 2) % 2 == 1
    }
}

/// Product of two canonical blades: returns `(negative, blade)` with
/// `e_A e_B = (-1)^negative e_{A xor B}`.
///
/// The sign counts the transpositions needed to sort the concatenated index
/// list plus one factor of `-1` for every repeated index.
#[inline]
pub fn blade_product(a: Blade, b: Blade) -> (bool, Blade) {
    let mut swaps = 0u32;
    let mut rest = a.0 >> 1;
    while rest != 0 {
        swaps += (rest & b.0).count_ones();
        rest >>= 1;
    }
    swaps += (a.0 & b.0).count_ones();
    (swaps % 2 == 1, Blade(a.0 ^ b.0))
}

/// A Clifford number `Σ_A a_A e_A` with no zero entries stored.
#[derive(Clone, PartialEq)]
pub struct Multivector<S: Scalar> {
    dim: usize,
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (blade, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            if blade.0 != 0 {
                f.write_str("e")?;
                for i in 0..self.dim {
                    if blade.0 & (1 << i) != 0 {
                        write!(f, "{}", i + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, value: S) -> Self {
        Self::from_terms(dim, [(Blade::SCALAR, value)])
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    /// Basis vector `e_{i+1}`.
    pub fn basis(dim: usize, i: usize) -> Self {
        Self::from_terms(dim, [(Blade::vector(i), S::one())])
    }

    pub fn blade(dim: usize, blade: Blade, coeff: S) -> Self {
        Self::from_terms(dim, [(blade, coeff)])
    }

    pub fn from_vector(components: &[S]) -> Self {
        let dim = components.len();
        Self::from_terms(
            dim,
            components.iter().enumerate().map(|(i, c)| (Blade::vector(i), c.clone())),
        )
    }

    /// Builds a multivector, summing duplicate blades and dropping zeros.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Blade, S)>) -> Self {
        let mut out = Self::zero(dim);
        for (b, c) in terms {
            debug_assert!(b.fits(dim), "blade {b:?} outside dimension {dim}");
            out.add_term(b, &c);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    pub fn scalar_part(&self) -> S {
        self.coeff(Blade::SCALAR)
    }

    pub(crate) fn add_term(&mut self, blade: Blade, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Grade of a homogeneous element; `None` for zero or mixed grades.
    pub fn grade(&self) -> Option<u32> {
        let mut grades = self.terms.keys().map(|b| b.grade());
        let g = grades.next()?;
        grades.all(|h| h == g).then_some(g)
    }

    pub fn is_vector(&self) -> bool {
        self.terms.keys().all(|b| b.grade() == 1)
    }

    /// Components of a grade-1 element (zero counts as a vector).
    pub fn vector_components(&self) -> Result<Vec<S>> {
        if !self.is_vector() {
            return Err(Error::NotAVector);
        }
        Ok((0..self.dim).map(|i| self.coeff(Blade::vector(i))).collect())
    }

    pub fn grade_part(&self, g: u32) -> Self {
        Self::from_terms(
            self.dim,
            self.terms.iter().filter(|(b, _)| b.grade() == g).map(|(b, c)| (*b, c.clone())),
        )
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, c.times(s))).collect(),
        }
    }

    fn map_signs(&self, flip: impl Fn(Blade) -> bool) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (*b, if flip(*b) { c.negated() } else { c.clone() }))
                .collect(),
        }
    }

    /// `ã`: reverses the order of vector factors in every blade.
    pub fn reversion(&self) -> Self {
        self.map_signs(Blade::reversion_flips)
    }

    /// `ā`: reversion composed with the grade involution.
    pub fn conjugation(&self) -> Self {
        self.map_signs(Blade::conjugation_flips)
    }

    /// `a'`: negates odd grades.
    pub fn grade_involution(&self) -> Self {
        self.map_signs(|b| b.grade() % 2 == 1)
    }

    /// Scalar part of `ā a`, i.e. the sum of squared coefficients.
    pub fn norm_squared(&self) -> S {
        self.conjugation().mul_unchecked(self).scalar_part()
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        self.map_signs(|_| true)
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        Ok(())
    }

    /// The Clifford (geometric) product.
    pub fn geometric_product(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &rhs.terms {
                let (neg, b) = blade_product(*ba, *bb);
                let p = ca.times(cb);
                out.add_term(b, &if neg { p.negated() } else { p });
            }
        }
        out
    }

    /// `x^{-1} = -x/|x|^2` for a non-zero vector.
    pub fn vector_inverse(&self) -> Result<Self> {
        if !self.is_vector() {
            return Err(Error::NotAVector);
        }
        let n2 = self.norm_squared();
        if n2.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(&S::one().negated().over(&n2)))
    }

    /// Inverse of an element whose product with its reversion is a non-zero
    /// scalar (products of vectors, scalars, vectors).
    pub fn versor_inverse(&self) -> Result<Self> {
        let rev = self.reversion();
        let prod = self.mul_unchecked(&rev);
        let s = prod.scalar_part();
        if s.is_zero() || prod.len() != 1 {
            return Err(Error::NotInvertible(format!("{self}")));
        }
        Ok(rev.scale(&S::one().over(&s)))
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        Multivector::from_terms(self.dim, self.terms.iter().map(|(b, c)| (*b, f(c))))
    }

    pub fn to_float(&self) -> Multivector<f64> {
        self.map_scalars(|c| c.to_f64())
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for &Multivector<S> {
    type Output = Multivector<S>;
    fn add(self, rhs: Self) -> Multivector<S> {
        self.try_add(rhs).expect("multivector dimension mismatch")
    }
}

impl<S: Scalar> Sub for &Multivector<S> {
    type Output = Multivector<S>;
    fn sub(self, rhs: Self) -> Multivector<S> {
        self.try_sub(rhs).expect("multivector dimension mismatch")
    }
}

impl<S: Scalar> Mul for &Multivector<S> {
    type Output = Multivector<S>;
    fn mul(self, rhs: Self) -> Multivector<S> {
        self.geometric_product(rhs).expect("multivector dimension mismatch")
    }
}

impl<S: Scalar> Neg for &Multivector<S> {
    type Output = Multivector<S>;
    fn neg(self) -> Multivector<S> {
        self.neg_ref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// An element `a = y_1 ⋯ y_p` of `Pin(n)`, kept as its list of vector factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Versor<S: Scalar> {
    dim: usize,
    factors: Vec<Multivector<S>>,
}

impl<S: Scalar> Versor<S> {
    pub fn identity(dim: usize) -> Self {
        Self { dim, factors: Vec::new() }
    }

    pub fn new(dim: usize, factors: Vec<Multivector<S>>) -> Result<Self> {
        for f in &factors {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch(dim, f.dim()));
            }
            if f.grade() != Some(1) {
                return Err(Error::NotAVector);
            }
        }
        Ok(Self { dim, factors })
    }

    pub fn factors(&self) -> &[Multivector<S>] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self) -> Parity {
        if self.factors.len() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `+1` on `Spin(n)`, `-1` on `Pin(n) \ Spin(n)`.
    pub fn sign(&self) -> i64 {
        match self.parity() {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    /// Expanded product `y_1 ⋯ y_p` (not normalized).
    pub fn product(&self) -> Multivector<S> {
        self.factors
            .iter()
            .fold(Multivector::one(self.dim), |acc, y| acc.mul_unchecked(y))
    }

    /// `Π |y_i|^2`.
    pub fn norm_squared(&self) -> S {
        self.factors.iter().fold(S::one(), |acc, y| acc.times(&y.norm_squared()))
    }

    /// `a x ã` for the normalized versor. Non-unit factors are normalized by
    /// dividing by `Π |y_i|^2`, which keeps exact arithmetic rational.
    pub fn apply(&self, x: &Multivector<S>) -> Result<Multivector<S>> {
        if !x.is_vector() {
            return Err(Error::NotAVector);
        }
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, x.dim()));
        }
        let a = self.product();
        let out = a.mul_unchecked(x).mul_unchecked(&a.reversion());
        Ok(out.scale(&S::one().over(&self.norm_squared())))
    }

    /// Like [`Versor::apply`] but rejects non-unit factors.
    pub fn apply_unit(&self, x: &Multivector<S>) -> Result<Multivector<S>> {
        for (i, f) in self.factors.iter().enumerate() {
            if f.norm_squared() != S::one() {
                return Err(Error::NonUnitFactor(i));
            }
        }
        self.apply(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    fn e(n: usize, i: usize) -> Multivector<Q> {
        Multivector::basis(n, i)
    }

    fn s(n: usize, v: i64) -> Multivector<Q> {
        Multivector::scalar(n, qi(v))
    }

    /// Sorts an index word by adjacent swaps, cancelling equal neighbours
    /// with `e_i e_i = -1`.
    fn brute_force_sign(a: Blade, b: Blade) -> (bool, Blade) {
        let mut word: Vec<u16> = (0..16).filter(|i| a.0 & (1 << i) != 0).collect();
        word.extend((0..16).filter(|i| b.0 & (1 << i) != 0));
        let mut neg = false;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < word.len() {
                if word[i] > word[i + 1] {
                    word.swap(i, i + 1);
                    neg = !neg;
                    changed = true;
                } else if word[i] == word[i + 1] {
                    word.drain(i..i + 2);
                    neg = !neg;
                    changed = true;
                    continue;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
        (neg, Blade(word.iter().fold(0, |m, &i| m | (1 << i))))
    }

    #[test]
    fn blade_sign_matches_brute_force() {
        for a in 0..32u16 {
            for b in 0..32u16 {
                assert_eq!(blade_product(Blade(a), Blade(b)), brute_force_sign(Blade(a), Blade(b)));
            }
        }
    }

    #[test]
    fn basic_products() {
        let n = 3;
        assert_eq!(&e(n, 0) * &e(n, 0), s(n, -1));
        let e12 = Multivector::blade(n, Blade(0b11), qi(1));
        assert_eq!(&e(n, 0) * &e(n, 1), e12);
        assert_eq!(&e(n, 1) * &e(n, 0), -&e12);
        assert_eq!(&e12 * &e12, s(n, -1));
    }

    #[test]
    fn involutions() {
        let n = 3;
        let e12 = Multivector::<Q>::blade(n, Blade(0b11), qi(1));
        let e123 = Multivector::<Q>::blade(n, Blade(0b111), qi(1));
        assert_eq!(e(n, 0).reversion(), e(n, 0));
        assert_eq!(e12.reversion(), -&e12);
        assert_eq!(e123.reversion(), -&e123);
        assert_eq!(s(n, 1).conjugation(), s(n, 1));
        assert_eq!(e(n, 0).conjugation(), -&e(n, 0));
        assert_eq!(e12.conjugation(), -&e12);
    }

    #[test]
    fn norms() {
        let n = 3;
        assert_eq!((&s(n, 1) + &e(n, 0)).norm_squared(), qi(2));
        assert_eq!(Multivector::<Q>::zero(n).norm_squared(), qi(0));
        let v = &e(n, 0).scale(&qi(3)) + &e(n, 1).scale(&qi(4));
        assert_eq!(v.norm_squared(), qi(25));
    }

    #[test]
    fn vector_inverses() {
        let n = 3;
        assert_eq!(e(n, 0).vector_inverse().unwrap(), -&e(n, 0));
        let v = Multivector::from_vector(&[q(3, 5), q(4, 5), qi(0)]);
        assert_eq!(v.vector_inverse().unwrap(), -&v);
        let w = e(n, 0).scale(&qi(2));
        assert_eq!(w.vector_inverse().unwrap(), e(n, 0).scale(&q(-1, 2)));
        assert_eq!(&w * &w.vector_inverse().unwrap(), s(n, 1));
        assert_eq!(Multivector::<Q>::zero(n).vector_inverse(), Err(Error::ZeroVector));
        let e12 = Multivector::<Q>::blade(n, Blade(0b11), qi(1));
        assert_eq!(e12.vector_inverse(), Err(Error::NotAVector));
    }

    #[test]
    fn versor_reflections() {
        let n = 3;
        let a = Versor::new(n, vec![e(n, 0)]).unwrap();
        assert_eq!(a.apply(&e(n, 0)).unwrap(), -&e(n, 0));
        assert_eq!(a.apply(&e(n, 1)).unwrap(), e(n, 1));
        let id = Versor::<Q>::identity(n);
        let x = Multivector::from_vector(&[qi(1), qi(2), qi(3)]);
        assert_eq!(id.apply(&x).unwrap(), x);
        assert_eq!(a.parity(), Parity::Odd);
        assert_eq!(id.parity(), Parity::Even);
    }

    #[test]
    fn non_unit_factor_rejected_when_unnormalized() {
        let n = 3;
        let a = Versor::new(n, vec![e(n, 0).scale(&qi(2))]).unwrap();
        assert_eq!(a.apply_unit(&e(n, 1)), Err(Error::NonUnitFactor(0)));
        assert_eq!(a.apply(&e(n, 0)).unwrap(), -&e(n, 0));
        assert!(Versor::new(n, vec![Multivector::<Q>::zero(n)]).is_err());
    }

    #[test]
    fn mismatched_dimensions_error() {
        assert_eq!(
            e(3, 0).geometric_product(&e(4, 0)),
            Err(Error::DimensionMismatch(3, 4))
        );
    }
}
