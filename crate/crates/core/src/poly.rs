//! Multivariate polynomials with Clifford-number coefficients over up to four
//! named variable spaces (`x`, `u`, `v`, `w`), each of the ambient dimension.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::clifford::{blade_product, Blade, Multivector, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::{pochhammer, Scalar, ScalarMode, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    X,
    U,
    V,
    W,
}

impl Space {
    pub const ALL: [Space; 4] = [Space::X, Space::U, Space::V, Space::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::X => "x",
            Space::U => "u",
            Space::V => "v",
            Space::W => "w",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

const SLOTS: usize = 4 * MAX_DIM;

/// Exponent vector over all spaces; slot `space * MAX_DIM + i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial([u8; SLOTS]);

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for s in Space::ALL {
            for i in 0..MAX_DIM {
                let e = self.get(s, i);
                if e > 0 {
                    if any {
                        f.write_str("*")?;
                    }
                    any = true;
                    write!(f, "{}{}", s.name(), i + 1)?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        if !any {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial([0; SLOTS]);

    #[inline]
    pub fn get(&self, space: Space, i: usize) -> u8 {
        self.0[space.index() * MAX_DIM + i]
    }

    #[inline]
    pub fn set(&mut self, space: Space, i: usize, e: u8) {
        self.0[space.index() * MAX_DIM + i] = e;
    }

    pub fn var(space: Space, i: usize) -> Self {
        let mut m = Self::ONE;
        m.set(space, i, 1);
        m
    }

    pub fn from_exponents(space: Space, exps: &[u8]) -> Self {
        let mut m = Self::ONE;
        for (i, &e) in exps.iter().enumerate() {
            m.set(space, i, e);
        }
        m
    }

    pub fn exponents(&self, space: Space, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.get(space, i)).collect()
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        out
    }

    pub fn degree_in(&self, space: Space) -> u32 {
        let base = space.index() * MAX_DIM;
        self.0[base..base + MAX_DIM].iter().map(|&e| e as u32).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Keeps only the exponents of `space`.
    pub fn restrict(&self, space: Space) -> Monomial {
        let mut out = Monomial::ONE;
        let base = space.index() * MAX_DIM;
        out.0[base..base + MAX_DIM].copy_from_slice(&self.0[base..base + MAX_DIM]);
        out
    }

    /// Zeroes the exponents of `space`.
    pub fn without(&self, space: Space) -> Monomial {
        let mut out = *self;
        let base = space.index() * MAX_DIM;
        out.0[base..base + MAX_DIM].fill(0);
        out
    }

    pub fn moved(&self, from: Space, to: Space) -> Monomial {
        let mut out = self.without(from);
        for i in 0..MAX_DIM {
            let e = self.get(from, i);
            out.set(to, i, out.get(to, i) + e);
        }
        out
    }
}

/// `(1/ω_n) ∫_{S^{n-1}} u^β dS(u)`: zero when any exponent is odd, otherwise
/// `Π_i (1/2)_{β_i/2} / (n/2)_{|β|/2}`.
pub fn sphere_moment<S: Scalar>(n: usize, exps: &[u8]) -> S {
    if exps.iter().any(|e| e % 2 == 1) {
        return S::zero();
    }
    let half = S::from_ratio(1, 2);
    let num = exps
        .iter()
        .fold(S::one(), |acc, &e| acc.times(&pochhammer(&half, (e / 2) as u32)));
    let total: u32 = exps.iter().map(|&e| e as u32).sum();
    num.over(&pochhammer(&S::from_ratio(n as i64, 2), total / 2))
}

/// Surface area `ω_n = 2π^{n/2}/Γ(n/2)` of the unit sphere in `R^n`.
pub fn omega(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / crate::special::gamma_half(n as u32)
}

type Key = (Monomial, Blade);

/// A polynomial `Σ c_{α,A} z^α e_A` stored flat over (monomial, blade) keys.
#[derive(Clone, PartialEq)]
pub struct MPoly<S: Scalar> {
    n: usize,
    terms: BTreeMap<Key, S>,
}

impl<S: Scalar> fmt::Debug for MPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((m, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c:?})*{m:?}")?;
            if b.0 != 0 {
                f.write_str("*e")?;
                for j in 0..self.n {
                    if b.0 & (1 << j) != 0 {
                        write!(f, "{}", j + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[inline]
fn accumulate<S: Scalar>(map: &mut BTreeMap<Key, S>, key: Key, c: S) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            e.get_mut().add_assign_ref(&c);
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl<S: Scalar> MPoly<S> {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} unsupported");
        Self { n, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constant(mv: &Multivector<S>) -> Self {
        Self::monomial(Monomial::ONE, mv)
    }

    pub fn scalar(n: usize, c: S) -> Self {
        Self::constant(&Multivector::scalar(n, c))
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn monomial(m: Monomial, mv: &Multivector<S>) -> Self {
        let mut out = Self::zero(mv.dim());
        for (b, c) in mv.terms() {
            accumulate(&mut out.terms, (m, b), c.clone());
        }
        out
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Blade, S)>) -> Self {
        let mut out = Self::zero(n);
        for (m, b, c) in terms {
            accumulate(&mut out.terms, (m, b), c);
        }
        out
    }

    /// The scalar coordinate `z_{i+1}` of `space`.
    pub fn var(n: usize, space: Space, i: usize) -> Self {
        Self::from_terms(n, [(Monomial::var(space, i), Blade::SCALAR, S::one())])
    }

    /// `Σ_i z_i e_i`.
    pub fn vector_var(n: usize, space: Space) -> Self {
        Self::from_terms(
            n,
            (0..n).map(|i| (Monomial::var(space, i), Blade::vector(i), S::one())),
        )
    }

    /// `|z - c|^2` (`c = 0` when no center is given).
    pub fn norm2(n: usize, space: Space, center: Option<&[S]>) -> Self {
        let mut out = Self::zero(n);
        for i in 0..n {
            let mut sq = Monomial::ONE;
            sq.set(space, i, 2);
            accumulate(&mut out.terms, (sq, Blade::SCALAR), S::one());
            if let Some(c) = center {
                let ci = &c[i];
                if !ci.is_zero() {
                    let lin = S::from_i64(-2).times(ci);
                    accumulate(&mut out.terms, (Monomial::var(space, i), Blade::SCALAR), lin);
                    accumulate(&mut out.terms, (Monomial::ONE, Blade::SCALAR), ci.times(ci));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Blade, &S)> {
        self.terms.iter().map(|((m, b), c)| (m, *b, c))
    }

    /// Distinct monomials present.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self.terms.keys().map(|(m, _)| *m).collect();
        out.dedup();
        out
    }

    pub fn coefficient(&self, m: &Monomial) -> Multivector<S> {
        let lo = (*m, Blade(0));
        let hi = (*m, Blade(u16::MAX));
        Multivector::from_terms(
            self.n,
            self.terms.range(lo..=hi).map(|((_, b), c)| (*b, c.clone())),
        )
    }

    /// Scalar-valued polynomial formed by the coefficients of one blade.
    pub fn blade_component(&self, blade: Blade) -> Self {
        Self::from_terms(
            self.n,
            self.terms
                .iter()
                .filter(|((_, b), _)| *b == blade)
                .map(|((m, _), c)| (*m, Blade::SCALAR, c.clone())),
        )
    }

    /// Grade-1 components `[p_1, .., p_n]` of a vector-valued polynomial.
    pub fn vector_components(&self) -> Result<Vec<Self>> {
        if self.terms.keys().any(|(_, b)| b.grade() != 1) {
            return Err(Error::NotAVector);
        }
        Ok((0..self.n).map(|i| self.blade_component(Blade::vector(i))).collect())
    }

    pub fn is_scalar_valued(&self) -> bool {
        self.terms.keys().all(|(_, b)| *b == Blade::SCALAR)
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            accumulate(&mut out.terms, *k, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            accumulate(&mut out.terms, *k, c.negated());
        }
        Ok(out)
    }

    pub fn neg_ref(&self) -> Self {
        self.map_terms(|_, _, c| Some(c.negated()))
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        self.map_terms(|_, _, c| Some(c.times(s)))
    }

    fn map_terms(&self, f: impl Fn(&Monomial, Blade, &S) -> Option<S>) -> Self {
        let mut out = Self::zero(self.n);
        for ((m, b), c) in &self.terms {
            if let Some(v) = f(m, *b, c) {
                accumulate(&mut out.terms, (*m, *b), v);
            }
        }
        out
    }

    /// Clifford product of polynomials (variables commute with everything).
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let mut out = BTreeMap::new();
        for ((ma, ba), ca) in &self.terms {
            for ((mb, bb), cb) in &rhs.terms {
                let (neg, b) = blade_product(*ba, *bb);
                let p = ca.times(cb);
                accumulate(&mut out, (ma.mul(mb), b), if neg { p.negated() } else { p });
            }
        }
        Ok(Self { n: self.n, terms: out })
    }

    pub fn left_mul_mv(&self, a: &Multivector<S>) -> Self {
        Self::constant(a).try_mul(self).expect("dimension mismatch")
    }

    pub fn right_mul_mv(&self, a: &Multivector<S>) -> Self {
        self.try_mul(&Self::constant(a)).expect("dimension mismatch")
    }

    pub fn reversion(&self) -> Self {
        self.map_terms(|_, b, c| Some(if b.reversion_flips() { c.negated() } else { c.clone() }))
    }

    pub fn conjugation(&self) -> Self {
        self.map_terms(|_, b, c| Some(if b.conjugation_flips() { c.negated() } else { c.clone() }))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }

    /// `∂/∂z_{i+1}` in `space`.
    pub fn partial(&self, space: Space, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let mut out = Self::zero(self.n);
        for ((m, b), c) in &self.terms {
            let e = m.get(space, i);
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.set(space, i, e - 1);
            accumulate(&mut out.terms, (m2, *b), c.times(&S::from_i64(e as i64)));
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `e_{i+1}` on the given side.
    pub fn mul_basis(&self, i: usize, side: Side) -> Self {
        let e = Blade::vector(i);
        let mut out = Self::zero(self.n);
        for ((m, b), c) in &self.terms {
            let (neg, nb) = match side {
                Side::Left => blade_product(e, *b),
                Side::Right => blade_product(*b, e),
            };
            accumulate(&mut out.terms, (*m, nb), if neg { c.negated() } else { c.clone() });
        }
        out
    }

    /// `D p = Σ e_j ∂_j p` (left) or `p D = Σ ∂_j p e_j` (right).
    pub fn dirac(&self, space: Space, side: Side) -> Self {
        let mut out = BTreeMap::new();
        for j in 0..self.n {
            let e = Blade::vector(j);
            for ((m, b), c) in &self.terms {
                let ex = m.get(space, j);
                if ex == 0 {
                    continue;
                }
                let mut m2 = *m;
                m2.set(space, j, ex - 1);
                let (neg, nb) = match side {
                    Side::Left => blade_product(e, *b),
                    Side::Right => blade_product(*b, e),
                };
                let v = c.times(&S::from_i64(ex as i64));
                accumulate(&mut out, (m2, nb), if neg { v.negated() } else { v });
            }
        }
        Self { n: self.n, terms: out }
    }

    pub fn laplacian(&self, space: Space) -> Self {
        let mut out = BTreeMap::new();
        for j in 0..self.n {
            for ((m, b), c) in &self.terms {
                let ex = m.get(space, j);
                if ex < 2 {
                    continue;
                }
                let mut m2 = *m;
                m2.set(space, j, ex - 2);
                accumulate(&mut out, (m2, *b), c.times(&S::from_i64((ex as i64) * (ex as i64 - 1))));
            }
        }
        Self { n: self.n, terms: out }
    }

    /// Euler operator `Σ z_j ∂_j`: scales each term by its degree in `space`.
    pub fn euler(&self, space: Space) -> Self {
        self.map_terms(|m, _, c| Some(c.times(&S::from_i64(m.degree_in(space) as i64))))
    }

    /// Homogeneous degree in `space`, or `None` if mixed. Zero reports `Some(0)`.
    pub fn degree_in(&self, space: Space) -> Option<u32> {
        let mut degs = self.terms.keys().map(|(m, _)| m.degree_in(space));
        match degs.next() {
            None => Some(0),
            Some(d) => degs.all(|e| e == d).then_some(d),
        }
    }

    pub fn max_degree_in(&self, space: Space) -> u32 {
        self.terms.keys().map(|(m, _)| m.degree_in(space)).max().unwrap_or(0)
    }

    pub fn involves(&self, space: Space) -> bool {
        self.terms.keys().any(|(m, _)| m.degree_in(space) > 0)
    }

    /// `(1/ω_n) ∫_{S^{n-1}} p dS` over `space`; other spaces are carried through.
    pub fn sphere_mean(&self, space: Space) -> Self {
        let mut out = Self::zero(self.n);
        let mut cache: BTreeMap<Monomial, S> = BTreeMap::new();
        for ((m, b), c) in &self.terms {
            let key = m.restrict(space);
            let w = cache
                .entry(key)
                .or_insert_with(|| sphere_moment(self.n, &key.exponents(space, self.n)))
                .clone();
            if w.is_zero() {
                continue;
            }
            accumulate(&mut out.terms, (m.without(space), *b), c.times(&w));
        }
        out
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Result<Multivector<S>> {
        if self.terms.keys().any(|(m, _)| *m != Monomial::ONE) {
            return Err(Error::Precondition("polynomial is not constant".into()));
        }
        Ok(self.coefficient(&Monomial::ONE))
    }

    /// `(P, Q)_z = ∫ P Q dS(z)`. With `normalized` the result is divided by
    /// `ω_n`, which keeps exact mode rational; the unnormalized form needs the
    /// float backend.
    pub fn pairing(p: &Self, q: &Self, space: Space, normalized: bool) -> Result<Self> {
        let mean = p.try_mul(q)?.sphere_mean(space);
        if normalized {
            return Ok(mean);
        }
        if S::MODE == ScalarMode::Exact {
            return Err(Error::Precondition(
                "unnormalized pairing involves ω_n and requires float mode".into(),
            ));
        }
        Ok(mean.scale(&S::from_rational(&Q::from_float(omega(p.n)).unwrap())))
    }

    /// Returns `q` with `q |z - c|^2 = p`, or `NotDivisible`.
    pub fn exact_divide_by_r2(&self, space: Space, center: Option<&[S]>) -> Result<Self> {
        let zero = S::zero();
        let c0 = center.map(|c| c[0].clone()).unwrap_or_else(S::zero);
        // |z-c|^2 = z_1^2 + lin*z_1 + rest(z_2..z_n)
        let lin = S::from_i64(-2).times(&c0);
        let mut rest = Self::zero(self.n);
        accumulate(&mut rest.terms, (Monomial::ONE, Blade::SCALAR), c0.times(&c0));
        for i in 1..self.n {
            let ci = center.map(|c| &c[i]).unwrap_or(&zero);
            let mut sq = Monomial::ONE;
            sq.set(space, i, 2);
            accumulate(&mut rest.terms, (sq, Blade::SCALAR), S::one());
            if !ci.is_zero() {
                accumulate(
                    &mut rest.terms,
                    (Monomial::var(space, i), Blade::SCALAR),
                    S::from_i64(-2).times(ci),
                );
                accumulate(&mut rest.terms, (Monomial::ONE, Blade::SCALAR), ci.times(ci));
            }
        }
        let max_e = self.terms.keys().map(|(m, _)| m.get(space, 0)).max().unwrap_or(0) as usize;
        let mut buckets: Vec<BTreeMap<Key, S>> = vec![BTreeMap::new(); max_e + 1];
        for ((m, b), c) in &self.terms {
            buckets[m.get(space, 0) as usize].insert((*m, *b), c.clone());
        }
        let mut quotient = BTreeMap::new();
        for a in (2..=max_e).rev() {
            let bucket = std::mem::take(&mut buckets[a]);
            for ((m, b), c) in bucket {
                let mut qm = m;
                qm.set(space, 0, (a - 2) as u8);
                accumulate(&mut quotient, (qm, b), c.clone());
                if !lin.is_zero() {
                    let mut lm = m;
                    lm.set(space, 0, (a - 1) as u8);
                    accumulate(&mut buckets[a - 1], (lm, b), c.times(&lin).negated());
                }
                for ((rm, _), rc) in &rest.terms {
                    accumulate(&mut buckets[a - 2], (qm.mul(rm), b), c.times(rc).negated());
                }
            }
        }
        let remainder: usize = buckets.iter().map(|b| b.len()).sum();
        if remainder != 0 {
            return Err(Error::NotDivisible { remainder_terms: remainder });
        }
        Ok(Self { n: self.n, terms: quotient })
    }

    /// Replaces each coordinate `z_i` of `space` by the scalar-valued polynomial
    /// `images[i]`.
    pub fn substitute(&self, space: Space, images: &[Self]) -> Result<Self> {
        if images.len() != self.n {
            return Err(Error::Arity { expected: self.n, got: images.len() });
        }
        if images.iter().any(|p| !p.is_scalar_valued() || p.n != self.n) {
            return Err(Error::Precondition("substitution images must be scalar-valued".into()));
        }
        let mut powers: Vec<Vec<Self>> = images.iter().map(|p| vec![Self::one(self.n), p.clone()]).collect();
        let mut out = BTreeMap::new();
        // group by the substituted exponent pattern to reuse products
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Blade, S)>> = BTreeMap::new();
        for ((m, b), c) in &self.terms {
            groups.entry(m.restrict(space)).or_default().push((m.without(space), *b, c.clone()));
        }
        for (pattern, rest) in groups {
            let mut img = Self::one(self.n);
            for i in 0..self.n {
                let e = pattern.get(space, i) as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().try_mul(&images[i])?;
                    powers[i].push(next);
                }
                img = img.try_mul(&powers[i][e])?;
            }
            for ((im, _), ic) in &img.terms {
                for (m, b, c) in &rest {
                    accumulate(&mut out, (m.mul(im), *b), c.times(ic));
                }
            }
        }
        Ok(Self { n: self.n, terms: out })
    }

    /// Assigns `space` to a concrete point, leaving other spaces symbolic.
    pub fn evaluate_space(&self, space: Space, point: &[S]) -> Result<Self> {
        if point.len() != self.n {
            return Err(Error::Arity { expected: self.n, got: point.len() });
        }
        let mut out = BTreeMap::new();
        let mut cache: BTreeMap<Monomial, S> = BTreeMap::new();
        for ((m, b), c) in &self.terms {
            let key = m.restrict(space);
            let w = cache
                .entry(key)
                .or_insert_with(|| {
                    (0..self.n).fold(S::one(), |acc, i| {
                        (0..key.get(space, i)).fold(acc, |a, _| a.times(&point[i]))
                    })
                })
                .clone();
            accumulate(&mut out, (m.without(space), *b), c.times(&w));
        }
        Ok(Self { n: self.n, terms: out })
    }

    /// Full evaluation; every variable that occurs must be assigned.
    pub fn evaluate(&self, points: &[(Space, &[S])]) -> Result<Multivector<S>> {
        let mut p = self.clone();
        for (space, pt) in points {
            p = p.evaluate_space(*space, pt)?;
        }
        p.constant_value()
    }

    /// Renames the variables of `from` into `to` (exponents add if `to` is in use).
    pub fn rename(&self, from: Space, to: Space) -> Self {
        let mut out = Self::zero(self.n);
        for ((m, b), c) in &self.terms {
            accumulate(&mut out.terms, (m.moved(from, to), *b), c.clone());
        }
        out
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MPoly<T> {
        let mut out = MPoly::zero(self.n);
        for ((m, b), c) in &self.terms {
            accumulate(&mut out.terms, (*m, *b), f(c));
        }
        out
    }

    pub fn to_float(&self) -> MPoly<f64> {
        self.map_scalars(|c| c.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Groups terms by their exponents in `space`: `p = Σ_α z^α p_α`.
    pub fn split_by(&self, space: Space) -> BTreeMap<Monomial, Self> {
        let mut out: BTreeMap<Monomial, Self> = BTreeMap::new();
        for ((m, b), c) in &self.terms {
            let entry = out.entry(m.restrict(space)).or_insert_with(|| Self::zero(self.n));
            accumulate(&mut entry.terms, (m.without(space), *b), c.clone());
        }
        out
    }
}

impl<S: Scalar> Add for &MPoly<S> {
    type Output = MPoly<S>;
    fn add(self, rhs: Self) -> MPoly<S> {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl<S: Scalar> Sub for &MPoly<S> {
    type Output = MPoly<S>;
    fn sub(self, rhs: Self) -> MPoly<S> {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl<S: Scalar> Mul for &MPoly<S> {
    type Output = MPoly<S>;
    fn mul(self, rhs: Self) -> MPoly<S> {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl<S: Scalar> Neg for &MPoly<S> {
    type Output = MPoly<S>;
    fn neg(self) -> MPoly<S> {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    type P = MPoly<Q>;

    fn e(n: usize, i: usize) -> Multivector<Q> {
        Multivector::basis(n, i)
    }

    fn var(n: usize, s: Space, i: usize) -> P {
        P::var(n, s, i)
    }

    #[test]
    fn partial_derivatives() {
        let n = 3;
        let u1 = var(n, Space::U, 0);
        let p = (&u1 * &u1).right_mul_mv(&e(n, 0));
        assert_eq!(p.partial(Space::U, 0).unwrap(), u1.right_mul_mv(&e(n, 0)).scale(&qi(2)));
        assert!(P::one(n).partial(Space::U, 1).unwrap().is_zero());
        assert!(p.partial(Space::U, 3).is_err());
    }

    #[test]
    fn dirac_examples() {
        let n = 3;
        let u = P::vector_var(n, Space::U);
        assert_eq!(u.dirac(Space::U, Side::Left), P::scalar(n, qi(-3)));
        // u_2 + u_1 e_1 e_2 is left monogenic
        let z2 = &var(n, Space::U, 1) + &var(n, Space::U, 0).right_mul_mv(&(&e(n, 0) * &e(n, 1)));
        assert!(z2.dirac(Space::U, Side::Left).is_zero());
    }

    #[test]
    fn sphere_moments() {
        let n = 3;
        assert_eq!(P::one(n).sphere_mean(Space::U), P::one(n));
        assert!(var(n, Space::U, 0).sphere_mean(Space::U).is_zero());
        let u1 = var(n, Space::U, 0);
        let u2 = var(n, Space::U, 1);
        assert_eq!((&u1 * &u1).sphere_mean(Space::U), P::scalar(n, q(1, 3)));
        let m = &(&u1 * &u1) * &(&u2 * &u2);
        assert_eq!(m.sphere_mean(Space::U), P::scalar(n, q(1, 15)));
    }

    #[test]
    fn sphere_mean_keeps_other_spaces() {
        let n = 3;
        let p = &(&var(n, Space::U, 0) * &var(n, Space::U, 0)) * &var(n, Space::X, 2);
        assert_eq!(p.sphere_mean(Space::U), var(n, Space::X, 2).scale(&q(1, 3)));
    }

    #[test]
    fn pairing_examples() {
        let n = 3;
        let one = P::one(n);
        assert_eq!(P::pairing(&one, &one, Space::U, true).unwrap(), one);
        let u1 = var(n, Space::U, 0);
        let u2 = var(n, Space::U, 1);
        assert!(P::pairing(&u1, &u2, Space::U, true).unwrap().is_zero());
        let z2 = &u2 + &u1.right_mul_mv(&(&e(n, 0) * &e(n, 1)));
        assert_eq!(
            P::pairing(&z2.reversion(), &z2, Space::U, true).unwrap(),
            P::scalar(n, q(2, 3))
        );
        assert!(P::pairing(&one, &one, Space::U, false).is_err());
        let f = MPoly::<f64>::one(3);
        let v = MPoly::pairing(&f, &f, Space::U, false).unwrap();
        assert!((v.constant_value().unwrap().scalar_part() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn division_by_r2() {
        let n = 3;
        let r2 = P::norm2(n, Space::U, None);
        let p = r2.right_mul_mv(&e(n, 0));
        assert_eq!(p.exact_divide_by_r2(Space::U, None).unwrap(), P::constant(&e(n, 0)));
        let r4 = &r2 * &r2;
        assert_eq!(r4.exact_divide_by_r2(Space::U, None).unwrap(), r2);
        let u1 = var(n, Space::U, 0);
        assert!(matches!(
            (&u1 * &u1).exact_divide_by_r2(Space::U, None),
            Err(Error::NotDivisible { .. })
        ));
        let c = [qi(1), q(1, 2), qi(-3)];
        let rc = P::norm2(n, Space::X, Some(&c));
        let f = &(&var(n, Space::X, 0) * &var(n, Space::U, 1)) + &P::constant(&e(n, 2));
        assert_eq!((&f * &rc).exact_divide_by_r2(Space::X, Some(&c)).unwrap(), f);
    }

    #[test]
    fn substitution() {
        let n = 3;
        let u1 = var(n, Space::U, 0);
        let x1 = var(n, Space::X, 0);
        let x2 = var(n, Space::X, 1);
        let images = vec![&x1 + &x2, var(n, Space::X, 1), var(n, Space::X, 2)];
        let s = (&u1 * &u1).substitute(Space::U, &images).unwrap();
        let sum = &x1 + &x2;
        assert_eq!(s, &sum * &sum);
        let id: Vec<P> = (0..n).map(|i| var(n, Space::U, i)).collect();
        let p = &(&u1 * &var(n, Space::U, 2)).right_mul_mv(&e(n, 1)) + &P::constant(&e(n, 0));
        assert_eq!(p.substitute(Space::U, &id).unwrap(), p);
        assert!(p.substitute(Space::U, &id[..2]).is_err());
    }

    #[test]
    fn evaluation() {
        let n = 3;
        let p = var(n, Space::U, 0).right_mul_mv(&e(n, 0));
        let pt = [qi(1), qi(0), qi(0)];
        assert_eq!(p.evaluate(&[(Space::U, &pt)]).unwrap(), e(n, 0));
        assert!(p.evaluate(&[]).is_err());
    }

    #[test]
    fn omega_values() {
        assert!((omega(2) - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((omega(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!((omega(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-13);
    }
}
