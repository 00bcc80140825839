//! Rational functions `N / |z - c|^p` with a polynomial numerator and a single
//! radial denominator in one variable space.

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::poly::{MPoly, Side, Space};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct RadialRational<S: Scalar> {
    num: MPoly<S>,
    space: Space,
    power: u32,
    center: Vec<S>,
}

impl<S: Scalar> RadialRational<S> {
    /// `num / |z - center|^power`, reduced.
    pub fn new(num: MPoly<S>, space: Space, power: u32, center: Option<Vec<S>>) -> Self {
        let n = num.dim();
        let center = center.unwrap_or_else(|| vec![S::zero(); n]);
        assert_eq!(center.len(), n, "center dimension");
        let mut out = Self { num, space, power, center };
        out.reduce();
        out
    }

    pub fn from_poly(p: MPoly<S>, space: Space) -> Self {
        Self::new(p, space, 0, None)
    }

    pub fn numerator(&self) -> &MPoly<S> {
        &self.num
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn center(&self) -> &[S] {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.num.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn centered(&self) -> Option<&[S]> {
        if self.center.iter().all(|c| c.is_zero()) {
            None
        } else {
            Some(&self.center)
        }
    }

    /// `|z - c|^2` as a polynomial.
    pub fn r2(&self) -> MPoly<S> {
        MPoly::norm2(self.dim(), self.space, self.centered())
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.power = 0;
            return;
        }
        while self.power >= 2 {
            match self.num.exact_divide_by_r2(self.space, self.centered()) {
                Ok(q) => {
                    self.num = q;
                    self.power -= 2;
                }
                Err(_) => break,
            }
        }
    }

    fn with_num(&self, num: MPoly<S>, power: u32) -> Self {
        let mut out = Self { num, space: self.space, power, center: self.center.clone() };
        out.reduce();
        out
    }

    fn compatible(&self, rhs: &Self) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rhs.dim()));
        }
        if self.space != rhs.space || self.center != rhs.center {
            if self.power == 0 || rhs.power == 0 {
                return Ok(());
            }
            return Err(Error::Precondition("radial denominators differ".into()));
        }
        Ok(())
    }

    /// `z - c` as a vector-valued polynomial.
    fn shifted_vector(&self) -> MPoly<S> {
        let n = self.dim();
        let v = MPoly::vector_var(n, self.space);
        let c = Multivector::from_vector(&self.center);
        &v - &MPoly::constant(&c)
    }

    /// Multiplies by `|z - c|^{2j}`.
    fn times_r2_pow(&self, num: &MPoly<S>, j: u32) -> MPoly<S> {
        let r2 = self.r2();
        (0..j).fold(num.clone(), |acc, _| &acc * &r2)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        let (base, other) = if self.power == 0 && rhs.power != 0 { (rhs, self) } else { (self, rhs) };
        let (p1, p2) = (base.power, other.power);
        if p1 % 2 != p2 % 2 {
            return Err(Error::Precondition("cannot add odd and even radial powers".into()));
        }
        let top = p1.max(p2);
        let a = base.times_r2_pow(&base.num, (top - p1) / 2);
        let b = base.times_r2_pow(&other.num, (top - p2) / 2);
        Ok(base.with_num(a.try_add(&b)?, top))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        Self { num: self.num.neg_ref(), ..self.clone() }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.with_num(self.num.scale(s), self.power)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        let base = if self.power == 0 { rhs } else { self };
        Ok(base.with_num(self.num.try_mul(&rhs.num)?, self.power + rhs.power))
    }

    pub fn mul_poly(&self, p: &MPoly<S>, side: Side) -> Result<Self> {
        let num = match side {
            Side::Left => p.try_mul(&self.num)?,
            Side::Right => self.num.try_mul(p)?,
        };
        Ok(self.with_num(num, self.power))
    }

    /// Applies a map to the numerator that does not touch the radial space.
    pub fn map_numerator(&self, f: impl FnOnce(&MPoly<S>) -> Result<MPoly<S>>) -> Result<Self> {
        Ok(self.with_num(f(&self.num)?, self.power))
    }

    pub fn left_mul_mv(&self, a: &Multivector<S>) -> Self {
        self.with_num(self.num.left_mul_mv(a), self.power)
    }

    pub fn right_mul_mv(&self, a: &Multivector<S>) -> Self {
        self.with_num(self.num.right_mul_mv(a), self.power)
    }

    pub fn reversion(&self) -> Self {
        Self { num: self.num.reversion(), ..self.clone() }
    }

    pub fn conjugation(&self) -> Self {
        Self { num: self.num.conjugation(), ..self.clone() }
    }

    /// Multiplies by `|z - c|^q`; fails if the result would need an odd
    /// power in the numerator.
    pub fn times_norm_power(&self, q: u32) -> Result<Self> {
        if q <= self.power {
            return Ok(self.with_num(self.num.clone(), self.power - q));
        }
        let extra = q - self.power;
        if extra % 2 == 1 {
            return Err(Error::Precondition("odd radial power in numerator".into()));
        }
        Ok(self.with_num(self.times_r2_pow(&self.num, extra / 2), 0))
    }

    /// The polynomial, if the denominator has cancelled.
    pub fn into_poly(self) -> Result<MPoly<S>> {
        if self.power != 0 {
            return Err(Error::Precondition(format!(
                "not a polynomial: denominator power {}",
                self.power
            )));
        }
        Ok(self.num)
    }

    /// Quotient rule: `∂_i(N/r^p) = (∂_i N r^2 - p (z_i - c_i) N) / r^{p+2}`.
    pub fn partial(&self, space: Space, i: usize) -> Result<Self> {
        let dn = self.num.partial(space, i)?;
        if space != self.space || self.power == 0 {
            return Ok(self.with_num(dn, self.power));
        }
        let n = self.dim();
        let zi = &MPoly::var(n, space, i) - &MPoly::scalar(n, self.center[i].clone());
        let a = &dn * &self.r2();
        let b = (&zi * &self.num).scale(&S::from_i64(self.power as i64));
        Ok(self.with_num(&a - &b, self.power + 2))
    }

    /// Left: `(D N r^2 - p (z-c) N) / r^{p+2}`; right mirrors the products.
    pub fn dirac(&self, space: Space, side: Side) -> Self {
        let dn = self.num.dirac(space, side);
        if space != self.space || self.power == 0 {
            return self.with_num(dn, self.power);
        }
        let a = &dn * &self.r2();
        let z = self.shifted_vector();
        let zn = match side {
            Side::Left => &z * &self.num,
            Side::Right => &self.num * &z,
        };
        let b = zn.scale(&S::from_i64(self.power as i64));
        self.with_num(&a - &b, self.power + 2)
    }

    pub fn laplacian(&self, space: Space) -> Result<Self> {
        let mut acc: Option<Self> = None;
        for i in 0..self.dim() {
            let d2 = self.partial(space, i)?.partial(space, i)?;
            acc = Some(match acc {
                None => d2,
                Some(a) => a.try_add(&d2)?,
            });
        }
        Ok(acc.expect("dimension is positive"))
    }

    /// Homogeneous degree in `space` (numerator degree minus radial power
    /// when uncentered).
    pub fn degree_in(&self, space: Space) -> Option<i64> {
        let d = self.num.degree_in(space)? as i64;
        if space != self.space {
            return Some(d);
        }
        if self.centered().is_some() {
            return None;
        }
        Some(d - self.power as i64)
    }

    pub fn sphere_mean(&self, space: Space) -> Result<Self> {
        if space == self.space && self.power != 0 {
            return Err(Error::Precondition("sphere mean over the radial space".into()));
        }
        Ok(self.with_num(self.num.sphere_mean(space), self.power))
    }

    pub fn substitute(&self, space: Space, images: &[MPoly<S>]) -> Result<Self> {
        if space == self.space && self.power != 0 {
            return Err(Error::Precondition("substitution into the radial space".into()));
        }
        Ok(self.with_num(self.num.substitute(space, images)?, self.power))
    }

    pub fn rename(&self, from: Space, to: Space) -> Result<Self> {
        if from == self.space || to == self.space {
            if self.power != 0 {
                return Err(Error::Precondition("renaming the radial space".into()));
            }
        }
        Ok(Self::from_poly(self.num.rename(from, to), self.space))
    }

    /// Evaluates a non-radial space at a point.
    pub fn evaluate_space(&self, space: Space, point: &[S]) -> Result<Self> {
        if space == self.space && self.power != 0 {
            return Err(Error::Precondition("use evaluate_radial for the radial space".into()));
        }
        Ok(self.with_num(self.num.evaluate_space(space, point)?, self.power))
    }

    /// Evaluates the radial space, leaving other spaces symbolic. The result is
    /// `value * sqrt(radicand)`; the radicand is 1 whenever the norm is
    /// representable.
    pub fn evaluate_radial(&self, point: &[S]) -> Result<Surd<S>> {
        let n = self.dim();
        if point.len() != n {
            return Err(Error::Arity { expected: n, got: point.len() });
        }
        let r2 = (0..n).fold(S::zero(), |acc, i| {
            let d = point[i].minus(&self.center[i]);
            acc.plus(&d.times(&d))
        });
        let num = self.num.evaluate_space(self.space, point)?;
        if self.power == 0 {
            return Ok(Surd { value: num, radicand: S::one() });
        }
        if r2.is_zero() {
            return Err(Error::Singular);
        }
        let pow = |base: &S, e: u32| (0..e).fold(S::one(), |a, _| a.times(base));
        if self.power % 2 == 0 {
            let d = pow(&r2, self.power / 2);
            return Ok(Surd { value: num.scale(&S::one().over(&d)), radicand: S::one() });
        }
        if let Some(r) = r2.try_sqrt() {
            let d = pow(&r, self.power);
            return Ok(Surd { value: num.scale(&S::one().over(&d)), radicand: S::one() });
        }
        let d = pow(&r2, self.power.div_ceil(2));
        Ok(Surd { value: num.scale(&S::one().over(&d)), radicand: r2 })
    }

    /// Full evaluation; exact mode requires a rational result.
    pub fn evaluate(&self, points: &[(Space, &[S])]) -> Result<Multivector<S>> {
        let mut cur = self.clone();
        let mut radial_pt = None;
        for (space, pt) in points {
            if *space == self.space {
                radial_pt = Some(*pt);
            } else {
                cur = cur.evaluate_space(*space, pt)?;
            }
        }
        let surd = match radial_pt {
            Some(pt) => cur.evaluate_radial(pt)?,
            None if cur.power == 0 => Surd { value: cur.num, radicand: S::one() },
            None => return Err(Error::Precondition("radial point missing".into())),
        };
        surd.into_rational()?.constant_value()
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RadialRational<T> {
        RadialRational {
            num: self.num.map_scalars(&f),
            space: self.space,
            power: self.power,
            center: self.center.iter().map(&f).collect(),
        }
    }

    pub fn to_float(&self) -> RadialRational<f64> {
        self.map_scalars(|c| c.to_f64())
    }
}

/// `value * sqrt(radicand)` with a polynomial value in the remaining spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd<S: Scalar> {
    pub value: MPoly<S>,
    pub radicand: S,
}

impl<S: Scalar> Surd<S> {
    pub fn rational(value: MPoly<S>) -> Self {
        Self { value, radicand: S::one() }
    }

    pub fn into_rational(self) -> Result<MPoly<S>> {
        if self.value.is_zero() || self.radicand == S::one() {
            return Ok(self.value);
        }
        match self.radicand.try_sqrt() {
            Some(r) => Ok(self.value.scale(&r)),
            None => Err(Error::Precondition("value is irrational".into())),
        }
    }

    pub fn to_float(&self) -> MPoly<f64> {
        self.value.to_float().scale(&self.radicand.to_f64().sqrt())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { value: self.value.scale(s), radicand: self.radicand.clone() }
    }

    pub fn map_value(&self, f: impl FnOnce(&MPoly<S>) -> MPoly<S>) -> Self {
        Self { value: f(&self.value), radicand: self.radicand.clone() }
    }

    /// Exact equality: `a sqrt(s) = b sqrt(t)` iff `st` is a square `q^2` and
    /// `a s = b q` (or both sides vanish).
    pub fn exactly_equals(&self, other: &Self) -> bool {
        if self.value.is_zero() || other.value.is_zero() {
            return self.value.is_zero() && other.value.is_zero();
        }
        let st = self.radicand.times(&other.radicand);
        match st.try_sqrt() {
            Some(q) => self.value.scale(&self.radicand) == other.value.scale(&q),
            None => false,
        }
    }

    /// Max coefficient difference; exactly zero when the values agree.
    pub fn residual(&self, other: &Self) -> f64 {
        if S::MODE == crate::scalar::ScalarMode::Exact && self.exactly_equals(other) {
            return 0.0;
        }
        (&self.to_float() - &other.to_float()).max_abs()
    }
}
