//! Vahlen matrices, Möbius maps, conformal weights and exact checks of the
//! intertwining identities for `D`, `P_k` and `R_k`.

use crate::clifford::{Blade, Multivector};
use crate::error::{Error, Result};
use crate::poly::{MPoly, Side, Space};
use crate::radial::{RadialRational, Surd};
use crate::rarita::{KernelEk, RSFunction};
use crate::scalar::{rational_sqrt, Scalar, Q};
use crate::monogenic::project_unchecked;

/// `x -> (ax + b)(cx + d)^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VahlenMatrix {
    pub a: Multivector<Q>,
    pub b: Multivector<Q>,
    pub c: Multivector<Q>,
    pub d: Multivector<Q>,
}

/// Nonzero element whose sandwich maps vectors to vectors and whose norm is
/// multiplicative, i.e. an element of the Clifford group.
fn is_clifford_group_element(m: &Multivector<Q>) -> bool {
    let n = m.dim();
    let prod = m * &m.reversion();
    if prod.grade() != Some(0) || prod.is_zero() {
        return false;
    }
    (0..n).all(|i| {
        let s = &(m * &Multivector::basis(n, i)) * &m.reversion();
        s.is_zero() || s.is_vector()
    })
}

fn q_pow(base: &Q, e: u32) -> Q {
    (0..e).fold(Q::from_i64(1), |acc, _| acc * base)
}

impl VahlenMatrix {
    /// Validated constructor.
    pub fn new(a: Multivector<Q>, b: Multivector<Q>, c: Multivector<Q>, d: Multivector<Q>) -> Result<Self> {
        let m = Self { a, b, c, d };
        m.validate()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.a.dim();
        for (name, e) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            if e.dim() != n {
                return Err(Error::DimensionMismatch(n, e.dim()));
            }
            if !e.is_zero() && !is_clifford_group_element(e) {
                return Err(Error::InvalidVahlen(format!("{name} is not a product of vectors")));
            }
        }
        let pairs = [
            ("a b~", &self.a * &self.b.reversion()),
            ("c d~", &self.c * &self.d.reversion()),
            ("c~ a", &self.c.reversion() * &self.a),
            ("d~ b", &self.d.reversion() * &self.b),
        ];
        for (name, p) in pairs {
            if !p.is_zero() && !p.is_vector() {
                return Err(Error::InvalidVahlen(format!("{name} is not a vector")));
            }
        }
        let det = self.pseudo_determinant();
        let one = Multivector::one(n);
        if det != one && det != one.neg_ref() {
            return Err(Error::InvalidVahlen(format!("pseudo-determinant {det} is not ±1")));
        }
        Ok(())
    }

    /// `a d~ - b c~`.
    pub fn pseudo_determinant(&self) -> Multivector<Q> {
        &(&self.a * &self.d.reversion()) - &(&self.b * &self.c.reversion())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: Multivector::one(n),
            b: Multivector::zero(n),
            c: Multivector::zero(n),
            d: Multivector::one(n),
        }
    }

    pub fn translation(t: &[Q]) -> Self {
        let n = t.len();
        Self { b: Multivector::from_vector(t), ..Self::identity(n) }
    }

    /// `x -> s^2 x` for `s > 0`.
    pub fn dilation(n: usize, s: Q) -> Self {
        let inv = Q::from_i64(1) / &s;
        Self {
            a: Multivector::scalar(n, s),
            b: Multivector::zero(n),
            c: Multivector::zero(n),
            d: Multivector::scalar(n, inv),
        }
    }

    /// `x -> x^{-1}`.
    pub fn inversion(n: usize) -> Self {
        Self {
            a: Multivector::zero(n),
            b: Multivector::one(n),
            c: Multivector::one(n),
            d: Multivector::zero(n),
        }
    }

    /// `x -> (x - p)^{-1}`.
    pub fn inversion_about(p: &[Q]) -> Self {
        let n = p.len();
        Self {
            a: Multivector::zero(n),
            b: Multivector::one(n),
            c: Multivector::one(n),
            d: Multivector::from_vector(p).neg_ref(),
        }
    }

    /// `x -> a x a~` for a unit versor `a`, as `(a, 0, 0, (a~)^{-1})`.
    pub fn orthogonal(a: &Multivector<Q>) -> Result<Self> {
        let n = a.dim();
        let m = Self {
            a: a.clone(),
            b: Multivector::zero(n),
            c: Multivector::zero(n),
            d: a.reversion().versor_inverse()?,
        };
        m.validate()?;
        Ok(m)
    }

    /// Matrix product; the resulting map is `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: &(&self.a * &other.a) + &(&self.b * &other.c),
            b: &(&self.a * &other.b) + &(&self.b * &other.d),
            c: &(&self.c * &other.a) + &(&self.d * &other.c),
            d: &(&self.c * &other.b) + &(&self.d * &other.d),
        }
    }

    /// `cx + d`.
    pub fn denominator(&self, x: &Multivector<Q>) -> Multivector<Q> {
        &(&self.c * x) + &self.d
    }

    fn denominator_checked(&self, x: &Multivector<Q>) -> Result<Multivector<Q>> {
        if !x.is_vector() && !x.is_zero() {
            return Err(Error::NotAVector);
        }
        let q = self.denominator(x);
        if q.norm_squared() == Q::from_i64(0) {
            return Err(Error::Singular);
        }
        Ok(q)
    }

    /// `(ax + b)(cx + d)^{-1}`.
    pub fn apply(&self, x: &Multivector<Q>) -> Result<Multivector<Q>> {
        let q = self.denominator_checked(x)?;
        let y = &(&(&self.a * x) + &self.b) * &q.versor_inverse()?;
        if !y.is_vector() && !y.is_zero() {
            return Err(Error::InvalidVahlen("image is not a vector".into()));
        }
        Ok(y)
    }

    /// The Iwasawa-type evaluation: `a x d^{-1} + b d^{-1}` when `c = 0`,
    /// otherwise `a c^{-1} + (b - a c^{-1} d)(cx + d)^{-1}`.
    pub fn apply_iwasawa(&self, x: &Multivector<Q>) -> Result<Multivector<Q>> {
        if self.c.is_zero() {
            let dinv = self.d.versor_inverse()?;
            return Ok(&(&(&self.a * x) * &dinv) + &(&self.b * &dinv));
        }
        let q = self.denominator_checked(x)?;
        let ac = &self.a * &self.c.versor_inverse()?;
        let t = &self.b - &(&ac * &self.d);
        Ok(&ac + &(&t * &q.versor_inverse()?))
    }

    /// Pole `-c^{-1} d` (where `cx + d = 0`), if `c` is nonzero.
    pub fn pole(&self) -> Result<Option<Vec<Q>>> {
        if self.c.is_zero() {
            return Ok(None);
        }
        let p = (&self.c.versor_inverse()? * &self.d).neg_ref();
        if p.is_zero() {
            return Ok(Some(vec![Q::from_i64(0); self.dim()]));
        }
        Ok(Some(p.vector_components()?))
    }
}

/// Which conformal weight to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// `J_1 = (cx+d)~ / |cx+d|^n`.
    J1,
    /// `J_{-1} = (a d~ - b c~) conj(cx+d) / |cx+d|^{n+2}`.
    Jm1,
}

/// A multivector times `sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurdMv {
    pub mv: Multivector<Q>,
    pub radicand: Q,
}

impl SurdMv {
    pub fn into_rational(self) -> Result<Multivector<Q>> {
        match rational_sqrt(&self.radicand) {
            Some(r) => Ok(self.mv.scale(&r)),
            None => Err(Error::Precondition("weight is irrational at this point".into())),
        }
    }
}

/// `|q|^{-e}` as `rational * sqrt(radicand)`.
fn inverse_norm_power(norm2: &Q, e: u32) -> (Q, Q) {
    let one = Q::from_i64(1);
    if e % 2 == 0 {
        return (one.clone() / q_pow(norm2, e / 2), one);
    }
    if let Some(r) = rational_sqrt(norm2) {
        return (one / q_pow(&r, e), Q::from_i64(1));
    }
    (one / q_pow(norm2, e.div_ceil(2)), norm2.clone())
}

/// Conformal weight at `x`.
pub fn weight_j(m: &VahlenMatrix, x: &Multivector<Q>, kind: WeightKind) -> Result<SurdMv> {
    let q = m.denominator_checked(x)?;
    let n = m.dim() as u32;
    let nq = q.norm_squared();
    let (num, e) = match kind {
        WeightKind::J1 => (q.reversion(), n),
        WeightKind::Jm1 => (&m.pseudo_determinant() * &q.conjugation(), n + 2),
    };
    let (s, radicand) = inverse_norm_power(&nq, e);
    Ok(SurdMv { mv: num.scale(&s), radicand })
}

/// `u = q w q~ / |q|^2` with `q = cx + d`: the variable substitution that
/// makes `J_1` intertwine `P_k`.
pub fn u_transform(m: &VahlenMatrix, x: &Multivector<Q>, w: &Multivector<Q>) -> Result<Multivector<Q>> {
    let q = m.denominator_checked(x)?;
    let nq = q.norm_squared();
    Ok((&(&q * w) * &q.reversion()).scale(&(Q::from_i64(1) / nq)))
}

/// Inverse of [`u_transform`]: `q~ u q / |q|^2`.
pub fn u_transform_inverse(m: &VahlenMatrix, x: &Multivector<Q>, u: &Multivector<Q>) -> Result<Multivector<Q>> {
    let q = m.denominator_checked(x)?;
    let nq = q.norm_squared();
    Ok((&(&q.reversion() * u) * &q).scale(&(Q::from_i64(1) / nq)))
}

/// Weight multiplying the transformed function.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Conformal(WeightKind),
    Constant(Multivector<Q>),
}

/// Symbolic pieces of the change of variables `y = φ(x)`, `u = q w q~/|q|^2`
/// with `q = cx + d` and `|q|^2 = κ |x - p|^2` (or `κ` when `c = 0`).
#[derive(Clone, Debug)]
pub struct SymbolicFrame {
    m: VahlenMatrix,
    n: usize,
    q: MPoly<Q>,
    kappa: Q,
    center: Option<Vec<Q>>,
    phi_num: Vec<MPoly<Q>>,
    u_num: Vec<MPoly<Q>>,
}

impl SymbolicFrame {
    pub fn new(m: &VahlenMatrix) -> Result<Self> {
        m.validate()?;
        let n = m.dim();
        let x = MPoly::vector_var(n, Space::X);
        let q = &(&MPoly::constant(&m.c) * &x) + &MPoly::constant(&m.d);
        let s = (&q * &q.conjugation()).blade_component(Blade::SCALAR);
        let center = m.pole()?;
        let kappa = if m.c.is_zero() { m.d.norm_squared() } else { m.c.norm_squared() };
        let expected = match &center {
            Some(p) => MPoly::norm2(n, Space::X, Some(p)).scale(&kappa),
            None => MPoly::scalar(n, kappa.clone()),
        };
        if s != expected {
            return Err(Error::InvalidVahlen("|cx+d|^2 is not radial about the pole".into()));
        }
        let phi = &(&(&MPoly::constant(&m.a) * &x) + &MPoly::constant(&m.b)) * &q.conjugation();
        let phi_num = phi
            .vector_components()
            .map_err(|_| Error::InvalidVahlen("Möbius image is not a vector".into()))?;
        let w = MPoly::vector_var(n, Space::W);
        let u_num = (&(&q * &w) * &q.reversion()).vector_components()?;
        Ok(Self { m: m.clone(), n, q, kappa, center, phi_num, u_num })
    }

    pub fn matrix(&self) -> &VahlenMatrix {
        &self.m
    }

    pub fn center(&self) -> Option<&[Q]> {
        self.center.as_deref()
    }

    fn s_poly(&self) -> MPoly<Q> {
        match &self.center {
            Some(p) => MPoly::norm2(self.n, Space::X, Some(p)).scale(&self.kappa),
            None => MPoly::scalar(self.n, self.kappa.clone()),
        }
    }

    /// `W(x) f(φ(x), u(x, w))` for `f` polynomial in `(x, u)`; with
    /// `transform_u = false` the `u` variables are left alone. `k` is the
    /// degree of `f` in `u`.
    pub fn transform(&self, f: &MPoly<Q>, k: u32, transform_u: bool, weight: &Weight) -> Result<RadialRational<Q>> {
        let n = self.n;
        let dy = f.max_degree_in(Space::X);
        let mut by_degree: Vec<MPoly<Q>> = vec![MPoly::zero(n); dy as usize + 1];
        for (mono, part) in f.split_by(Space::X) {
            let d = mono.degree_in(Space::X) as usize;
            let piece = &part * &MPoly::from_terms(n, [(mono, Blade::SCALAR, Q::from_i64(1))]);
            by_degree[d] = &by_degree[d] + &piece;
        }
        let s = self.s_poly();
        let mut num = MPoly::zero(n);
        let mut spow = MPoly::one(n);
        for a in (0..=dy as usize).rev() {
            if !by_degree[a].is_zero() {
                let mut g = by_degree[a].substitute(Space::X, &self.phi_num)?;
                if transform_u {
                    g = g.substitute(Space::U, &self.u_num)?;
                }
                num = &num + &(&g * &spow);
            }
            spow = &spow * &s;
        }
        let s_power = dy + if transform_u { k } else { 0 };
        let (num, extra) = match weight {
            Weight::Conformal(WeightKind::J1) => (&self.q.reversion() * &num, self.n as u32),
            Weight::Conformal(WeightKind::Jm1) => {
                let lead = &MPoly::constant(&self.m.pseudo_determinant()) * &self.q.conjugation();
                (&lead * &num, self.n as u32 + 2)
            }
            Weight::Constant(c) => (num.left_mul_mv(c), 0),
        };
        let mut scale = Q::from_i64(1) / q_pow(&self.kappa, s_power + extra / 2);
        if extra % 2 == 1 {
            let r = rational_sqrt(&self.kappa).ok_or_else(|| {
                Error::Precondition("|c| must be rational for odd conformal weights".into())
            })?;
            scale /= r;
        }
        let num = num.scale(&scale);
        Ok(match &self.center {
            Some(p) => RadialRational::new(num, Space::X, 2 * s_power + extra, Some(p.clone())),
            None => RadialRational::from_poly(num, Space::X),
        })
    }
}

/// Result of comparing two sides of an identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    /// Largest pointwise difference; exactly 0.0 when every sample agrees exactly.
    pub residual: f64,
    pub samples: usize,
    /// Whether the two sides also agree as rational functions.
    pub symbolic_zero: bool,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.residual == 0.0 && self.symbolic_zero
    }
}

/// Seeded rational sample points with small denominators, away from `avoid`.
pub fn rational_points(n: usize, count: usize, seed: u64, avoid: &[Vec<Q>]) -> Vec<Vec<Q>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<Q> = (0..n)
            .map(|_| Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
            .collect();
        if avoid.iter().any(|a| a == &p) {
            continue;
        }
        out.push(p);
    }
    out
}

fn x_coefficient_count(f: &RadialRational<Q>) -> usize {
    f.numerator().split_by(Space::X).len()
}

/// Compares two radial rational functions at `2 ×` (number of `x`-monomials)
/// seeded rational points, and symbolically when the powers allow it.
pub fn compare_sides(lhs: &RadialRational<Q>, rhs: &RadialRational<Q>, seed: u64) -> Result<CheckOutcome> {
    let n = lhs.dim();
    let count = 2 * x_coefficient_count(lhs).max(x_coefficient_count(rhs)).max(1);
    let mut avoid = vec![lhs.center().to_vec(), rhs.center().to_vec()];
    avoid.dedup();
    let pts = rational_points(n, count, seed, &avoid);
    let mut residual = 0.0f64;
    for p in &pts {
        let a = lhs.evaluate_radial(p)?;
        let b = rhs.evaluate_radial(p)?;
        residual = residual.max(a.residual(&b));
    }
    let symbolic_zero = match lhs.try_sub(rhs) {
        Ok(d) => d.is_zero(),
        Err(_) => residual == 0.0,
    };
    Ok(CheckOutcome { residual, samples: pts.len(), symbolic_zero })
}

/// `D_x[J_1 f(φ(x))] = J_{-1} (D f)(φ(x))`.
pub fn dirac_conformal_check(m: &VahlenMatrix, f: &MPoly<Q>, seed: u64) -> Result<CheckOutcome> {
    let frame = SymbolicFrame::new(m)?;
    let lhs = frame
        .transform(f, 0, false, &Weight::Conformal(WeightKind::J1))?
        .dirac(Space::X, Side::Left);
    let rhs = frame.transform(&f.dirac(Space::X, Side::Left), 0, false, &Weight::Conformal(WeightKind::Jm1))?;
    compare_sides(&lhs, &rhs, seed)
}

/// `P_{k,w} W f(φ(x), u) = W P_{k,u} f(φ(x), u)` with `u = q w q~/|q|^2`.
pub fn intertwine_pk_check(m: &VahlenMatrix, f: &MPoly<Q>, k: u32, weight: &Weight, seed: u64) -> Result<CheckOutcome> {
    if !f.is_zero() && (f.degree_in(Space::U) != Some(k) || !crate::monogenic::is_harmonic(f, Space::U)) {
        return Err(Error::Precondition("f must be harmonic of degree k in u".into()));
    }
    let frame = SymbolicFrame::new(m)?;
    let lhs = frame
        .transform(f, k, true, weight)?
        .map_numerator(|p| project_unchecked(p, k, Space::W, Side::Left))?;
    let pf = project_unchecked(f, k, Space::U, Side::Left)?;
    let rhs = frame.transform(&pf, k, true, weight)?;
    compare_sides(&lhs, &rhs, seed)
}

/// `R_{k,x,w} W_1 f(φ(x), u) = W_2 (R_{k,y,u} f)(φ(x), u)`; the standard
/// weights are `W_1 = J_1`, `W_2 = J_{-1}`.
pub fn intertwine_rk_check(
    m: &VahlenMatrix,
    f: &RSFunction<Q>,
    w1: &Weight,
    w2: &Weight,
    seed: u64,
) -> Result<CheckOutcome> {
    if f.side != Side::Left || f.var != Space::U || f.body.power() != 0 {
        return Err(Error::Precondition("expects a left polynomial RS function in (x, u)".into()));
    }
    let frame = SymbolicFrame::new(m)?;
    let body = f.body.numerator();
    let transformed = frame.transform(body, f.k, true, w1)?;
    let lhs = RSFunction::new(transformed, f.k, Side::Left, Space::W)?.apply_rk()?.body;
    let rf = f.apply_rk()?.body.into_poly()?;
    let rhs = frame.transform(&rf, f.k, true, w2)?;
    compare_sides(&lhs, &rhs, seed)
}

/// Images of `z -> q~ z q / |q|^2` applied to the vector variable of `space`.
fn linear_images(q: &Multivector<Q>, space: Space) -> Result<Vec<MPoly<Q>>> {
    let n = q.dim();
    let z = MPoly::vector_var(n, space);
    let s = Q::from_i64(1) / q.norm_squared();
    Ok((&(&MPoly::constant(&q.reversion()) * &z) * &MPoly::constant(q))
        .scale(&s)
        .vector_components()?)
}

fn surd_mv_inverse(j: &SurdMv) -> Result<SurdMv> {
    Ok(SurdMv { mv: j.mv.versor_inverse()?.scale(&(Q::from_i64(1) / &j.radicand)), radicand: j.radicand.clone() })
}

/// `E_k(φ(x) - φ(y), u, v) = δ J(φ,y)^{-1} E_k(x - y, u', v') J~(φ,x)^{-1}` with
/// `δ = a d~ - b c~ = ±1`,
/// `u' = q_y~ u q_y / |q_y|^2`, `v' = q_x~ v q_x / |q_x|^2`, at one pair of
/// rational points. The constant normalisation of `E_k` cancels.
pub fn kernel_conformal_check(e: &KernelEk, m: &VahlenMatrix, x: &[Q], y: &[Q]) -> Result<f64> {
    let n = e.n;
    let xm = Multivector::from_vector(x);
    let ym = Multivector::from_vector(y);
    let diff_img = (&m.apply(&xm)? - &m.apply(&ym)?).vector_components_or_zero(n);
    let lhs = e.f_prime.evaluate_radial(&diff_img)?;
    let qx = m.denominator_checked(&xm)?;
    let qy = m.denominator_checked(&ym)?;
    let f = e
        .f_prime
        .substitute(Space::U, &linear_images(&qy, Space::U)?)?
        .substitute(Space::V, &linear_images(&qx, Space::V)?)?;
    let dxy: Vec<Q> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let mid = f.evaluate_radial(&dxy)?;
    let jy = surd_mv_inverse(&weight_j(m, &ym, WeightKind::J1)?)?;
    let jx = weight_j(m, &xm, WeightKind::J1)?;
    let jxt = surd_mv_inverse(&SurdMv { mv: jx.mv.reversion(), radicand: jx.radicand })?;
    let value = mid.value.left_mul_mv(&(&m.pseudo_determinant() * &jy.mv)).right_mul_mv(&jxt.mv);
    let rhs = Surd { value, radicand: mid.radicand * jy.radicand * jxt.radicand };
    Ok(lhs.residual(&rhs))
}

trait VectorOrZero {
    fn vector_components_or_zero(&self, n: usize) -> Vec<Q>;
}

impl VectorOrZero for Multivector<Q> {
    fn vector_components_or_zero(&self, n: usize) -> Vec<Q> {
        if self.is_zero() {
            return vec![Q::from_i64(0); n];
        }
        self.vector_components().unwrap_or_else(|_| vec![Q::from_i64(0); n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monogenic::{build_zk, z_var};
    use crate::rarita::build_ek;
    use crate::scalar::{q, qi};

    fn v(c: &[Q]) -> Multivector<Q> {
        Multivector::from_vector(c)
    }

    fn rotor() -> Multivector<Q> {
        Multivector::from_terms(3, [(Blade::SCALAR, q(3, 5)), (Blade::from_indices(&[0, 1]), q(4, 5))])
    }

    fn reflection() -> VahlenMatrix {
        VahlenMatrix::orthogonal(&v(&[q(3, 5), q(4, 5), qi(0)])).unwrap()
    }

    fn general() -> VahlenMatrix {
        VahlenMatrix::translation(&[qi(1), q(-1, 2), qi(0)])
            .compose(&VahlenMatrix::inversion_about(&[qi(0), qi(1), qi(2)]))
            .compose(&VahlenMatrix::orthogonal(&rotor()).unwrap())
            .compose(&VahlenMatrix::dilation(3, qi(2)))
    }

    fn matrices() -> Vec<(&'static str, VahlenMatrix)> {
        vec![
            ("translation", VahlenMatrix::translation(&[qi(1), qi(-2), q(1, 2)])),
            ("dilation", VahlenMatrix::dilation(3, qi(2))),
            ("inversion", VahlenMatrix::inversion(3)),
            ("reflection", reflection()),
            ("rotation", VahlenMatrix::orthogonal(&rotor()).unwrap()),
            ("general", general()),
        ]
    }

    fn x(i: usize) -> MPoly<Q> {
        MPoly::var(3, Space::X, i)
    }

    #[test]
    fn basic_maps() {
        let p = v(&[qi(1), qi(2), qi(3)]);
        let t = VahlenMatrix::translation(&[qi(1), qi(0), qi(0)]);
        assert_eq!(t.apply(&p).unwrap(), v(&[qi(2), qi(2), qi(3)]));
        assert_eq!(VahlenMatrix::dilation(3, qi(2)).apply(&p).unwrap(), p.scale(&qi(4)));
        let inv = VahlenMatrix::inversion(3);
        assert_eq!(inv.apply(&p).unwrap(), p.vector_inverse().unwrap());
        assert_eq!(inv.apply(&Multivector::zero(3)), Err(Error::Singular));
        for (name, m) in matrices() {
            m.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(m.apply(&p).unwrap(), m.apply_iwasawa(&p).unwrap(), "{name}");
        }
    }

    #[test]
    fn invalid_matrices_rejected() {
        let n = 3;
        let one = Multivector::<Q>::one(n);
        let zero = Multivector::<Q>::zero(n);
        let e1 = Multivector::basis(n, 0);
        let e2 = Multivector::basis(n, 1);
        assert!(VahlenMatrix::new(one.scale(&qi(2)), zero.clone(), zero.clone(), one.clone()).is_err());
        assert!(VahlenMatrix::new(&one + &e1, zero.clone(), zero.clone(), one.clone()).is_err());
        assert!(VahlenMatrix::new(e2.clone(), e1.clone(), zero.clone(), one.clone()).is_err());
    }

    #[test]
    fn weights() {
        let p = v(&[qi(0), qi(0), qi(2)]);
        let inv = VahlenMatrix::inversion(3);
        let e3 = Multivector::basis(3, 2);
        assert_eq!(weight_j(&inv, &p, WeightKind::J1).unwrap().into_rational().unwrap(), e3.scale(&q(1, 4)));
        assert_eq!(weight_j(&inv, &p, WeightKind::Jm1).unwrap().into_rational().unwrap(), e3.scale(&q(1, 16)));
        let t = VahlenMatrix::translation(&[qi(1), qi(0), qi(0)]);
        assert_eq!(weight_j(&t, &p, WeightKind::J1).unwrap().into_rational().unwrap(), Multivector::one(3));
        let w = v(&[qi(1), qi(2), qi(-1)]);
        for (name, m) in matrices() {
            let u = u_transform(&m, &p, &w).unwrap();
            assert_eq!(u.norm_squared(), w.norm_squared(), "{name}");
            assert_eq!(u_transform_inverse(&m, &p, &u).unwrap(), w, "{name}");
        }
        assert_eq!(u_transform(&t, &p, &w).unwrap(), w);
    }

    #[test]
    fn dirac_intertwining() {
        let f = &(&(&x(0) * &x(1)).right_mul_mv(&Multivector::basis(3, 2)) + &(&x(2) * &x(2)))
            + &x(0).left_mul_mv(&Multivector::basis(3, 0));
        for (name, m) in matrices() {
            let out = dirac_conformal_check(&m, &f, 7).unwrap();
            assert!(out.passed(), "{name}: {out:?}");
        }
    }

    #[test]
    fn projection_intertwining() {
        let u = |i| MPoly::<Q>::var(3, Space::U, i);
        let f1 = &(&x(0) * &u(1)) + &(&x(1) * &x(2)).right_mul_mv(&Multivector::basis(3, 1)).try_mul(&u(0)).unwrap();
        let f2 = &(&(&u(0) * &u(0)) - &(&u(1) * &u(1))) * &x(0);
        for (name, m) in matrices() {
            let w = Weight::Conformal(WeightKind::J1);
            let a = intertwine_pk_check(&m, &f1, 1, &w, 3).unwrap();
            assert!(a.passed(), "{name}: {a:?}");
            let b = intertwine_pk_check(&m, &f2, 2, &w, 3).unwrap();
            assert!(b.passed(), "{name}: {b:?}");
        }
    }

    #[test]
    fn rk_intertwining() {
        let z2 = z_var::<Q>(3, Space::U, 1);
        let z3 = z_var::<Q>(3, Space::U, 2);
        let body = &(&x(0) * &z2) + &(&(&x(1) * &x(2)) * &z3).right_mul_mv(&Multivector::basis(3, 0));
        let f = RSFunction::from_poly(body, 1, Side::Left, Space::U).unwrap();
        for (name, m) in matrices() {
            let out = intertwine_rk_check(
                &m,
                &f,
                &Weight::Conformal(WeightKind::J1),
                &Weight::Conformal(WeightKind::Jm1),
                5,
            )
            .unwrap();
            assert!(out.passed(), "{name}: {out:?}");
        }
    }

    #[test]
    fn kernel_laws() {
        let e = build_ek(&build_zk(3, 1).unwrap()).unwrap();
        for (xs, ys) in [
            ([qi(2), qi(0), qi(0)], [qi(0), qi(3), qi(0)]),
            ([qi(3), qi(0), qi(0)], [qi(0), qi(4), qi(0)]),
            ([q(1, 2), qi(-1), qi(2)], [qi(1), q(1, 3), qi(-2)]),
        ] {
            for (name, m) in matrices() {
                let r = kernel_conformal_check(&e, &m, &xs, &ys).unwrap();
                assert_eq!(r, 0.0, "{name}");
            }
        }
    }
}
