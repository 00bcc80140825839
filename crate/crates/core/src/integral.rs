//! Quadrature checks of the integral formulas on the unit ball: Stokes,
//! Cauchy's theorem, the Cauchy integral formula, Borel-Pompeiu and the
//! `T_k` transform.

use crate::clifford::Multivector;
use crate::conformal::VahlenMatrix;
use crate::error::{Error, Result};
use crate::monogenic::{basis_element, project_unchecked};
use crate::numeric::{pairing, project, EkPairing, FloatEk, FloatMobius};
use crate::poly::{MPoly, Side, Space};
use crate::quadrature::{build_sphere_rule, integrate_ball, integrate_surface, BallRule, SphereRule};
use crate::rarita::{KernelEk, RSFunction};
use crate::scalar::{qi, Q};

/// Shared quadrature setup for one `(n, k)`.
pub struct Quad {
    pub n: usize,
    pub k: u32,
    pub sphere: SphereRule,
    pub ball: BallRule,
}

impl Quad {
    pub fn new(n: usize, k: u32, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Precondition("quadrature order must be at least 2".into()));
        }
        let radial = order.clamp(8, 20);
        Ok(Self {
            n,
            k,
            sphere: build_sphere_rule(n, order)?,
            ball: BallRule::new(n, order, radial)?.refined(2, 0.5),
        })
    }

    fn origin(&self) -> Vec<f64> {
        vec![0.0; self.n]
    }

    fn surface<F>(&self, f: F) -> Result<MPoly<f64>>
    where
        F: Fn(&[f64], &[f64]) -> Result<MPoly<f64>> + Sync,
    {
        integrate_surface(f, MPoly::zero(self.n), &self.origin(), 1.0, &self.sphere)
    }

    fn volume<F>(&self, f: F, singular: Option<&[f64]>) -> Result<MPoly<f64>>
    where
        F: Fn(&[f64]) -> Result<MPoly<f64>> + Sync,
    {
        integrate_ball(f, MPoly::zero(self.n), &self.origin(), 1.0, &self.ball, singular, singular.is_some())
    }
}

/// Pads `head` with zeros to length `n`.
pub fn point(n: usize, head: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; n];
    for (slot, v) in p.iter_mut().zip(head) {
        *slot = *v;
    }
    p
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn normal(n: &[f64]) -> Multivector<f64> {
    Multivector::from_vector(n)
}

/// `|a - b|_∞ / |a|_∞`.
pub fn relative(a: &MPoly<f64>, b: &MPoly<f64>) -> f64 {
    let d = (a - b).max_abs();
    let s = a.max_abs();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

fn at_x(p: &MPoly<f64>, x: &[f64]) -> Result<MPoly<f64>> {
    p.evaluate_space(Space::X, x)
}

/// `z_2^k` in `space`, a left-monogenic polynomial of degree `k`.
pub fn test_pk(n: usize, k: u32, space: Space) -> MPoly<Q> {
    let mut sigma = vec![0; n - 1];
    sigma[0] = k;
    basis_element(n, &sigma, space)
}

/// A second basis element (uses `z_n` when `k > 0`).
fn test_pk_alt(n: usize, k: u32, space: Space) -> MPoly<Q> {
    let mut sigma = vec![0; n - 1];
    sigma[n - 2] = k;
    basis_element(n, &sigma, space)
}

fn x_var(n: usize, i: usize) -> MPoly<Q> {
    MPoly::var(n, Space::X, i)
}

fn e(n: usize, i: usize) -> Multivector<Q> {
    Multivector::basis(n, i % n)
}

/// Dirac Stokes theorem `∫_{∂B} g dσ f = ∫_B (g D) f + g (D f)` for
/// non-monogenic polynomial `f, g` in `(x, u)`. Returns the relative residual.
pub fn stokes(qd: &Quad) -> Result<f64> {
    let n = qd.n;
    let u = |i: usize| MPoly::<Q>::var(n, Space::U, i % n);
    let f = &(&(&x_var(n, 0) * &x_var(n, 1)).right_mul_mv(&e(n, 2)) + &(&(&x_var(n, 2) * &x_var(n, 2)) * &u(0)))
        + &(&x_var(n, 0) * &u(1)).left_mul_mv(&(&e(n, 0) * &e(n, 1)));
    let g = &(&x_var(n, 1).left_mul_mv(&e(n, 0)) + &(&(&x_var(n, 0) * &x_var(n, 0)) * &u(2)).right_mul_mv(&e(n, 1)))
        + &MPoly::one(n);
    let vol = &(&g.dirac(Space::X, Side::Right) * &f) + &(&g * &f.dirac(Space::X, Side::Left));
    let (ff, gf, vf) = (f.to_float(), g.to_float(), vol.to_float());
    let lhs = qd.surface(|x, nrm| Ok(&at_x(&gf, x)?.right_mul_mv(&normal(nrm)) * &at_x(&ff, x)?))?;
    let rhs = qd.volume(|x| at_x(&vf, x), None)?;
    Ok(relative(&lhs, &rhs))
}

/// Left test solution of degree `k` in `u`: `x_1 P + x_2 x_3 P' e_2`.
fn rs_left(n: usize, k: u32) -> Result<MPoly<Q>> {
    let a = &x_var(n, 0) * &test_pk(n, k, Space::U);
    let b = (&(&x_var(n, 1) * &x_var(n, 2)) * &test_pk_alt(n, k, Space::U)).right_mul_mv(&e(n, 1));
    Ok(&a + &b)
}

/// Right-monogenic counterpart, built from reversions.
fn rs_right(n: usize, k: u32) -> Result<MPoly<Q>> {
    let a = &x_var(n, 1) * &test_pk_alt(n, k, Space::U).reversion();
    let b = (&(&x_var(n, 0) * &x_var(n, 2)) * &test_pk(n, k, Space::U).reversion()).left_mul_mv(&e(n, 0));
    Ok(&(&a + &b) + &(&x_var(n, 2) * &x_var(n, 2)).left_mul_mv(&e(n, 2)).try_mul(&test_pk(n, k, Space::U).reversion())?)
}

/// Rarita-Schwinger Stokes theorem: the boundary form `∫(g dσ f)_u` against
/// the volume form and against the two projected boundary forms. Returns the
/// largest relative residual.
pub fn rs_stokes(qd: &Quad) -> Result<f64> {
    let (n, k) = (qd.n, qd.k);
    let f = rs_left(n, k)?;
    let g = rs_right(n, k)?;
    let rf = RSFunction::from_poly(f.clone(), k, Side::Left, Space::U)?.apply_rk()?.body.into_poly()?;
    let gr = RSFunction::from_poly(g.clone(), k, Side::Right, Space::U)?.apply_rk()?.body.into_poly()?;
    let (ff, gf, rff, grf) = (f.to_float(), g.to_float(), rf.to_float(), gr.to_float());
    let boundary = |form: usize| {
        qd.surface(|x, nrm| {
            let (gx, fx) = (at_x(&gf, x)?, at_x(&ff, x)?);
            let nv = normal(nrm);
            match form {
                0 => pairing(&gx.right_mul_mv(&nv), &fx, Space::U),
                1 => pairing(&gx, &project(&fx.left_mul_mv(&nv), k, Space::U, Side::Left)?, Space::U),
                _ => pairing(&project(&gx.right_mul_mv(&nv), k, Space::U, Side::Right)?, &fx, Space::U),
            }
        })
    };
    let b0 = boundary(0)?;
    let b1 = boundary(1)?;
    let b2 = boundary(2)?;
    let vol = qd.volume(
        |x| {
            let a = pairing(&at_x(&grf, x)?, &at_x(&ff, x)?, Space::U)?;
            let b = pairing(&at_x(&gf, x)?, &at_x(&rff, x)?, Space::U)?;
            Ok(&a + &b)
        },
        None,
    )?;
    Ok(relative(&b0, &vol).max(relative(&b0, &b1)).max(relative(&b0, &b2)))
}

/// `f(x, u) = E_k(x - z0, u, v0)`: a left solution in `(x, u)` away from `z0`.
pub fn kernel_solution(fe: &FloatEk, z0: &[f64], v0: &[f64], x: &[f64], out: Space) -> Result<MPoly<f64>> {
    Ok(fe.eval(&sub(x, z0), &[(Space::V, v0)])?.rename(Space::U, out))
}

/// `g(x, u) = E_k(x - z1, u1, u)`: a right solution in `(x, u)`.
pub fn kernel_right_solution(fe: &FloatEk, z1: &[f64], u1: &[f64], x: &[f64]) -> Result<MPoly<f64>> {
    Ok(fe.eval(&sub(x, z1), &[(Space::U, u1)])?.rename(Space::V, Space::U))
}

/// `|∫_{∂B} (g, P_k dσ f)_u|` for a left solution `f` and right solution `g`
/// with singularities outside the closed ball.
pub fn cauchy_theorem(qd: &Quad, e: &KernelEk) -> Result<f64> {
    let (n, k) = (qd.n, qd.k);
    let fe = FloatEk::new(e);
    let z0 = point(n, &[0.0, 0.0, 2.0]);
    let z1 = point(n, &[-2.0, 0.5, 0.0]);
    let v0 = point(n, &[0.0, 1.0, 0.0]);
    let u1 = point(n, &[0.6, 0.0, 0.8]);
    let pf = test_pk(n, k, Space::U).to_float();
    let total = qd.surface(|x, nrm| {
        let f = &kernel_solution(&fe, &z0, &v0, x, Space::U)? + &pf;
        let g = kernel_right_solution(&fe, &z1, &u1, x)?;
        let pf = project(&f.left_mul_mv(&normal(nrm)), k, Space::U, Side::Left)?;
        pairing(&g, &pf, Space::U)
    })?;
    Ok(total.max_abs())
}

/// Cauchy's theorem for the pulled-back solutions
/// `J(φ,x) f(φ(x), u)` and `g(φ(x), u) J~(φ,x)`.
pub fn cauchy_theorem_conformal(qd: &Quad, e: &KernelEk, m: &VahlenMatrix) -> Result<f64> {
    let (n, k) = (qd.n, qd.k);
    let fe = FloatEk::new(e);
    let fm = FloatMobius::new(m)?;
    let z0 = point(n, &[0.0, 0.0, -0.5]);
    let z1 = point(n, &[0.5, 0.0, 0.0]);
    let v0 = point(n, &[0.0, 1.0, 0.0]);
    let v1 = point(n, &[0.0, 0.6, 0.8]);
    let total = qd.surface(|x, nrm| {
        let f = fm.pull_back(x, Space::U, |y| kernel_solution(&fe, &z0, &v0, y, Space::U))?;
        let g = fm.pull_back(x, Space::U, |y| kernel_solution(&fe, &z1, &v1, y, Space::U))?.reversion();
        let pf = project(&f.left_mul_mv(&normal(nrm)), k, Space::U, Side::Left)?;
        pairing(&g, &pf, Space::U)
    })?;
    Ok(total.max_abs())
}

/// Boundary term `∫_{∂B} (E_k(x-y,u,v), P_{k,v} dσ_x f(x,v))_v`.
fn boundary_term<F>(qd: &Quad, pr: &EkPairing, y: &[f64], f: F) -> Result<MPoly<f64>>
where
    F: Fn(&[f64]) -> Result<MPoly<f64>> + Sync,
{
    let k = qd.k;
    qd.surface(|x, nrm| {
        let g = project(&f(x)?.left_mul_mv(&normal(nrm)), k, Space::V, Side::Left)?;
        pr.pair(&sub(x, y), &g)
    })
}

/// The right-handed boundary form `∫_{∂B} (E_k(x-y,u,v) dσ_x P_{k,r}, f(x,v))_v`.
fn boundary_term_right<F>(qd: &Quad, fe: &FloatEk, y: &[f64], f: F) -> Result<MPoly<f64>>
where
    F: Fn(&[f64]) -> Result<MPoly<f64>> + Sync,
{
    let k = qd.k;
    qd.surface(|x, nrm| {
        let ev = fe.eval(&sub(x, y), &[])?.right_mul_mv(&normal(nrm));
        let ev = project_unchecked(&ev, k, Space::V, Side::Right)?;
        pairing(&ev, &f(x)?, Space::V)
    })
}

/// Sign with which the boundary and volume terms reproduce `f(y, u)`; see
/// [`cif`].
pub const REPRODUCTION_SIGN: f64 = -1.0;

/// Residuals of the Cauchy integral formula on the unit ball.
#[derive(Clone, Debug, PartialEq)]
pub struct CifResiduals {
    /// `f = p_k(v)`, constant in `x`.
    pub polynomial: f64,
    /// `f = E_k(x - z0, v, v0)`.
    pub kernel: f64,
    /// Right-handed boundary form, kernel family.
    pub right_form: f64,
    /// Absolute size of the boundary integral for `y` outside the ball.
    pub exterior: f64,
}

impl CifResiduals {
    pub fn max(&self) -> f64 {
        self.polynomial.max(self.kernel).max(self.right_form).max(self.exterior)
    }
}

/// `f(y,u) = s ∫_{∂B} (E_k(x-y,u,v), P_k dσ_x f(x,v))_v` with
/// `s = REPRODUCTION_SIGN`: with `E_k = F_k/(ω_n c_k)` as normalised here the
/// boundary integral returns `-f(y, u)`.
pub fn cif(qd: &Quad, e: &KernelEk) -> Result<CifResiduals> {
    let n = qd.n;
    let k = qd.k;
    let pr = EkPairing::new(e);
    let fe = FloatEk::new(e);
    let y = point(n, &[0.2, 0.0, 0.0]);
    let z0 = point(n, &[0.0, 0.0, 2.0]);
    let v0 = point(n, &[0.0, 1.0, 0.0]);
    let pk = test_pk(n, k, Space::V).to_float();

    let poly_rhs = boundary_term(qd, &pr, &y, |_| Ok(pk.clone()))?.scale(&REPRODUCTION_SIGN);
    let polynomial = relative(&pk.rename(Space::V, Space::U), &poly_rhs);

    let fam = |x: &[f64]| kernel_solution(&fe, &z0, &v0, x, Space::V);
    let lhs = fam(&y)?.rename(Space::V, Space::U);
    let rhs = boundary_term(qd, &pr, &y, fam)?.scale(&REPRODUCTION_SIGN);
    let kernel = relative(&lhs, &rhs);
    let rhs2 = boundary_term_right(qd, &fe, &y, fam)?.scale(&REPRODUCTION_SIGN);
    let right_form = relative(&lhs, &rhs2);

    let y_out = point(n, &[3.0, 0.0, 0.0]);
    let exterior = boundary_term(qd, &pr, &y_out, |_| Ok(pk.clone()))?.max_abs();
    Ok(CifResiduals { polynomial, kernel, right_form, exterior })
}

/// Cauchy integral formula for the pulled-back solution
/// `f~(x, w) = J(φ,x) f(φ(x), u(x, w))`, `f = E_k(· - z0, ·, v0)`.
pub fn cif_conformal(qd: &Quad, e: &KernelEk, m: &VahlenMatrix) -> Result<f64> {
    let n = qd.n;
    let pr = EkPairing::new(e);
    let fe = FloatEk::new(e);
    let fm = FloatMobius::new(m)?;
    let y = point(n, &[0.2, 0.0, 0.0]);
    let z0 = point(n, &[0.0, 0.0, -0.5]);
    let v0 = point(n, &[0.0, 1.0, 0.0]);
    let fam = |x: &[f64]| fm.pull_back(x, Space::V, |p| kernel_solution(&fe, &z0, &v0, p, Space::V));
    let lhs = fam(&y)?.rename(Space::V, Space::U);
    let rhs = boundary_term(qd, &pr, &y, fam)?.scale(&REPRODUCTION_SIGN);
    Ok(relative(&lhs, &rhs))
}

/// Borel-Pompeiu for the non-solution `f = x_1 p_k(v)`:
/// `f(y,u) = s [∫_{∂B} (E_k, P_k dσ f)_v - ∫_B (E_k, R_{k,v} f)_v]`.
pub fn borel_pompeiu(qd: &Quad, e: &KernelEk) -> Result<f64> {
    let (n, k) = (qd.n, qd.k);
    let pr = EkPairing::new(e);
    let y = point(n, &[0.2, 0.0, 0.0]);
    let f = &x_var(n, 0) * &test_pk(n, k, Space::V);
    let rf = project_unchecked(&f.dirac(Space::X, Side::Left), k, Space::V, Side::Left)?;
    let (ff, rff) = (f.to_float(), rf.to_float());
    let boundary = boundary_term(qd, &pr, &y, |x| at_x(&ff, x))?;
    let volume = qd.volume(|x| pr.pair(&sub(x, &y), &at_x(&rff, x)?), Some(&y))?;
    let rhs = (&boundary - &volume).scale(&REPRODUCTION_SIGN);
    let lhs = at_x(&ff, &y)?.rename(Space::V, Space::U);
    Ok(relative(&lhs, &rhs))
}

/// `ψ(x, v) = (1 - |x|^2)^3 p_k(v)`, C^2 across the unit sphere when extended
/// by zero.
pub fn bump_psi(n: usize, k: u32) -> MPoly<Q> {
    let r2 = MPoly::<Q>::norm2(n, Space::X, None);
    let one_minus = &MPoly::one(n) - &r2;
    let bump = &(&one_minus * &one_minus) * &one_minus;
    &bump * &test_pk(n, k, Space::V)
}

fn tk_point(n: usize) -> Vec<f64> {
    point(n, &[0.2, -0.1, 0.3])
}

/// `ψ(y,u) = -s ∫ (E_k(x-y,u,v), R_k ψ(x,v))_v dx` with the sign `s` of
/// [`REPRODUCTION_SIGN`].
pub fn tk_delta(qd: &Quad, e: &KernelEk) -> Result<f64> {
    let (n, k) = (qd.n, qd.k);
    let pr = EkPairing::new(e);
    let y = tk_point(n);
    let psi = bump_psi(n, k);
    let rpsi = project_unchecked(&psi.dirac(Space::X, Side::Left), k, Space::V, Side::Left)?.to_float();
    let vol = qd.volume(|x| pr.pair(&sub(x, &y), &at_x(&rpsi, x)?), Some(&y))?;
    let rhs = vol.scale(&-REPRODUCTION_SIGN);
    let lhs = at_x(&psi.to_float(), &y)?.rename(Space::V, Space::U);
    Ok(relative(&lhs, &rhs))
}

/// `R_{k,y,u} T_k ψ = ψ` with `T_k ψ(y,u) = -s ∫ (E_k(x-y,u,v), ψ(x,v))_v dx`,
/// i.e. `T_k ψ = ∫ (E_k, ψ)_v` for the sign in use.
/// The `y`-derivatives are moved onto `ψ` through the substitution
/// `x -> x + y`, so `∂_{y_i} T_k ψ = -s ∫ (E_k(x-y,u,v), ∂_i ψ(x,v))_v dx`.
pub fn tk_inverse(qd: &Quad, e: &KernelEk) -> Result<f64> {
    let (n, k) = (qd.n, qd.k);
    let pr = EkPairing::new(e);
    let y = tk_point(n);
    let psi = bump_psi(n, k);
    let mut d = MPoly::zero(n);
    for i in 0..n {
        let dpsi = psi.partial(Space::X, i)?.to_float();
        let part = qd.volume(|x| pr.pair(&sub(x, &y), &at_x(&dpsi, x)?), Some(&y))?;
        d = &d + &part.scale(&-REPRODUCTION_SIGN).left_mul_mv(&Multivector::basis(n, i));
    }
    let rhs = project(&d, k, Space::U, Side::Left)?;
    let lhs = at_x(&psi.to_float(), &y)?.rename(Space::V, Space::U);
    Ok(relative(&lhs, &rhs))
}

/// `x -> (x - p)^{-1}` with `p = 3 e_3`: its pole and the images of
/// the test singularities stay away from the closed unit ball.
pub fn test_inversion(n: usize) -> VahlenMatrix {
    let mut p = vec![qi(0); n];
    p[2] = qi(3);
    VahlenMatrix::inversion_about(&p)
}
