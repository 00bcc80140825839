//! Float evaluation of kernels, pairings and Möbius pull-backs for the
//! quadrature-based checks.

use crate::clifford::Multivector;
use crate::conformal::VahlenMatrix;
use crate::error::{Error, Result};
use crate::monogenic::{exponent_vectors, project_unchecked};
use crate::poly::{omega, MPoly, Monomial, Side, Space};
use crate::rarita::KernelEk;
use crate::scalar::{Scalar, Q};

fn norm(z: &[f64]) -> f64 {
    z.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// `E_k(z, u, v)` in float arithmetic with some slots bound to points.
#[derive(Clone, Debug)]
pub struct FloatEk {
    pub n: usize,
    pub k: u32,
    num: MPoly<f64>,
    power: i32,
    /// `1 / (ω_n^2 c_k)`
    scale: f64,
}

impl FloatEk {
    pub fn new(e: &KernelEk) -> Self {
        Self {
            n: e.n,
            k: e.k,
            num: e.f_prime.numerator().to_float(),
            power: e.f_prime.power() as i32,
            scale: e.float_scale(),
        }
    }

    /// Evaluates at `x = z` and at the given fixed slots; the others stay symbolic.
    pub fn eval(&self, z: &[f64], fixed: &[(Space, &[f64])]) -> Result<MPoly<f64>> {
        let r = norm(z);
        if r == 0.0 {
            return Err(Error::Singular);
        }
        let mut p = self.num.evaluate_space(Space::X, z)?;
        for (s, pt) in fixed {
            p = p.evaluate_space(*s, pt)?;
        }
        Ok(p.scale(&(self.scale / r.powi(self.power))))
    }
}

/// `(E_k(z, u, v), g(v))_v = ∫_{S^{n-1}} E_k(z, u, v) g(v) dS(v)` with the `v`
/// moments precomputed exactly, so a pairing costs one evaluation per
/// monomial of degree `k`.
#[derive(Clone, Debug)]
pub struct EkPairing {
    pub n: usize,
    pub k: u32,
    parts: Vec<(Monomial, MPoly<f64>)>,
    power: i32,
    scale: f64,
}

impl EkPairing {
    pub fn new(e: &KernelEk) -> Self {
        let n = e.n;
        let num = e.f_prime.numerator();
        let parts = exponent_vectors(n, e.k)
            .into_iter()
            .map(|exps| {
                let exps: Vec<u8> = exps.iter().map(|&x| x as u8).collect();
                let mono = Monomial::from_exponents(Space::V, &exps);
                let m = MPoly::from_terms(n, [(mono, crate::clifford::Blade::SCALAR, Q::from_i64(1))]);
                (mono, (num * &m).sphere_mean(Space::V).to_float())
            })
            .collect();
        // ω_n · 1/(ω_n^2 c_k)
        let scale = 1.0 / (omega(n) * e.c_k.to_f64());
        Self { n, k: e.k, parts, power: e.f_prime.power() as i32, scale }
    }

    /// `g` must be homogeneous of degree `k` in `v` and free of `x`, `u`.
    pub fn pair(&self, z: &[f64], g: &MPoly<f64>) -> Result<MPoly<f64>> {
        let r = norm(z);
        if r == 0.0 {
            return Err(Error::Singular);
        }
        let mut acc = MPoly::zero(self.n);
        for (mono, coeff) in g.split_by(Space::V) {
            let c = coeff.constant_value()?;
            let part = self
                .parts
                .iter()
                .find(|(m, _)| *m == mono)
                .ok_or_else(|| Error::Precondition(format!("pairing expects degree {} in v", self.k)))?;
            acc = &acc + &part.1.evaluate_space(Space::X, z)?.right_mul_mv(&c);
        }
        Ok(acc.scale(&(self.scale / r.powi(self.power))))
    }
}

/// `∫_{S^{n-1}} p q dS` over `space`.
pub fn pairing(p: &MPoly<f64>, q: &MPoly<f64>, space: Space) -> Result<MPoly<f64>> {
    MPoly::pairing(p, q, space, false)
}

/// `P_k` in `space` for float data known to be harmonic of degree `k`.
pub fn project(p: &MPoly<f64>, k: u32, space: Space, side: Side) -> Result<MPoly<f64>> {
    project_unchecked(p, k, space, side)
}

/// Float Möbius transformation with the pull-back data used by the checks.
#[derive(Clone, Debug)]
pub struct FloatMobius {
    n: usize,
    a: Multivector<f64>,
    b: Multivector<f64>,
    c: Multivector<f64>,
    d: Multivector<f64>,
}

impl FloatMobius {
    pub fn new(m: &VahlenMatrix) -> Result<Self> {
        m.validate()?;
        Ok(Self { n: m.dim(), a: m.a.to_float(), b: m.b.to_float(), c: m.c.to_float(), d: m.d.to_float() })
    }

    fn q(&self, x: &[f64]) -> Multivector<f64> {
        &(&self.c * &Multivector::from_vector(x)) + &self.d
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let xm = Multivector::from_vector(x);
        let q = self.q(x);
        let y = &(&(&self.a * &xm) + &self.b) * &q.versor_inverse()?;
        Ok((0..self.n).map(|i| y.coeff(crate::clifford::Blade::vector(i))).collect())
    }

    /// `J_1(φ, x) = (cx+d)~ / |cx+d|^n`.
    pub fn j1(&self, x: &[f64]) -> Multivector<f64> {
        let q = self.q(x);
        let r = q.norm_squared().sqrt();
        q.reversion().scale(&(1.0 / r.powi(self.n as i32)))
    }

    /// Images of `z -> q z q~ / |q|^2` in `space`, as linear polynomials in the
    /// same space.
    pub fn u_images(&self, x: &[f64], space: Space) -> Result<Vec<MPoly<f64>>> {
        let q = self.q(x);
        let z = MPoly::vector_var(self.n, space);
        (&(&MPoly::constant(&q) * &z) * &MPoly::constant(&q.reversion()))
            .scale(&(1.0 / q.norm_squared()))
            .vector_components()
    }

    /// `J_1(φ, x) f(φ(x), u)` with `u = q w q~/|q|^2`, where `f(y)` returns a
    /// polynomial in `space`.
    pub fn pull_back(
        &self,
        x: &[f64],
        space: Space,
        f: impl Fn(&[f64]) -> Result<MPoly<f64>>,
    ) -> Result<MPoly<f64>> {
        let y = self.apply(x)?;
        let g = f(&y)?.substitute(space, &self.u_images(x, space)?)?;
        Ok(g.left_mul_mv(&self.j1(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monogenic::{basis_element, build_zk};
    use crate::quadrature::{build_sphere_rule, integrate_surface};
    use crate::rarita::build_ek;
    use crate::scalar::{q, qi};

    #[test]
    fn pairing_matches_direct_quadrature() {
        let e = build_ek(&build_zk(3, 1).unwrap()).unwrap();
        let fe = FloatEk::new(&e);
        let pr = EkPairing::new(&e);
        let z = [0.3, -0.7, 1.1];
        let g = basis_element::<Q>(3, &[0, 1], Space::V).to_float();
        let fast = pr.pair(&z, &g).unwrap();
        let rule = build_sphere_rule(3, 10).unwrap();
        let slow = integrate_surface(
            |v, _| {
                let ev = fe.eval(&z, &[(Space::V, v)])?;
                Ok(ev.try_mul(&g.evaluate_space(Space::V, v)?)?)
            },
            MPoly::zero(3),
            &[0.0; 3],
            1.0,
            &rule,
        )
        .unwrap();
        let diff = &fast - &slow;
        assert!(diff.max_abs() < 1e-12, "{diff:?}");
    }

    #[test]
    fn mobius_matches_exact() {
        let m = VahlenMatrix::translation(&[qi(1), q(-1, 2), qi(0)])
            .compose(&VahlenMatrix::inversion_about(&[qi(0), qi(1), qi(2)]));
        let fm = FloatMobius::new(&m).unwrap();
        let x = [q(1, 3), qi(2), q(-1, 2)];
        let exact = m.apply(&Multivector::from_vector(&x)).unwrap().vector_components().unwrap();
        let xf: Vec<f64> = x.iter().map(|c| c.to_f64()).collect();
        let y = fm.apply(&xf).unwrap();
        for (a, b) in y.iter().zip(&exact) {
            assert!((a - b.to_f64()).abs() < 1e-14);
        }
    }
}
