//! The Rarita-Schwinger operator, its fundamental solution and the constant
//! `c_k`.

use crate::error::{Error, Result};
use crate::monogenic::{is_harmonic, is_monogenic, project_unchecked, sandwich_images, KernelZk};
use crate::poly::{omega, MPoly, Side, Space};
use crate::quadrature::gauss_gegenbauer;
use crate::radial::RadialRational;
use crate::scalar::{Scalar, Q};
use crate::special::{gamma_half, gegenbauer};

/// `f(x, u)`: radial in `x`, left (or right) monogenic of degree `k` in `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct RSFunction<S: Scalar> {
    pub body: RadialRational<S>,
    pub k: u32,
    pub side: Side,
    /// The variable space playing the role of `u`.
    pub var: Space,
}

impl<S: Scalar> RSFunction<S> {
    pub fn new(body: RadialRational<S>, k: u32, side: Side, var: Space) -> Result<Self> {
        let num = body.numerator();
        if !num.is_zero() && num.degree_in(var) != Some(k) {
            return Err(Error::Precondition(format!("body is not homogeneous of degree {k} in {var}")));
        }
        if !is_monogenic(num, var, side) {
            return Err(Error::Precondition(format!("body is not monogenic in {var}")));
        }
        Ok(Self { body, k, side, var })
    }

    pub fn from_poly(p: MPoly<S>, k: u32, side: Side, var: Space) -> Result<Self> {
        Self::new(RadialRational::from_poly(p, Space::X), k, side, var)
    }

    /// Left: `P_{k,u} D_x f`; right: `P_{k,r}(f D_x)`.
    pub fn apply_rk(&self) -> Result<Self> {
        let d = self.body.dirac(Space::X, self.side);
        let projected = d.map_numerator(|p| project_unchecked(p, self.k, self.var, self.side))?;
        Ok(Self { body: projected, ..self.clone() })
    }
}

/// `c_k = (n-2)/(n-2+2k)`.
pub fn c_k(n: usize, k: u32) -> Result<Q> {
    if n <= 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(Q::new((n as i64 - 2).into(), (n as i64 - 2 + 2 * k as i64).into()))
}

/// `F'_k = x Z'_k(xux, v) / |x|^{n+2k}` together with `c_k`; the fundamental
/// solution is `E_k = F'_k / (ω_n^2 c_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelEk {
    pub n: usize,
    pub k: u32,
    pub f_prime: RadialRational<Q>,
    pub c_k: Q,
}

pub fn build_ek(z: &KernelZk) -> Result<KernelEk> {
    let n = z.n;
    let x = MPoly::vector_var(n, Space::X);
    let sub = z.poly.substitute(Space::U, &sandwich_images(n, Space::X, Space::U))?;
    let num = &x * &sub;
    Ok(KernelEk {
        n,
        k: z.k,
        f_prime: RadialRational::new(num, Space::X, n as u32 + 2 * z.k, None),
        c_k: c_k(n, z.k)?,
    })
}

impl KernelEk {
    /// `1 / (ω_n^2 c_k)`.
    pub fn float_scale(&self) -> f64 {
        1.0 / (omega(self.n).powi(2) * self.c_k.to_f64())
    }

    /// `F'_k · |x|^{n+2k}`, homogeneous of degree `2k+1` in `x`.
    pub fn cleared_numerator(&self) -> Result<MPoly<Q>> {
        Ok(self.f_prime.times_norm_power(self.n as u32 + 2 * self.k)?.into_poly()?)
    }

    /// `R_k` in `(x, u)` applied to `F'_k`.
    pub fn left_annihilation(&self) -> Result<RadialRational<Q>> {
        let f = RSFunction::new(self.f_prime.clone(), self.k, Side::Left, Space::U)?;
        Ok(f.apply_rk()?.body)
    }

    /// Right operator in `(x, v)` applied to `F'_k`.
    pub fn right_annihilation_check(&self) -> Result<RadialRational<Q>> {
        let f = RSFunction::new(self.f_prime.clone(), self.k, Side::Right, Space::V)?;
        Ok(f.apply_rk()?.body)
    }
}

/// `x Z'(xux, v) - Z'(u, xvx) x`.
pub fn two_representation_residual(z: &KernelZk) -> Result<MPoly<Q>> {
    let n = z.n;
    let x = MPoly::vector_var(n, Space::X);
    let left = &x * &z.poly.substitute(Space::U, &sandwich_images(n, Space::X, Space::U))?;
    let right = &z.poly.substitute(Space::V, &sandwich_images(n, Space::X, Space::V))? * &x;
    Ok(&left - &right)
}

/// `(lhs, rhs) = (mean over x of h(xux), c_k h(u))`.
pub fn lemma6_check(h: &MPoly<Q>, k: u32) -> Result<(MPoly<Q>, MPoly<Q>)> {
    let n = h.dim();
    if !h.is_zero() && (h.degree_in(Space::U) != Some(k) || !is_harmonic(h, Space::U)) {
        return Err(Error::Precondition("input must be harmonic of degree k in u".into()));
    }
    let ck = c_k(n, k)?;
    let lhs = h
        .substitute(Space::U, &sandwich_images(n, Space::X, Space::U))?
        .sphere_mean(Space::X);
    Ok((lhs, h.scale(&ck)))
}

/// `P_m^λ(t)` normalised to `P_m^λ(1) = 1`.
pub fn gegenbauer_p<S: Scalar>(m: u32, lambda: &S, t: &S) -> S {
    gegenbauer(m, lambda, t)
}

/// `∫_0^π P_k^λ(1 - 2cos^2 θ) sin^{n-2} θ dθ` by Gauss quadrature against
/// `Γ(1/2)Γ(λ+1/2)/Γ(λ+1) · λ/(λ+k)`, `λ = n/2 - 1`.
pub fn gegenbauer_integral_check(n: usize, k: u32) -> Result<(f64, f64)> {
    if n <= 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let lambda = n as f64 / 2.0 - 1.0;
    // t = cos θ: weight (1 - t^2)^{(n-3)/2}; the integrand is a polynomial of
    // degree 2k in t.
    let (ts, ws) = gauss_gegenbauer(k as usize + 2, n as u32 - 3);
    let lhs: f64 = ts
        .iter()
        .zip(&ws)
        .map(|(t, w)| w * gegenbauer_p(k, &lambda, &(1.0 - 2.0 * t * t)))
        .sum();
    let rhs = gamma_half(1) * gamma_half(n as u32 - 1) / gamma_half(n as u32) * lambda / (lambda + k as f64);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Multivector;
    use crate::monogenic::{build_zk, projection_pk, z_var};
    use crate::scalar::{q, qi};

    #[test]
    fn c_k_values() {
        assert_eq!(c_k(3, 1).unwrap(), q(1, 3));
        assert_eq!(c_k(5, 0).unwrap(), qi(1));
        assert_eq!(c_k(4, 2).unwrap(), q(1, 3));
        assert!(c_k(2, 1).is_err());
    }

    #[test]
    fn rk_examples() {
        let n = 3;
        let z2 = z_var::<Q>(n, Space::U, 1);
        let f = RSFunction::from_poly(z2.clone(), 1, Side::Left, Space::U).unwrap();
        assert!(f.apply_rk().unwrap().body.is_zero());
        let g = RSFunction::from_poly(&MPoly::var(n, Space::X, 0) * &z2, 1, Side::Left, Space::U).unwrap();
        let expected = projection_pk(&z2.left_mul_mv(&Multivector::basis(n, 0)), 1).unwrap();
        assert_eq!(g.apply_rk().unwrap().body.into_poly().unwrap(), expected);
        assert!(RSFunction::from_poly(MPoly::<Q>::var(n, Space::U, 0), 1, Side::Left, Space::U).is_err());
    }

    #[test]
    fn ek_annihilation_small() {
        for k in 0..=1 {
            let e = build_ek(&build_zk(3, k).unwrap()).unwrap();
            assert!(e.left_annihilation().unwrap().is_zero(), "k={k}");
            assert!(e.right_annihilation_check().unwrap().is_zero(), "k={k}");
            assert_eq!(e.cleared_numerator().unwrap().degree_in(Space::X), Some(2 * k + 1));
            assert!(two_representation_residual(&build_zk(3, k).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn lemma6_examples() {
        let n = 3;
        let z2 = z_var::<Q>(n, Space::U, 1);
        let (l, r) = lemma6_check(&z2, 1).unwrap();
        assert_eq!(l, r);
        assert_eq!(l, z2.scale(&q(1, 3)));
        let u1 = MPoly::<Q>::var(n, Space::U, 0);
        let u2 = MPoly::<Q>::var(n, Space::U, 1);
        let h = &(&u1 * &u1) - &(&u2 * &u2);
        let (l, _) = lemma6_check(&h, 2).unwrap();
        assert_eq!(l, h.scale(&q(1, 5)));
    }

    #[test]
    fn gegenbauer_values() {
        assert_eq!(gegenbauer_p(3, &q(1, 2), &qi(1)), qi(1));
        assert_eq!(gegenbauer_p(1, &q(3, 2), &q(2, 7)), q(2, 7));
        let (l, r) = gegenbauer_integral_check(3, 1).unwrap();
        assert!((l - 2.0 / 3.0).abs() < 1e-14 && (r - 2.0 / 3.0).abs() < 1e-14);
    }
}
