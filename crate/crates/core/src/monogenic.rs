//! Spherical monogenics: the projection onto `M_k`, the Almansi-Fischer
//! splitting of harmonics, the basis `P_σ` with its dual family, and the
//! reproducing kernel `Z'_k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::clifford::{Blade, Multivector};
use crate::error::{Error, Result};
use crate::poly::{MPoly, Monomial, Side, Space};
use crate::radial::RadialRational;
use crate::scalar::{Scalar, ScalarMode, Q};

/// `h = p_k + u p_{k-1}` (left) or `h = p_k + p_{k-1} u` (right).
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicSplit<S: Scalar> {
    pub p_k: MPoly<S>,
    pub p_km1: MPoly<S>,
}

/// `z_i = u_i + u_1 e_1 e_i` for `i = 1..n-1` (0-based), left monogenic.
pub fn z_var<S: Scalar>(n: usize, space: Space, i: usize) -> MPoly<S> {
    assert!(i >= 1 && i < n, "z index out of range");
    let e1ei = Multivector::blade(n, Blade::from_indices(&[0, i]), S::one());
    &MPoly::var(n, space, i) + &MPoly::var(n, space, 0).right_mul_mv(&e1ei)
}

/// Exact zero, or in float mode negligible relative to the size of `p`.
fn vanishes<S: Scalar>(image: &MPoly<S>, p: &MPoly<S>) -> bool {
    match S::MODE {
        ScalarMode::Exact => image.is_zero(),
        ScalarMode::Float => image.max_abs() <= 1e-10 * p.max_abs().max(1.0),
    }
}

pub fn is_monogenic<S: Scalar>(p: &MPoly<S>, space: Space, side: Side) -> bool {
    vanishes(&p.dirac(space, side), p)
}

pub fn is_harmonic<S: Scalar>(p: &MPoly<S>, space: Space) -> bool {
    vanishes(&p.laplacian(space), p)
}

fn check_harmonic_degree<S: Scalar>(h: &MPoly<S>, k: u32, space: Space) -> Result<()> {
    if h.is_zero() {
        return Ok(());
    }
    if h.degree_in(space) != Some(k) {
        return Err(Error::Precondition(format!("input is not homogeneous of degree {k} in {space}")));
    }
    if !is_harmonic(h, space) {
        return Err(Error::Precondition(format!("input is not harmonic in {space}")));
    }
    Ok(())
}

fn denom<S: Scalar>(n: usize, k: u32) -> Result<S> {
    let d = n as i64 + 2 * k as i64 - 2;
    if d == 0 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(S::from_i64(d))
}

/// `P_k h = h + u D_u h / (n+2k-2)` in the given space.
pub fn projection_pk_in<S: Scalar>(h: &MPoly<S>, k: u32, space: Space, side: Side) -> Result<MPoly<S>> {
    check_harmonic_degree(h, k, space)?;
    project_unchecked(h, k, space, side)
}

pub(crate) fn project_unchecked<S: Scalar>(h: &MPoly<S>, k: u32, space: Space, side: Side) -> Result<MPoly<S>> {
    let n = h.dim();
    if h.is_zero() || k == 0 {
        return Ok(h.clone());
    }
    let u = MPoly::vector_var(n, space);
    let dh = h.dirac(space, side);
    let corr = match side {
        Side::Left => &u * &dh,
        Side::Right => &dh * &u,
    };
    Ok(h + &corr.scale(&S::one().over(&denom::<S>(n, k)?)))
}

/// Left projection onto left-monogenic polynomials of degree `k` in `u`.
pub fn projection_pk<S: Scalar>(h: &MPoly<S>, k: u32) -> Result<MPoly<S>> {
    projection_pk_in(h, k, Space::U, Side::Left)
}

/// Right projection `h + (h D_u) u / (n+2k-2)`.
pub fn right_projection_pk<S: Scalar>(h: &MPoly<S>, k: u32) -> Result<MPoly<S>> {
    projection_pk_in(h, k, Space::U, Side::Right)
}

fn split_in<S: Scalar>(h: &MPoly<S>, k: u32, space: Space, side: Side) -> Result<HarmonicSplit<S>> {
    let n = h.dim();
    let p_k = projection_pk_in(h, k, space, side)?;
    if k == 0 {
        return Ok(HarmonicSplit { p_k, p_km1: MPoly::zero(n) });
    }
    let rest = h - &p_k;
    let p_km1 = rest.dirac(space, side).scale(&S::from_i64(-1).over(&denom::<S>(n, k)?));
    Ok(HarmonicSplit { p_k, p_km1 })
}

/// `h = p_k + u p_{k-1}` with `p_{k-1} = -D_u(h - p_k)/(n+2k-2)`.
pub fn almansi_fischer_split<S: Scalar>(h: &MPoly<S>, k: u32) -> Result<HarmonicSplit<S>> {
    split_in(h, k, Space::U, Side::Left)
}

/// Mirror of [`almansi_fischer_split`]: `h = p_k + p_{k-1} u`.
pub fn right_split<S: Scalar>(h: &MPoly<S>, k: u32) -> Result<HarmonicSplit<S>> {
    split_in(h, k, Space::U, Side::Right)
}

/// Harmonic part of a homogeneous polynomial:
/// `Σ_j a_j |u|^{2j} Δ^j p`, `a_j = -a_{j-1} / (2j (n+2k-2j-2))`.
pub fn harmonic_projection<S: Scalar>(p: &MPoly<S>, k: u32, space: Space) -> Result<MPoly<S>> {
    let n = p.dim();
    let r2 = MPoly::norm2(n, space, None);
    let mut out = p.clone();
    let mut lap = p.clone();
    let mut rpow = MPoly::one(n);
    let mut a = S::one();
    for j in 1..=(k / 2) {
        lap = lap.laplacian(space);
        if lap.is_zero() {
            break;
        }
        rpow = &rpow * &r2;
        let d = 2 * j as i64 * (n as i64 + 2 * k as i64 - 2 * j as i64 - 2);
        if d == 0 {
            return Err(Error::UnsupportedDimension(n));
        }
        a = a.negated().over(&S::from_i64(d));
        out = &out + &(&rpow * &lap).scale(&a);
    }
    Ok(out)
}

/// Exponent vectors of all monomials of degree `k` in `n` variables.
pub fn exponent_vectors(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in exponent_vectors(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Harmonic projections of all degree-`k` monomials; spans `H_k`.
pub fn harmonic_spanning_set<S: Scalar>(n: usize, k: u32, space: Space) -> Result<Vec<MPoly<S>>> {
    let mut out = Vec::new();
    for e in exponent_vectors(n, k) {
        let exps: Vec<u8> = e.iter().map(|&x| x as u8).collect();
        let m = MPoly::from_terms(n, [(Monomial::from_exponents(space, &exps), Blade::SCALAR, S::one())]);
        let h = harmonic_projection(&m, k, space)?;
        if !h.is_zero() {
            out.push(h);
        }
    }
    Ok(out)
}

/// Multi-index `σ = (j_2, .., j_n)`.
pub type Sigma = Vec<u32>;

/// All `σ` with `|σ| = k`; there are `C(k+n-2, n-2)` of them.
pub fn sigmas(n: usize, k: u32) -> Vec<Sigma> {
    exponent_vectors(n - 1, k)
}

fn distinct_words(counts: &mut [u32], word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if counts.iter().all(|&c| c == 0) {
        out.push(word.clone());
        return;
    }
    for i in 0..counts.len() {
        if counts[i] > 0 {
            counts[i] -= 1;
            word.push(i);
            distinct_words(counts, word, out);
            word.pop();
            counts[i] += 1;
        }
    }
}

/// `P_σ = (1/k!) Σ z_{i_1} … z_{i_k}`, summed over the distinct orderings of
/// the multiset with `j_i` copies of `z_i`.
pub fn basis_element<S: Scalar>(n: usize, sigma: &[u32], space: Space) -> MPoly<S> {
    let k: u32 = sigma.iter().sum();
    let zs: Vec<MPoly<S>> = (1..n).map(|i| z_var(n, space, i)).collect();
    let mut words = Vec::new();
    distinct_words(&mut sigma.to_vec(), &mut Vec::new(), &mut words);
    let mut acc = MPoly::zero(n);
    for w in words {
        let prod = w.iter().fold(MPoly::one(n), |p, &i| &p * &zs[i]);
        acc = &acc + &prod;
    }
    let fact = (1..=k as i64).fold(S::one(), |f, i| f.times(&S::from_i64(i)));
    acc.scale(&S::one().over(&fact))
}

/// Basis of left-monogenic polynomials of degree `k` in `u`.
pub fn basis_p_sigma<S: Scalar>(n: usize, k: u32) -> Vec<(Sigma, MPoly<S>)> {
    sigmas(n, k)
        .into_par_iter()
        .map(|s| {
            let p = basis_element(n, &s, Space::U);
            (s, p)
        })
        .collect()
}

/// `G' = -z/|z|^n`, the fundamental solution scaled by `ω_n`.
pub fn fundamental_solution<S: Scalar>(n: usize, space: Space) -> RadialRational<S> {
    RadialRational::new(MPoly::vector_var(n, space).neg_ref(), space, n as u32, None)
}

/// Dual element `V'_σ = (-1)^k ∂^σ G'` in `space`.
pub fn dual_v_sigma<S: Scalar>(n: usize, sigma: &[u32], space: Space) -> Result<RadialRational<S>> {
    if sigma.len() + 1 != n {
        return Err(Error::Arity { expected: n - 1, got: sigma.len() });
    }
    let mut f = fundamental_solution(n, space);
    for (j, &count) in sigma.iter().enumerate() {
        for _ in 0..count {
            f = f.partial(space, j + 1)?;
        }
    }
    let k: u32 = sigma.iter().sum();
    Ok(if k % 2 == 1 { f.neg_ref() } else { f })
}

/// Restriction of an uncentered radial function to the unit sphere, where
/// the denominator is 1.
pub fn on_unit_sphere<S: Scalar>(f: &RadialRational<S>) -> MPoly<S> {
    f.numerator().clone()
}

/// `Z'_k(u, v)`, homogeneous of degree `k` in `u` and in `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelZk {
    pub n: usize,
    pub k: u32,
    pub poly: MPoly<Q>,
}

/// `Σ_σ P_σ(u) V'_σ(v) v |v|^{n+2k-2}` reduced to a polynomial.
pub fn build_zk_uncached(n: usize, k: u32) -> Result<KernelZk> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let v = MPoly::<Q>::vector_var(n, Space::V);
    let parts: Vec<Result<MPoly<Q>>> = sigmas(n, k)
        .into_par_iter()
        .map(|s| {
            let p = basis_element::<Q>(n, &s, Space::U);
            let w = dual_v_sigma::<Q>(n, &s, Space::V)?
                .mul_poly(&v, Side::Right)?
                .times_norm_power(n as u32 + 2 * k - 2)?
                .into_poly()?;
            Ok(&p * &w)
        })
        .collect();
    let mut poly = MPoly::zero(n);
    for p in parts {
        poly = &poly + &p?;
    }
    Ok(KernelZk { n, k, poly })
}

type Cache = Mutex<HashMap<(usize, u32), Arc<KernelZk>>>;

/// Cached [`build_zk_uncached`].
pub fn build_zk(n: usize, k: u32) -> Result<Arc<KernelZk>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(z) = cache.lock().unwrap().get(&(n, k)) {
        return Ok(z.clone());
    }
    let z = Arc::new(build_zk_uncached(n, k)?);
    cache.lock().unwrap().insert((n, k), z.clone());
    Ok(z)
}

impl KernelZk {
    /// `(Z'_k(u, v), p(v))_v`, normalized pairing over `v`.
    pub fn reproduce(&self, p: &MPoly<Q>) -> Result<MPoly<Q>> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch(self.n, p.dim()));
        }
        if !p.is_zero() && p.degree_in(Space::V) != Some(self.k) {
            return Err(Error::Precondition(format!("input must have degree {} in v", self.k)));
        }
        if !is_monogenic(p, Space::V, Side::Left) {
            return Err(Error::Precondition("input is not left monogenic in v".into()));
        }
        MPoly::pairing(&self.poly, p, Space::V, true)
    }
}

/// Components of the vector `outer · inner · outer` (e.g. `x u x`), each a
/// scalar polynomial.
pub fn sandwich_images<S: Scalar>(n: usize, outer: Space, inner: Space) -> Vec<MPoly<S>> {
    let o = MPoly::vector_var(n, outer);
    let i = MPoly::vector_var(n, inner);
    (&(&o * &i) * &o).vector_components().expect("sandwich of vectors is a vector")
}

/// Residual polynomial of `|x|^{4k+2} Z'(u,v) + x Z'(xux, xvx) x` (zero when
/// the reflection identity holds).
pub fn reflection_residual(z: &KernelZk) -> Result<MPoly<Q>> {
    let n = z.n;
    let sub = z
        .poly
        .substitute(Space::U, &sandwich_images(n, Space::X, Space::U))?
        .substitute(Space::V, &sandwich_images(n, Space::X, Space::V))?;
    // each substitution is simultaneous within its space, so images may
    // mention the variables they replace
    let x = MPoly::vector_var(n, Space::X);
    let rhs = &(&x * &sub) * &x;
    let r2 = MPoly::norm2(n, Space::X, None);
    let lhs = (0..(2 * z.k + 1)).fold(z.poly.clone(), |acc, _| &acc * &r2);
    Ok(&lhs + &rhs)
}

/// `sphere_mean(V'_σ(u) u P_μ(u))` for all pairs, as a matrix of multivectors.
pub fn orthonormality_matrix(n: usize, k: u32) -> Result<Vec<Vec<Multivector<Q>>>> {
    let ss = sigmas(n, k);
    let u = MPoly::<Q>::vector_var(n, Space::U);
    let duals: Vec<MPoly<Q>> = ss
        .iter()
        .map(|s| Ok(&on_unit_sphere(&dual_v_sigma::<Q>(n, s, Space::U)?) * &u))
        .collect::<Result<_>>()?;
    let basis: Vec<MPoly<Q>> = ss.iter().map(|s| basis_element(n, s, Space::U)).collect();
    duals
        .par_iter()
        .map(|d| {
            basis
                .iter()
                .map(|p| (d * p).sphere_mean(Space::U).constant_value())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    type P = MPoly<Q>;

    fn e(n: usize, idx: &[usize]) -> P {
        P::constant(&Multivector::blade(n, Blade::from_indices(idx), qi(1)))
    }

    fn u(n: usize, i: usize) -> P {
        P::var(n, Space::U, i)
    }

    #[test]
    fn projection_examples() {
        let n = 3;
        let z2 = z_var::<Q>(n, Space::U, 1);
        assert_eq!(projection_pk(&z2, 1).unwrap(), z2);
        assert!(projection_pk(&P::vector_var(n, Space::U), 1).unwrap().is_zero());
        // (2u_2 + u_1 e_1e_2 + u_3 e_3e_2)/3
        let expected = (&(&u(n, 1).scale(&qi(2)) + &(&u(n, 0) * &e(n, &[0, 1])))
            - &(&u(n, 2) * &e(n, &[1, 2])))
            .scale(&q(1, 3));
        let p = projection_pk(&u(n, 1), 1).unwrap();
        assert_eq!(p, expected);
        assert!(is_monogenic(&p, Space::U, Side::Left));
        assert!(projection_pk(&(&u(n, 0) * &u(n, 0)), 2).is_err());
    }

    #[test]
    fn splits() {
        let n = 3;
        let s = almansi_fischer_split(&P::vector_var(n, Space::U), 1).unwrap();
        assert!(s.p_k.is_zero());
        assert_eq!(s.p_km1, P::one(n));
        let s = almansi_fischer_split(&u(n, 1), 1).unwrap();
        assert_eq!(s.p_km1, e(n, &[1]).scale(&q(-1, 3)));
        assert_eq!(&s.p_k + &(&P::vector_var(n, Space::U) * &s.p_km1), u(n, 1));
        let r = right_split(&u(n, 1), 1).unwrap();
        assert_eq!(&r.p_k + &(&r.p_km1 * &P::vector_var(n, Space::U)), u(n, 1));
        assert!(is_monogenic(&r.p_k, Space::U, Side::Right));
        let z2 = z_var::<Q>(n, Space::U, 1);
        let r = right_split(&z2.reversion(), 1).unwrap();
        assert_eq!(r.p_k, z2.reversion());
        assert!(r.p_km1.is_zero());
    }

    #[test]
    fn basis_counts_and_monogenicity() {
        for n in 3..=4 {
            for k in 0..=3u32 {
                let b = basis_p_sigma::<Q>(n, k);
                let expected = crate::monogenic::tests::binom(k as usize + n - 2, n - 2);
                assert_eq!(b.len(), expected);
                for (_, p) in &b {
                    assert!(is_monogenic(p, Space::U, Side::Left));
                    assert!(p.is_zero() || p.degree_in(Space::U) == Some(k));
                }
            }
        }
        let n = 3;
        let z2 = z_var::<Q>(n, Space::U, 1);
        let z3 = z_var::<Q>(n, Space::U, 2);
        assert_eq!(basis_element::<Q>(n, &[1, 1], Space::U), (&(&z2 * &z3) + &(&z3 * &z2)).scale(&q(1, 2)));
    }

    pub(crate) fn binom(a: usize, b: usize) -> usize {
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    }

    #[test]
    fn duals_have_expected_degree() {
        let n = 3;
        let v = dual_v_sigma::<Q>(n, &[1, 1], Space::V).unwrap();
        assert_eq!(v.degree_in(Space::V), Some(-(n as i64 - 1 + 2)));
    }

    #[test]
    fn orthonormality() {
        for (n, k) in [(3, 0), (3, 1), (3, 2), (4, 1)] {
            let m = orthonormality_matrix(n, k).unwrap();
            for (i, row) in m.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    let expected = if i == j { Multivector::one(n) } else { Multivector::zero(n) };
                    assert_eq!(c, &expected, "n={n} k={k} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn kernel_reproduces() {
        let z0 = build_zk(3, 0).unwrap();
        assert_eq!(z0.poly, P::one(3));
        let z1 = build_zk(3, 1).unwrap();
        let z2v = z_var::<Q>(3, Space::V, 1);
        assert_eq!(z1.reproduce(&z2v).unwrap(), z2v.rename(Space::V, Space::U));
        assert!(z1.reproduce(&P::var(3, Space::V, 0)).is_err());
        assert!(is_monogenic(&z1.poly, Space::U, Side::Left));
        assert!(is_monogenic(&z1.poly, Space::V, Side::Right));
    }

    #[test]
    fn reflection_identity() {
        for k in 0..=2 {
            let z = build_zk(3, k).unwrap();
            assert!(reflection_residual(&z).unwrap().is_zero(), "k={k}");
        }
    }

    #[test]
    fn harmonic_spanning_set_is_harmonic() {
        for h in harmonic_spanning_set::<Q>(4, 3, Space::U).unwrap() {
            assert!(is_harmonic(&h, Space::U));
        }
    }
}
