//! Product quadrature on spheres and balls in `R^n` (float mode).

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::special::gamma_half;

/// Gauss rule for the weight `(1-t^2)^{a}` on `[-1, 1]`, `a = two_a / 2 >= 0`,
/// by Golub–Welsch on the Gegenbauer Jacobi matrix.
pub fn gauss_gegenbauer(m: usize, two_a: u32) -> (Vec<f64>, Vec<f64>) {
    assert!(m > 0, "rule needs at least one node");
    let a = two_a as f64 / 2.0;
    let mut j = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        let b = kf * (kf + 2.0 * a) / ((2.0 * kf + 2.0 * a + 1.0) * (2.0 * kf + 2.0 * a - 1.0));
        j[(k, k - 1)] = b.sqrt();
        j[(k - 1, k)] = b.sqrt();
    }
    let mu0 = gamma_half(1) * gamma_half(two_a + 2) / gamma_half(two_a + 3);
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_gegenbauer(m, 0)
}

/// Gauss–Legendre on `[lo, hi]`.
pub fn gauss_legendre_on(m: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(m);
    let half = (hi - lo) / 2.0;
    let mid = (hi + lo) / 2.0;
    (t.iter().map(|x| mid + half * x).collect(), w.iter().map(|x| x * half).collect())
}

/// Nodes on `S^{n-1}` with positive weights summing to `ω_n`.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub n: usize,
    pub order: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

/// Product rule exact for polynomials of degree `<= 2q - 1`: trapezoid on the
/// circle, then `x_1 = t`, `x' = sqrt(1-t^2) y` with a Gauss–Gegenbauer rule in
/// `t` for each added dimension.
pub fn build_sphere_rule(n: usize, q: usize) -> Result<SphereRule> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if q == 0 {
        return Err(Error::Precondition("quadrature order must be positive".into()));
    }
    let m = 2 * q;
    let w = 2.0 * std::f64::consts::PI / m as f64;
    let mut nodes: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let th = w * j as f64;
            vec![th.cos(), th.sin()]
        })
        .collect();
    let mut weights = vec![w; m];
    for dim in 3..=n {
        let (ts, tw) = gauss_gegenbauer(q, dim as u32 - 3);
        let mut nn = Vec::with_capacity(ts.len() * nodes.len());
        let mut nw = Vec::with_capacity(ts.len() * nodes.len());
        for (t, wt) in ts.iter().zip(&tw) {
            let s = (1.0 - t * t).max(0.0).sqrt();
            for (y, wy) in nodes.iter().zip(&weights) {
                let mut p = Vec::with_capacity(dim);
                p.push(*t);
                p.extend(y.iter().map(|c| c * s));
                nn.push(p);
                nw.push(wt * wy);
            }
        }
        nodes = nn;
        weights = nw;
    }
    Ok(SphereRule { n, order: q, nodes, weights })
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Values that can be summed with float weights.
pub trait Accumulate: Clone + Send {
    fn add_scaled(&mut self, other: &Self, w: f64);
    fn is_finite(&self) -> bool;
}

impl Accumulate for f64 {
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += w * other;
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Accumulate for Vec<f64> {
    fn add_scaled(&mut self, other: &Self, w: f64) {
        if self.len() < other.len() {
            self.resize(other.len(), 0.0);
        }
        for (a, b) in self.iter_mut().zip(other) {
            *a += w * b;
        }
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

impl Accumulate for Multivector<f64> {
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self = &*self + &other.scale(&w);
    }
    fn is_finite(&self) -> bool {
        self.terms().all(|(_, c)| c.is_finite())
    }
}

impl Accumulate for MPoly<f64> {
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self = &*self + &other.scale(&w);
    }
    fn is_finite(&self) -> bool {
        self.terms().all(|(_, _, c)| c.is_finite())
    }
}

fn weighted_sum<T: Accumulate>(zero: T, items: Vec<(f64, Result<T>)>) -> Result<T> {
    let mut acc = zero;
    for (w, v) in items {
        let v = v?;
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        acc.add_scaled(&v, w);
    }
    Ok(acc)
}

/// `∫_{∂B(c,r)} f dS`; `f` receives the surface point and the outward unit
/// normal.
pub fn integrate_surface<T, F>(f: F, zero: T, center: &[f64], radius: f64, rule: &SphereRule) -> Result<T>
where
    T: Accumulate,
    F: Fn(&[f64], &[f64]) -> Result<T> + Sync,
{
    if center.len() != rule.n {
        return Err(Error::DimensionMismatch(rule.n, center.len()));
    }
    let scale = radius.powi(rule.n as i32 - 1);
    let items: Vec<(f64, Result<T>)> = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(w_node, wt)| {
            let x: Vec<f64> = center.iter().zip(w_node).map(|(c, o)| c + radius * o).collect();
            (wt * scale, f(&x, w_node))
        })
        .collect();
    weighted_sum(zero, items)
}

/// Ball rule in polar coordinates about an origin point: a sphere rule for
/// directions and per-cell Gauss–Legendre along each ray.
#[derive(Clone, Debug)]
pub struct BallRule {
    pub sphere: SphereRule,
    pub radial_order: usize,
    /// Geometric cells toward the origin of the rays (1 = a single cell).
    pub cells: usize,
    pub ratio: f64,
}

impl BallRule {
    pub fn new(n: usize, q: usize, radial_order: usize) -> Result<Self> {
        Ok(Self { sphere: build_sphere_rule(n, q)?, radial_order, cells: 1, ratio: 0.5 })
    }

    pub fn refined(mut self, cells: usize, ratio: f64) -> Self {
        self.cells = cells.max(1);
        self.ratio = ratio;
        self
    }

    /// Radial nodes and weights on `[0, len]`, including the Jacobian
    /// `r^{n-1}`.
    fn radial(&self, len: f64) -> Vec<(f64, f64)> {
        let n = self.sphere.n as i32;
        let mut bounds = vec![len];
        for _ in 1..self.cells {
            let last = *bounds.last().unwrap();
            bounds.push(last * self.ratio);
        }
        bounds.push(0.0);
        let mut out = Vec::new();
        for pair in bounds.windows(2) {
            let (r, w) = gauss_legendre_on(self.radial_order, pair[1], pair[0]);
            out.extend(r.into_iter().zip(w).map(|(r, w)| (r, w * r.powi(n - 1))));
        }
        out
    }
}

/// `∫_{B(c,R)} f dx`. A singular point inside the ball must be named and
/// requires `refine`; rays are then cast from it.
pub fn integrate_ball<T, F>(
    f: F,
    zero: T,
    center: &[f64],
    radius: f64,
    rule: &BallRule,
    singular: Option<&[f64]>,
    refine: bool,
) -> Result<T>
where
    T: Accumulate,
    F: Fn(&[f64]) -> Result<T> + Sync,
{
    let n = rule.sphere.n;
    if center.len() != n {
        return Err(Error::DimensionMismatch(n, center.len()));
    }
    let origin: Vec<f64> = match singular {
        Some(y) => {
            let d2: f64 = y.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < radius * radius && !refine {
                return Err(Error::Precondition(
                    "singular point inside the ball requires refinement".into(),
                ));
            }
            if d2 >= radius * radius {
                center.to_vec()
            } else {
                y.to_vec()
            }
        }
        None => center.to_vec(),
    };
    let off: Vec<f64> = origin.iter().zip(center).map(|(a, b)| a - b).collect();
    let off2: f64 = off.iter().map(|c| c * c).sum();
    let (f, origin) = (&f, &origin);
    let items: Vec<(f64, Result<T>)> = rule
        .sphere
        .nodes
        .par_iter()
        .zip(&rule.sphere.weights)
        .flat_map_iter(|(om, wo)| {
            let b: f64 = off.iter().zip(om).map(|(a, b)| a * b).sum();
            let len = -b + (b * b - off2 + radius * radius).sqrt();
            rule.radial(len).into_iter().map(move |(r, wr)| {
                let x: Vec<f64> = origin.iter().zip(om).map(|(o, d)| o + r * d).collect();
                (wo * wr, f(&x))
            })
        })
        .collect();
    weighted_sum(zero, items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{sphere_moment, omega};
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (t, w) = gauss_legendre(5);
        let s: f64 = t.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_rule_mass_and_moments() {
        for n in 2..=5 {
            let rule = build_sphere_rule(n, 6).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - omega(n)).abs() < 1e-12 * omega(n), "n={n}");
        }
        let rule = build_sphere_rule(3, 8).unwrap();
        let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x[0] * x[0]).sum();
        assert!((s - 4.0 * PI / 3.0).abs() < 1e-12);
        let rule = build_sphere_rule(4, 8).unwrap();
        let s: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x[0].powi(2) * x[1].powi(2))
            .sum();
        let exact = omega(4) * sphere_moment::<f64>(4, &[2, 2, 0, 0]);
        assert!((s - exact).abs() < 1e-12);
    }

    #[test]
    fn surface_integral() {
        let rule = build_sphere_rule(3, 10).unwrap();
        let v = integrate_surface(|_, _| Ok(1.0), 0.0, &[0.0; 3], 1.0, &rule).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-12);
        let v = integrate_surface(|_, _| Ok(1.0), 0.0, &[1.0, 0.0, 0.0], 2.0, &rule).unwrap();
        assert!((v - 16.0 * PI).abs() < 1e-11);
        let err = integrate_surface(|_, _| Ok(f64::INFINITY), 0.0, &[0.0; 3], 1.0, &rule);
        assert_eq!(err, Err(Error::NonFinite));
    }

    #[test]
    fn ball_integrals() {
        let rule = BallRule::new(3, 8, 8).unwrap();
        let vol = integrate_ball(|_| Ok(1.0), 0.0, &[0.0; 3], 1.0, &rule, None, false).unwrap();
        assert!((vol - 4.0 * PI / 3.0).abs() < 1e-10);
        let m = integrate_ball(|x| Ok(x[0] * x[0]), 0.0, &[0.0; 3], 1.0, &rule, None, false).unwrap();
        assert!((m - 4.0 * PI / 15.0).abs() < 1e-10);
        let y = [0.2, 0.1, 0.0];
        assert!(integrate_ball(|_| Ok(1.0), 0.0, &[0.0; 3], 1.0, &rule, Some(&y), false).is_err());
        let rule = BallRule::new(3, 16, 10).unwrap().refined(3, 0.4);
        let vol = integrate_ball(|_| Ok(1.0), 0.0, &[0.0; 3], 1.0, &rule, Some(&y), true).unwrap();
        assert!((vol - 4.0 * PI / 3.0).abs() < 1e-9, "{vol}");
    }
}
