//! Gamma values at half-integers and Gegenbauer polynomials.

use std::f64::consts::PI;

use crate::scalar::{pochhammer, Scalar};

/// `Γ(m/2)` for a positive integer `m`.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0, "Γ(0) is undefined");
    let (mut g, mut a) = if m % 2 == 0 { (1.0, 2) } else { (PI.sqrt(), 1) };
    // Γ(s+1) = sΓ(s), stepping s by one (a by two)
    while a < m {
        g *= a as f64 / 2.0;
        a += 2;
    }
    g
}

/// Gegenbauer polynomial `C_m^λ(t)` normalised so that `C_m^λ(1) = 1`, via
/// the terminating hypergeometric series
/// `Σ_i (-m)_i (m+2λ)_i / ((λ+1/2)_i i!) ((1-t)/2)^i`.
pub fn gegenbauer<S: Scalar>(m: u32, lambda: &S, t: &S) -> S {
    let half = S::from_ratio(1, 2);
    let x = S::one().minus(t).times(&half);
    let neg_m = S::from_i64(-(m as i64));
    let top = S::from_i64(m as i64).plus(&lambda.plus(lambda));
    let bottom = lambda.plus(&half);
    let mut sum = S::zero();
    let mut xi = S::one();
    let mut fact = S::one();
    for i in 0..=m {
        if i > 0 {
            xi = xi.times(&x);
            fact = fact.times(&S::from_i64(i as i64));
        }
        let c = pochhammer(&neg_m, i)
            .times(&pochhammer(&top, i))
            .over(&pochhammer(&bottom, i).times(&fact));
        sum = sum.plus(&c.times(&xi));
    }
    sum
}

/// Gauss–Jacobi-type integral weight `∫_{-1}^{1} (1-t^2)^{λ-1/2} dt
/// = Γ(1/2)Γ(λ+1/2)/Γ(λ+1)` for `λ = n/2 - 1`, i.e. `a = (n-3)/2`.
pub fn gegenbauer_weight_mass(n: usize) -> f64 {
    gamma_half(1) * gamma_half(n as u32 - 1) / gamma_half(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    #[test]
    fn gamma_half_values() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_half(2) - 1.0).abs() < 1e-14);
        assert!((gamma_half(3) - PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((gamma_half(4) - 1.0).abs() < 1e-14);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert!((gamma_half(8) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn gegenbauer_is_one_at_one() {
        for m in 0..6 {
            assert_eq!(gegenbauer(m, &q(1, 2), &q(1, 1)), q(1, 1));
        }
    }

    #[test]
    fn gegenbauer_legendre_case() {
        // λ = 1/2 gives Legendre: P_2(t) = (3t^2 - 1)/2
        let t = q(1, 3);
        let expected: Q = (q(3, 1) * &t * &t - q(1, 1)) / q(2, 1);
        assert_eq!(gegenbauer(2, &q(1, 2), &t), expected);
    }
}
