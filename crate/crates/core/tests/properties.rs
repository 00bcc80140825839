use proptest::prelude::*;

use rarita_core::clifford::{Blade, Multivector};
use rarita_core::monogenic::{almansi_fischer_split, harmonic_spanning_set, is_monogenic};
use rarita_core::poly::{MPoly, Monomial, Side, Space};
use rarita_core::scalar::{qi, Q};

const N: usize = 4;

fn multivector() -> impl Strategy<Value = Multivector<Q>> {
    prop::collection::vec((0u16..(1 << N), -4i64..=4), 1..5)
        .prop_map(|terms| Multivector::from_terms(N, terms.into_iter().map(|(b, c)| (Blade(b), qi(c)))))
}

fn poly(space: Space) -> impl Strategy<Value = MPoly<Q>> {
    prop::collection::vec((prop::collection::vec(0u8..3, N), multivector()), 1..4).prop_map(move |terms| {
        terms.into_iter().fold(MPoly::zero(N), |acc, (exps, mv)| {
            &acc + &MPoly::monomial(Monomial::from_exponents(space, &exps), &mv)
        })
    })
}

fn r2(space: Space) -> MPoly<Q> {
    (0..N).fold(MPoly::zero(N), |acc, i| {
        let v = MPoly::var(N, space, i);
        &acc + &(&v * &v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in multivector(), b in multivector(), c in multivector()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn involutions_reverse_products(a in multivector(), b in multivector()) {
        prop_assert_eq!((&a * &b).reversion(), &b.reversion() * &a.reversion());
        prop_assert_eq!((&a * &b).conjugation(), &b.conjugation() * &a.conjugation());
    }

    #[test]
    fn dirac_squares_to_minus_laplacian(p in poly(Space::X)) {
        let d2 = p.dirac(Space::X, Side::Left).dirac(Space::X, Side::Left);
        prop_assert_eq!(&d2 + &p.laplacian(Space::X), MPoly::zero(N));
    }

    #[test]
    fn partials_commute(p in poly(Space::U), i in 0..N, j in 0..N) {
        let a = p.partial(Space::U, i).unwrap().partial(Space::U, j).unwrap();
        let b = p.partial(Space::U, j).unwrap().partial(Space::U, i).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn division_by_norm_round_trips(p in poly(Space::U)) {
        let lifted = &p * &r2(Space::U);
        prop_assert_eq!(lifted.exact_divide_by_r2(Space::U, None).unwrap(), p);
    }

    #[test]
    fn pairing_is_bilinear(a in poly(Space::V), b in poly(Space::V), c in poly(Space::V), s in -3i64..=3) {
        let lhs = MPoly::pairing(&(&a + &b.scale(&qi(s))), &c, Space::V, true).unwrap();
        let rhs = &MPoly::pairing(&a, &c, Space::V, true).unwrap()
            + &MPoly::pairing(&b, &c, Space::V, true).unwrap().scale(&qi(s));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_reconstructs(k in 1u32..3, idx in 0usize..64, a in multivector()) {
        let hs = harmonic_spanning_set::<Q>(3, k, Space::U).unwrap();
        let a = Multivector::from_terms(3, a.terms().filter(|(b, _)| b.fits(3)).map(|(b, c)| (b, c.clone())));
        let h = hs[idx % hs.len()].right_mul_mv(&a);
        let s = almansi_fischer_split(&h, k).unwrap();
        let u = MPoly::<Q>::vector_var(3, Space::U);
        prop_assert_eq!(&s.p_k + &(&u * &s.p_km1), h);
        prop_assert!(is_monogenic(&s.p_k, Space::U, Side::Left));
        prop_assert!(is_monogenic(&s.p_km1, Space::U, Side::Left));
    }
}
