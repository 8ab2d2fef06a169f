use std::collections::BTreeSet;

use hypercone::ratpoly::*;
use num_traits::Zero;
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(-9i64..=9, 1..=9)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| Poly::from_ints(&c))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

/// `prod (x - r_i)^{e_i} * (x^2 + c)`, c > 0, with its distinct real roots.
fn planted() -> impl Strategy<Value = (Poly, BTreeSet<Rational>)> {
    (
        proptest::collection::vec((small_rational(), 1usize..=3), 0..=4),
        1i64..=5,
    )
        .prop_map(|(roots, c)| {
            let mut p = Poly::from_ints(&[c, 0, 1]);
            let mut set = BTreeSet::new();
            for (r, e) in roots {
                for _ in 0..e {
                    p = &p * &Poly::linear_factor(&r);
                }
                set.insert(r);
            }
            (p, set)
        })
}

fn term_sum(p: &Poly, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut power = int(1);
    for c in p.coeffs() {
        acc += c * &power;
        power *= x;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn horner_equals_term_sum(p in small_poly(), x in small_rational()) {
        prop_assert_eq!(p.eval(&x), term_sum(&p, &x));
    }

    #[test]
    fn taylor_shift_round_trips(p in small_poly(), c in small_rational()) {
        prop_assert_eq!(p.taylor_shift(&c).taylor_shift(&-c.clone()), p.clone());
    }

    #[test]
    fn taylor_shift_is_composition(p in small_poly(), c in small_rational(), x in small_rational()) {
        prop_assert_eq!(p.taylor_shift(&c).eval(&x), p.eval(&(&x + &c)));
    }

    #[test]
    fn sturm_count_matches_isolation(p in small_poly()) {
        prop_assume!(p.degree().unwrap() >= 1);
        let all = isolate_all_roots(&p);
        let chain = SturmChain::new(&p);
        prop_assert_eq!(chain.count_roots(&Point::NegInf, &Point::PosInf).unwrap(), all.len());
        for pair in all.windows(2) {
            prop_assert!(pair[0].hi() <= pair[1].lo());
        }
    }

    #[test]
    fn planted_roots_are_found((p, roots) in planted()) {
        let found = isolate_all_roots(&p);
        prop_assert_eq!(found.len(), roots.len());
        for (iv, r) in found.iter().zip(&roots) {
            prop_assert!(iv.lo() <= r && r <= iv.hi());
        }
        let chain = SturmChain::new(&p.squarefree());
        prop_assert_eq!(chain.count_roots(&Point::NegInf, &Point::PosInf).unwrap(), roots.len());
    }

    #[test]
    fn descartes_bounds_positive_roots(p in small_poly()) {
        prop_assume!(p.degree().unwrap() >= 1);
        prop_assume!(!p.coeff(0).is_zero());
        // squarefree, so distinct positive roots are counted with multiplicity
        prop_assume!(p.squarefree().degree() == p.degree());
        let positive = SturmChain::new(&p)
            .count_roots(&Point::Finite(Rational::zero()), &Point::PosInf)
            .unwrap();
        let v = p.descartes_sign_changes();
        prop_assert!(v >= positive);
        prop_assert_eq!((v - positive) % 2, 0);
    }

    #[test]
    fn refinement_keeps_a_sign_change((p, _) in planted(), digits in 1u32..12) {
        for iv in isolate_all_roots(&p) {
            let sq = p.squarefree();
            let out = refine_root(&sq, &iv, digits).unwrap();
            let lo = sq.sign_at(out.lo());
            let hi = sq.sign_at(out.hi());
            prop_assert!(lo != Sign::Zero && hi != Sign::Zero && lo != hi);
            prop_assert!(out.width() < Rational::new(1.into(), pow10(digits)));
        }
    }

    #[test]
    fn half_even_rounding_matches_integer_arithmetic(n in -100_000i64..100_000, d in 1i64..1000) {
        // two digits: round n/d * 100 to the nearest integer, ties to even
        let x = rat(n, d);
        let s = round_half_even(&x, 2);
        let scaled = n * 100;
        let (q, r) = (scaled.div_euclid(d), scaled.rem_euclid(d));
        let rounded = if 2 * r > d || (2 * r == d && q % 2 != 0) { q + 1 } else { q };
        let want = format!(
            "{}{}.{:02}",
            if rounded < 0 { "-" } else { "" },
            rounded.abs() / 100,
            rounded.abs() % 100
        );
        prop_assert_eq!(s, want);
    }

    #[test]
    fn parse_round_trips_fractions(x in small_rational()) {
        prop_assert_eq!(parse_rational(&fraction_string(&x)).unwrap(), x);
    }
}

#[test]
fn endpoint_roots_are_rejected_by_counting() {
    let p = Poly::from_ints(&[-1, 0, 1]);
    let chain = SturmChain::new(&p);
    assert!(matches!(
        chain.count_roots(&Point::Finite(int(1)), &Point::PosInf),
        Err(hypercone::Error::EndpointIsRoot(_))
    ));
    // isolation on a closed range with root endpoints still finds the inside root
    let q = Poly::from_ints(&[0, -1, 0, 1]);
    let found = isolate_roots(&q, &Interval::new(int(-1), int(1)).unwrap());
    assert_eq!(found.len(), 1);
    assert!(found[0].contains(&int(0)));
}
