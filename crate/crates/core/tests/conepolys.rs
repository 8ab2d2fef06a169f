use hypercone::conepolys::*;
use hypercone::ratpoly::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn alpha() -> impl Strategy<Value = Rational> {
    (1i64..=4000, 1i64..=97).prop_map(|(n, d)| rat(n, d))
}

fn params(m: u64, a: &Rational) -> ConeParams {
    ConeParams::new(m, a.clone()).unwrap()
}

fn pow(x: &Rational, k: u32) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

/// Printed closed forms of the depressed quartic's coefficients.
fn printed_pqr(m: u64, a: &Rational) -> (Rational, Rational, Rational) {
    let m = big(m);
    let s = &m + a;
    let p = -(int(3) * &m * &m - int(10) * &m
        + int(11)
        + int(3) * a * a
        + int(2) * (int(19) * &m - int(21)) * a)
        / (int(8) * pow(&s, 2));
    let q = -(pow(a, 3) + a * a * (int(11) - int(13) * &m)
        - a * (&m - int(1)) * (int(13) * &m + int(23))
        + (&m - int(3)) * pow(&(&m - int(1)), 2))
        / (int(8) * pow(&s, 3));
    let r = -(int(3) * pow(a, 4) + int(172) * pow(a, 3) - int(1630) * pow(a, 2)
        + int(204) * a
        + int(3) * pow(&m, 4)
        - int(180) * a * pow(&m, 3)
        - int(20) * pow(&m, 3)
        - int(366) * a * a * &m * &m
        + int(1796) * a * &m * &m
        + int(34) * &m * &m
        - int(180) * pow(a, 3) * &m
        + int(1988) * a * a * &m
        - int(1788) * a * &m
        + int(12) * &m
        - int(45))
        / (int(256) * pow(&s, 4));
    (p, q, r)
}

/// Printed expansion of `16 (m + alpha)^4 (p^2 - 4r)`.
fn printed_p2_4r(m: u64, a: &Rational) -> Rational {
    let m = big(m);
    let k = &m - int(1);
    int(3) * pow(a, 4)
        + int(4) * (int(3) * &m - int(5)) * pow(a, 3)
        + (int(274) * &m * &m - int(316) * &m + int(50)) * a * a
        + int(4) * &k * (int(3) * &m * &m + int(52) * &m + int(45)) * a
        + &k * &k * (int(3) * &m * &m - int(14) * &m + int(19))
}

/// Discriminant of `a t^3 + b t^2 + c t + d` by the general formula.
fn cubic_disc(p: &Poly) -> Rational {
    let (d, c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2), p.coeff(3));
    int(18) * &a * &b * &c * &d - int(4) * pow(&b, 3) * &d + &b * &b * &c * &c
        - int(4) * &a * pow(&c, 3)
        - int(27) * &a * &a * &d * &d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn q_discriminant_is_the_cubic_discriminant(m in 2u64..40, a in alpha()) {
        let pr = params(m, &a);
        let disc = q_discriminant(&pr);
        prop_assert_eq!(&disc, &cubic_disc(&build_q(&pr)));
        prop_assert_eq!(Sign::of(&disc), build_qm(m).sign_at(&a).flip());
    }

    #[test]
    fn subcal_bound_test_matches_the_float_bound(m in 2u64..40, a in alpha()) {
        let mf = m as f64;
        let bound = (2.0 * mf.powf(1.5) + 3.0 * mf - 1.0) / ((mf - 1.0) * (mf - 1.0));
        let af = to_f64(&a);
        prop_assume!((af - bound).abs() > 1e-9 * bound);
        prop_assert_eq!(subcal_bound_test(&params(m, &a)), af >= bound);
    }

    #[test]
    fn quartic_sign_pattern_above_two_over_m(m in 2u64..40, a in alpha()) {
        let a = a + rat(2, m as i64);
        let pr = params(m, &a);
        let p = build_p(&pr);
        prop_assert!(p.coeff(4).is_positive());
        prop_assert!(p.coeff(3).is_negative());
        prop_assert!(p.coeff(1).is_positive());
        prop_assert!(p.coeff(0).is_negative());
        let sh = p.taylor_shift(&pr.gamma_limit());
        prop_assert!(sh.coeff(4).is_positive());
        prop_assert!(sh.coeff(3).is_positive());
        prop_assert!(sh.coeff(2).is_positive());
        prop_assert!(sh.coeff(0).is_negative());
    }

    #[test]
    fn depressed_quartic_matches_printed_forms(m in 2u64..40, a in alpha()) {
        let d = depressed_quartic(&params(m, &a));
        let (p, q, r) = printed_pqr(m, &a);
        prop_assert_eq!(&d.p, &p);
        prop_assert_eq!(&d.q, &q);
        prop_assert_eq!(&d.r, &r);
        let s = big(m) + &a;
        prop_assert_eq!(int(16) * pow(&s, 4) * (&d.p * &d.p - int(4) * &d.r), printed_p2_4r(m, &a));
    }

    #[test]
    fn resolvent_facts_above_two_over_m(m in 2u64..40, a in alpha()) {
        let a = a + rat(2, m as i64);
        let d = depressed_quartic(&params(m, &a));
        prop_assert!(d.p.is_negative());
        prop_assert!((&d.p * &d.p - int(4) * &d.r).is_positive());
        let res = resolvent_cubic(&d);
        prop_assert_eq!(res.reflect().descartes_sign_changes(), 0);
        // theta is the discriminant of the resolvent
        prop_assert_eq!(theta(&params(m, &a)), cubic_disc(&res));
    }

    #[test]
    fn theta_identity(m in 2u64..=30, a in alpha()) {
        prop_assert!(theta_pm_identity_check(&params(m, &a)));
    }

    #[test]
    fn p_endpoint_values(m in 2u64..40, a in alpha()) {
        let pr = params(m, &a);
        let p = build_p(&pr);
        let k = big(m - 1);
        prop_assert_eq!(p.eval(&Rational::zero()), -int(8) * &k * &a);
        prop_assert_eq!(p.eval(&pr.gamma_limit()), -int(8) * &k * &a / pr.total());
    }
}

#[test]
fn p_coefficients_at_2_6() {
    let p = build_p(&params(2, &int(6)));
    let want = [-48, 209, -72, -576, 512];
    for (i, w) in want.iter().enumerate() {
        assert_eq!(p.coeff(i), int(*w), "a_{i}");
    }
}

#[test]
fn depressed_p_at_2_2() {
    // 3*4 - 20 + 11 + 3*4 + 2*17*2 = 83
    assert_eq!(depressed_quartic(&params(2, &int(2))).p, rat(-83, 128));
}

#[test]
fn qm_has_one_positive_root() {
    for m in 2..=50u64 {
        let chain = SturmChain::new(&build_qm(m));
        let n = chain
            .count_roots(&Point::Finite(Rational::zero()), &Point::PosInf)
            .unwrap();
        assert_eq!(n, 1, "m = {m}");
    }
}

#[test]
fn theta_sign_brackets_alpha_2() {
    assert!(theta(&params(2, &int(6))).is_positive());
    assert!(theta(&params(2, &int(5))).is_negative());
}
