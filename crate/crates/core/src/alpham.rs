//! The critical exponent `alpha_m`: the unique positive root of `p_m`.
//!
//! Also the exact checks built around it: the Sturm sign table that proves
//! uniqueness, the bracket `2/m < alpha_m < 12/m`, the gamma window of the
//! quartic `P`, the Lawson-cone classifier and the stability floor
//! `m + alpha_m >= 4 + sqrt(8)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::conepolys::{build_p, build_pm, theta, ConeParams};
use crate::error::{Error, Result};
use crate::ratpoly::{
    big, int, isolate_roots, rat, refine_root, refine_to_width, round_half_even, Interval, Point,
    Poly, Rational, Sign, SturmChain,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    pub m: u64,
    /// Rational bracket with `p_m(lo) < 0 < p_m(hi)`.
    pub isolator: Interval,
    /// `alpha_m` rounded half-even to `digits` decimals.
    pub decimal: String,
    pub digits: u32,
}

fn check_m(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("m = {m} must be at least 2")));
    }
    Ok(())
}

/// Left end of the positive search range for `p_m`: zero unless `p_m(0) = 0`
/// (only `m = 2`), where it is a rational `eps` obtained by halving from one
/// until `p_m` keeps a constant nonzero sign on `(0, eps]`.
fn positive_floor(pm: &Poly) -> Rational {
    let zero = Rational::zero();
    if !pm.eval(&zero).is_zero() {
        return zero;
    }
    let (deflated, _) = pm.deflate(&zero);
    let chain = SturmChain::new(&deflated);
    let mut eps = Rational::one();
    loop {
        if !pm.eval(&eps).is_zero() {
            let n = chain
                .count_roots(&Point::Finite(zero.clone()), &Point::Finite(eps.clone()))
                .expect("deflated polynomial is nonzero at 0 and eps");
            if n == 0 {
                return eps;
            }
        }
        eps /= int(2);
    }
}

/// Number of distinct roots of `p_m` in `(0, +inf)`, by Sturm's theorem.
pub fn positive_root_count(m: u64) -> Result<usize> {
    check_m(m)?;
    let pm = build_pm(m);
    let floor = positive_floor(&pm);
    SturmChain::new(&pm).count_roots(&Point::Finite(floor), &Point::PosInf)
}

/// True iff `p_m(2/m) < 0 < p_m(12/m)`, evaluated exactly.
pub fn verify_bracket(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let pm = build_pm(m);
    let mr = big(m);
    pm.sign_at(&(int(2) / &mr)) == Sign::Neg && pm.sign_at(&(int(12) / &mr)) == Sign::Pos
}

/// Rational bracket around `alpha_m` with `p_m(lo) < 0 < p_m(hi)`.
pub fn alpha_isolator(m: u64) -> Result<Interval> {
    let count = positive_root_count(m)?;
    if count != 1 {
        return Err(Error::RootCountNotOne { m, count });
    }
    let pm = build_pm(m);
    if verify_bracket(m) {
        let mr = big(m);
        return Interval::new(int(2) / &mr, int(12) / &mr);
    }
    let floor = positive_floor(&pm);
    let ivs = isolate_roots(&pm, &Interval::new(floor, pm.cauchy_bound())?);
    match ivs.as_slice() {
        [iv] => Ok(iv.clone()),
        _ => Err(Error::RootCountNotOne {
            m,
            count: ivs.len(),
        }),
    }
}

/// `alpha_m` to `digits` decimals. The isolator is refined to width below
/// `10^-(digits + 2)` and its midpoint rounded half-even.
pub fn compute_alpha_m(m: u64, digits: u32) -> Result<AlphaResult> {
    if digits == 0 {
        return Err(Error::InvalidParams("digits must be at least 1".into()));
    }
    let pm = build_pm(m);
    let iv = refine_root(&pm, &alpha_isolator(m)?, digits + 2)?;
    let decimal = round_half_even(&iv.midpoint(), digits);
    Ok(AlphaResult {
        m,
        isolator: iv,
        decimal,
        digits,
    })
}

/// Signs of the canonical Sturm chain of `p_m` at `alpha = 0` and as
/// `alpha -> inf`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SturmSignTable {
    pub m: u64,
    pub at_zero: Vec<Sign>,
    pub at_infinity: Vec<Sign>,
    pub changes_at_zero: usize,
    pub changes_at_infinity: usize,
}

pub fn sturm_sign_table(m: u64) -> Result<SturmSignTable> {
    check_m(m)?;
    let chain = SturmChain::new(&build_pm(m));
    if chain.len() != 9 {
        return Err(Error::ChainTooShort {
            m,
            len: chain.len(),
        });
    }
    let zero = Point::Finite(Rational::zero());
    Ok(SturmSignTable {
        m,
        at_zero: chain.signs_at(&zero),
        at_infinity: chain.signs_at(&Point::PosInf),
        changes_at_zero: chain.sign_changes_at(&zero),
        changes_at_infinity: chain.sign_changes_at(&Point::PosInf),
    })
}

/// Where the quartic `P` is nonnegative inside `(0, 1 - 1/(m + alpha))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaWindow {
    /// Rational bracket strictly between the two roots of `P` (so `P > 0` on
    /// all of it), or the double root itself when they coincide.
    pub window: Interval,
    /// Maximizer of `P` inside the window; `P(gamma_star) >= 0`.
    pub gamma_star: Rational,
}

/// The gamma window of `P`: `None` when the resolvent discriminant is
/// negative and `P < 0` throughout the range.
pub fn gamma_window(params: &ConeParams) -> Result<Option<GammaWindow>> {
    if !params.above_two_over_m() {
        return Err(Error::InvalidParams(format!(
            "alpha = {} must exceed 2/m = 2/{}",
            params.alpha(),
            params.m()
        )));
    }
    let th = theta(params);
    if th.is_negative() {
        return Ok(None);
    }
    let p = build_p(params);
    let range = Interval::new(Rational::zero(), params.gamma_limit())?;

    if th.is_zero() {
        // Double root: a common rational root of P and P'.
        let g = p.gcd(&p.derivative());
        if g.degree() != Some(1) {
            return Ok(None);
        }
        let root = -g.coeff(0) / g.coeff(1);
        if !(range.lo() < &root && &root < range.hi()) {
            return Ok(None);
        }
        return Ok(Some(GammaWindow {
            window: Interval::point(root.clone()),
            gamma_star: root,
        }));
    }

    let roots = isolate_roots(&p, &range);
    let [first, second] = roots.as_slice() else {
        return Ok(None);
    };
    let (mut first, mut second) = (first.clone(), second.clone());
    // Shrink both isolators until they are a fair distance apart.
    while first.hi() >= second.lo() || first.width() * int(8) > second.lo() - first.hi() {
        first = refine_to_width(&p, &first, &(first.width() / int(4)))?;
        second = refine_to_width(&p, &second, &(second.width() / int(4)))?;
    }
    let window = Interval::new(first.hi().clone(), second.lo().clone())?;

    let dp = p.derivative();
    let gamma_star = match isolate_roots(&dp, &window).as_slice() {
        [crit] => {
            let crit = refine_to_width(&dp, crit, &(window.width() * rat(1, 1 << 20)))?;
            crit.midpoint()
        }
        _ => window.midpoint(),
    };
    debug_assert!(!p.eval(&gamma_star).is_negative());
    Ok(Some(GammaWindow { window, gamma_star }))
}

/// Lawson cone `C_{k,h}` corresponds to `(m, alpha) = (k, h - 1)`; true iff
/// `h - 1 >= alpha_k`, decided as `p_k(h - 1) >= 0`.
pub fn lawson_check(k: u64, h: u64) -> Result<bool> {
    if k < 2 || h < 2 {
        return Err(Error::InvalidParams(format!(
            "Lawson indices (k, h) = ({k}, {h}) must both be at least 2"
        )));
    }
    Ok(build_pm(k).sign_at(&big(h - 1)) != Sign::Neg)
}

/// Outcome of [`stability_floor_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityFloor {
    pub m: u64,
    /// `m + alpha_m >= 4 + sqrt(8)`, certified from the isolator's lower end.
    pub floor_ok: bool,
    /// For `m = 4` only: `alpha_4 - sqrt(8) < 1/1000`, certified from the
    /// isolator's upper end.
    pub near_floor_ok: Option<bool>,
}

impl StabilityFloor {
    pub fn passed(&self) -> bool {
        self.floor_ok && self.near_floor_ok.unwrap_or(true)
    }
}

/// Compares `m + alpha_m` with `4 + sqrt(8)` by exact squaring of rational
/// isolator endpoints.
pub fn stability_floor(m: u64, digits: u32) -> Result<StabilityFloor> {
    let res = compute_alpha_m(m, digits)?;
    let shifted = big(m) + res.isolator.lo() - int(4);
    let floor_ok = !shifted.is_negative() && &shifted * &shifted >= int(8);
    let near_floor_ok = (m == 4).then(|| {
        let d = res.isolator.hi() - rat(1, 1000);
        d.is_negative() || &d * &d < int(8)
    });
    Ok(StabilityFloor {
        m,
        floor_ok,
        near_floor_ok,
    })
}

pub fn stability_floor_check(m: u64, digits: u32) -> Result<bool> {
    Ok(stability_floor(m, digits)?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::parse_rational;

    #[test]
    fn root_counts() {
        assert_eq!(positive_root_count(2).unwrap(), 1);
        assert_eq!(positive_root_count(29).unwrap(), 1);
        assert_eq!(positive_root_count(100).unwrap(), 1);
        assert!(positive_root_count(1).is_err());
    }

    #[test]
    fn m2_floor_is_positive() {
        let pm = build_pm(2);
        let eps = positive_floor(&pm);
        assert!(eps.is_positive());
        assert_ne!(pm.sign_at(&eps), Sign::Zero);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(compute_alpha_m(2, 9).unwrap().decimal, "5.881525129");
        assert_eq!(compute_alpha_m(7, 9).unwrap().decimal, "0.963594772");
        let r = compute_alpha_m(3, 4).unwrap();
        let pm = build_pm(3);
        assert_eq!(pm.sign_at(r.isolator.lo()), Sign::Neg);
        assert_eq!(pm.sign_at(r.isolator.hi()), Sign::Pos);
        assert!(r.isolator.width() < rat(1, 10_000));
        assert!(compute_alpha_m(2, 0).is_err());
    }

    #[test]
    fn brackets() {
        assert!(verify_bracket(2));
        assert!(verify_bracket(13));
        assert!(verify_bracket(200));
        assert!(!verify_bracket(1));
    }

    #[test]
    fn sign_table_entries() {
        let t2 = sturm_sign_table(2).unwrap();
        assert_eq!(t2.at_zero[0], Sign::Zero);
        assert_eq!((t2.changes_at_zero, t2.changes_at_infinity), (3, 2));
        assert_eq!(sturm_sign_table(7).unwrap().at_zero[7], Sign::Neg);
        assert_eq!(sturm_sign_table(23).unwrap().at_infinity[6], Sign::Neg);
    }

    #[test]
    fn gamma_window_examples() {
        let w = gamma_window(&ConeParams::new(2, int(6)).unwrap())
            .unwrap()
            .expect("window at alpha = 6");
        let p = build_p(&ConeParams::new(2, int(6)).unwrap());
        assert!(p.eval(&w.gamma_star).is_positive());
        assert!(p.eval(w.window.lo()).is_positive());
        assert!(p.eval(w.window.hi()).is_positive());
        assert!(w.window.contains(&w.gamma_star));
        // gamma_star is a critical point of P to high accuracy
        let dp = p.derivative().eval(&w.gamma_star);
        assert!(dp.abs() < rat(1, 1000));

        assert!(gamma_window(&ConeParams::new(2, int(5)).unwrap())
            .unwrap()
            .is_none());
        assert!(gamma_window(&ConeParams::new(2, rat(1, 2)).unwrap()).is_err());
    }

    #[test]
    fn gamma_window_just_above_alpha_m() {
        for m in [2, 4, 9] {
            let iso = compute_alpha_m(m, 12).unwrap().isolator;
            let alpha = iso.hi() + rat(1, 1_000_000_000_000);
            let w = gamma_window(&ConeParams::new(m, alpha).unwrap()).unwrap();
            assert!(w.is_some(), "m = {m}");
        }
    }

    #[test]
    fn lawson_examples() {
        assert!(lawson_check(3, 5).unwrap());
        assert!(!lawson_check(2, 6).unwrap());
        assert!(!lawson_check(6, 2).unwrap());
        assert!(lawson_check(1, 9).is_err());
    }

    #[test]
    fn stability_examples() {
        assert!(stability_floor_check(2, 9).unwrap());
        let s4 = stability_floor(4, 9).unwrap();
        assert_eq!(s4.near_floor_ok, Some(true));
        assert!(s4.passed());
        assert!(stability_floor_check(13, 9).unwrap());
    }

    #[test]
    fn alpha_2017() {
        let r = compute_alpha_m(2017, 9).unwrap();
        assert_eq!(r.decimal, "0.001377480");
        let near = parse_rational("0.0013774800").unwrap();
        assert!((r.isolator.midpoint() - near).abs() < rat(1, 2_000_000_000));
    }
}
