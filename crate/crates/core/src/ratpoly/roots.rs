use num_traits::{Signed, Zero};

use super::poly::Poly;
use super::rational::{big, int, pow10, rat, Interval, Rational, Sign};
use super::sturm::{Point, SturmChain};
use crate::error::{Error, Result};

/// A point strictly inside `(lo, hi)` where `p` does not vanish. Tries the
/// midpoint first, then the fractions 1/3, 2/3, 1/4, 3/4, ...; `p` has
/// finitely many roots so this terminates.
fn split_point(p: &Poly, lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    let mid = lo + &w / int(2);
    if !p.eval(&mid).is_zero() {
        return mid;
    }
    for den in 3i64.. {
        for num in 1..den {
            let x = lo + &w * rat(num, den);
            if !p.eval(&x).is_zero() {
                return x;
            }
        }
    }
    unreachable!()
}

/// Disjoint rational brackets, one per distinct real root of `p` inside the
/// open interval `(iv.lo, iv.hi)`, sorted left to right. Returned brackets
/// have endpoints that are not roots of `p`; at a simple root the signs of
/// `p` at the two ends differ.
pub fn isolate_roots(p: &Poly, iv: &Interval) -> Vec<Interval> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    let (q, _) = p.squarefree().deflate(iv.lo());
    let (q, _) = q.deflate(iv.hi());
    if q.degree().unwrap_or(0) == 0 || iv.lo() == iv.hi() {
        return Vec::new();
    }
    let chain = SturmChain::new(&q);
    let count = |a: &Rational, b: &Rational| {
        chain
            .count_roots(&Point::from(a), &Point::from(b))
            .expect("isolation endpoints are never roots")
    };

    let mut out = Vec::new();
    let mut stack = vec![(iv.lo().clone(), iv.hi().clone(), count(iv.lo(), iv.hi()))];
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 if p.eval(&lo).is_zero() || p.eval(&hi).is_zero() => {
                // An endpoint of the caller's interval is itself a root of
                // `p`; split until the interior root is clear of it.
                let mid = split_point(&q, &lo, &hi);
                let left = count(&lo, &mid);
                stack.push((mid.clone(), hi, 1 - left));
                stack.push((lo, mid, left));
            }
            1 => out.push(Interval::new(lo, hi).expect("ordered")),
            _ => {
                let mid = split_point(&q, &lo, &hi);
                let left = count(&lo, &mid);
                stack.push((mid.clone(), hi, n - left));
                stack.push((lo, mid, left));
            }
        }
    }
    out.sort_by(|a, b| a.lo().cmp(b.lo()));
    out
}

/// Isolates the real roots of `p` over the whole line (Cauchy bound bracket).
pub fn isolate_all_roots(p: &Poly) -> Vec<Interval> {
    let b = p.cauchy_bound();
    isolate_roots(p, &Interval::new(-b.clone(), b).expect("ordered"))
}

/// Bisects a sign-changing bracket down to width `< 10^-digits`. The
/// returned bracket keeps strictly opposite signs of `p` at its ends.
pub fn refine_root(p: &Poly, iv: &Interval, digits: u32) -> Result<Interval> {
    let target = Rational::new(1.into(), pow10(digits));
    refine_to_width(p, iv, &target)
}

pub fn refine_to_width(p: &Poly, iv: &Interval, width: &Rational) -> Result<Interval> {
    let (mut lo, mut hi) = iv.clone().into_parts();
    let s_lo = p.sign_at(&lo);
    let s_hi = p.sign_at(&hi);
    if s_lo == Sign::Zero || s_hi == Sign::Zero || s_lo == s_hi {
        return Err(Error::NoSignChange {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    while &hi - &lo >= *width {
        let mid = (&lo + &hi) / int(2);
        let s = p.sign_at(&mid);
        if s == Sign::Zero {
            // Exact rational root: close in around it.
            let delta = (&hi - &lo).min(width.clone()) / int(4);
            return Ok(Interval::new(&mid - &delta, &mid + &delta).expect("ordered"));
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Interval::new(lo, hi).expect("ordered"))
}

/// Refines until the bracket width is below `rel` times the larger endpoint
/// magnitude (or `rel` itself near zero).
pub fn refine_relative(p: &Poly, iv: &Interval, rel: &Rational) -> Result<Interval> {
    let scale = iv.lo().abs().max(iv.hi().abs()).max(big(1));
    refine_to_width(p, iv, &(rel * scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rational::to_f64;

    #[test]
    fn isolates_sqrt2() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        let ivs = isolate_roots(&p, &Interval::new(int(0), int(10)).unwrap());
        assert_eq!(ivs.len(), 1);
        let x = 2f64.sqrt();
        assert!(to_f64(ivs[0].lo()) < x && x < to_f64(ivs[0].hi()));
    }

    #[test]
    fn isolation_with_root_endpoints_and_split_roots() {
        // x (x - 1/2) (x - 1): roots at both endpoints and at the midpoint
        let p = &(&Poly::from_ints(&[0, 1]) * &Poly::new(vec![rat(-1, 2), int(1)]))
            * &Poly::from_ints(&[-1, 1]);
        let ivs = isolate_roots(&p, &Interval::new(int(0), int(1)).unwrap());
        assert_eq!(ivs.len(), 1);
        assert!(ivs[0].contains(&rat(1, 2)));
        assert_ne!(ivs[0].lo(), &rat(1, 2));
        let all = isolate_all_roots(&p);
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn refine_examples() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        let iv = refine_root(&p, &Interval::new(int(1), int(2)).unwrap(), 9).unwrap();
        assert!(iv.width() < rat(1, 1_000_000_000));
        assert_eq!(
            crate::ratpoly::rational::round_half_even(&iv.midpoint(), 9),
            "1.414213562"
        );
        let tight = Interval::new(rat(14142, 10000), rat(14143, 10000)).unwrap();
        assert_eq!(refine_root(&p, &tight, 3).unwrap(), tight);
    }

    #[test]
    fn refine_hits_exact_root() {
        let p = Poly::from_ints(&[-1, 2]);
        let iv = refine_root(&p, &Interval::new(int(0), int(1)).unwrap(), 6).unwrap();
        assert!(iv.contains(&rat(1, 2)));
        assert_eq!(p.sign_at(iv.lo()), Sign::Neg);
        assert_eq!(p.sign_at(iv.hi()), Sign::Pos);
    }

    #[test]
    fn refine_requires_sign_change() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        let err = refine_root(&p, &Interval::new(int(2), int(3)).unwrap(), 5);
        assert!(matches!(err, Err(Error::NoSignChange { .. })));
    }
}
