use num_traits::Zero;

use super::poly::{count_sign_changes, Poly};
use super::rational::{Rational, Sign};
use crate::error::{Error, Result};

/// Evaluation point for sign counting, including the two infinities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl From<Rational> for Point {
    fn from(x: Rational) -> Self {
        Point::Finite(x)
    }
}

impl From<&Rational> for Point {
    fn from(x: &Rational) -> Self {
        Point::Finite(x.clone())
    }
}

/// Canonical Sturm chain `p, p', -rem(p, p'), ...`.
///
/// Remainders are exact rational remainders; each element is then rescaled
/// by a positive rational to coprime integer coefficients, which leaves
/// every sign unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    /// Panics on the zero polynomial.
    pub fn new(p: &Poly) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let mut chain = vec![p.primitive()];
        let d = p.derivative();
        if d.is_zero() {
            return SturmChain { chain };
        }
        chain.push(d.primitive());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push((-&r).primitive());
        }
        SturmChain { chain }
    }

    pub fn polys(&self) -> &[Poly] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Signs of every chain element at `pt`; at the infinities these come
    /// from the leading coefficients (and degree parity at `-inf`).
    pub fn signs_at(&self, pt: &Point) -> Vec<Sign> {
        self.chain
            .iter()
            .map(|q| match pt {
                Point::Finite(x) => q.sign_at(x),
                Point::PosInf => q.leading().map_or(Sign::Zero, Sign::of),
                Point::NegInf => {
                    let s = q.leading().map_or(Sign::Zero, Sign::of);
                    if q.degree().unwrap_or(0) % 2 == 1 {
                        s.flip()
                    } else {
                        s
                    }
                }
            })
            .collect()
    }

    pub fn sign_changes_at(&self, pt: &Point) -> usize {
        count_sign_changes(self.signs_at(pt))
    }

    /// Distinct real roots of `chain[0]` in the open interval `(lo, hi)`.
    /// Finite endpoints must not be roots.
    pub fn count_roots(&self, lo: &Point, hi: &Point) -> Result<usize> {
        for pt in [lo, hi] {
            if let Point::Finite(x) = pt {
                if self.chain[0].eval(x).is_zero() {
                    return Err(Error::EndpointIsRoot(x.to_string()));
                }
            }
        }
        let a = self.sign_changes_at(lo);
        let b = self.sign_changes_at(hi);
        Ok(a.saturating_sub(b))
    }
}
