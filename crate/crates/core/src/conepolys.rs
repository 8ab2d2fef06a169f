//! The polynomials attached to a cone `(m, alpha)`: the cubic `Q` behind the
//! explicit sub-calibration, the quartic `P` behind the lower solution of the
//! foliation ODE, its depressed form and resolvent cubic, and the degree-8
//! certificate polynomial `p_m` whose positive root is the critical exponent.
//!
//! Everything is built exactly over the rationals from `(m, alpha)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ratpoly::{big, int, Poly, Rational, Sign};

/// Dimension `m >= 2` and weight exponent `alpha > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeParams {
    m: u64,
    alpha: Rational,
}

impl ConeParams {
    pub fn new(m: u64, alpha: Rational) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("m = {m} must be at least 2")));
        }
        if !alpha.is_positive() {
            return Err(Error::InvalidParams(format!(
                "alpha = {alpha} must be positive"
            )));
        }
        Ok(ConeParams { m, alpha })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    fn m_rat(&self) -> Rational {
        big(self.m)
    }

    /// `m + alpha`
    pub fn total(&self) -> Rational {
        self.m_rat() + &self.alpha
    }

    /// Right end `1 - 1/(m + alpha)` of the admissible range for gamma.
    pub fn gamma_limit(&self) -> Rational {
        int(1) - self.total().recip()
    }

    /// `alpha > 2/m`, the standing assumption of the quartic analysis.
    pub fn above_two_over_m(&self) -> bool {
        &self.alpha * self.m_rat() > int(2)
    }
}

/// Value of the integer polynomial `coeffs` (ascending) at `m`.
fn in_m(coeffs: &[i64], m: u64) -> BigInt {
    let m = BigInt::from(m);
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| acc * &m + BigInt::from(c))
}

/// `Q(t) = (m-1)^4 t^3 - 3(m-1)^2 alpha t^2 - 3(m-1) alpha^2 t + alpha^4`.
pub fn build_q(params: &ConeParams) -> Poly {
    let k = big(params.m - 1);
    let a = params.alpha();
    Poly::new(vec![
        a * a * a * a,
        -int(3) * &k * a * a,
        -int(3) * &k * &k * a,
        &k * &k * &k * &k,
    ])
}

/// `q_m(alpha) = (m-1)^2 alpha^2 - (6m-2) alpha + 1 - 4m`; minus the
/// discriminant of `Q` has its sign.
pub fn build_qm(m: u64) -> Poly {
    let m = m as i64;
    Poly::from_ints(&[1 - 4 * m, -(6 * m - 2), (m - 1) * (m - 1)])
}

/// Discriminant of `Q` in factored form
/// `-27 (m-1)^6 alpha^6 q_m(alpha)`.
pub fn q_discriminant(params: &ConeParams) -> Rational {
    let k = big(params.m - 1);
    let a = params.alpha();
    let k6 = num_traits::pow(k, 6);
    let a6 = num_traits::pow(a.clone(), 6);
    -int(27) * k6 * a6 * build_qm(params.m).eval(a)
}

/// True iff `alpha >= (2 m^{3/2} + 3m - 1)/(m-1)^2`, decided exactly through
/// the sign of `q_m(alpha)` (its only positive root is that bound).
pub fn subcal_bound_test(params: &ConeParams) -> bool {
    build_qm(params.m).sign_at(params.alpha()) != Sign::Neg
}

/// The quartic `P(gamma) = a4 g^4 + a3 g^3 + a2 g^2 + a1 g + a0`.
pub fn build_p(params: &ConeParams) -> Poly {
    let m = params.m_rat();
    let a = params.alpha();
    let s = params.total();
    let one = int(1);
    let a4 = &s * &s * &s;
    let a3 = -(&s * &s * (&s + &one));
    let a2 = &s * (int(2) * &m + int(6) * a - int(4) * &m * a - &one);
    let a1 = int(4) * &m * &m * a + int(4) * a * a * &m - int(4) * a * a - int(5) * a - &m + &one;
    let a0 = -int(8) * (&m - &one) * a;
    Poly::new(vec![a0, a1, a2, a3, a4])
}

/// Coefficients of the monic depressed quartic `u^4 + p u^2 + q u + r`
/// obtained from `P` through `gamma = u + (m + alpha + 1)/(4(m + alpha))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepressedQuartic {
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
}

/// Shift of `gamma` that removes the cubic term of `P`.
pub fn depression_shift(params: &ConeParams) -> Rational {
    let s = params.total();
    (&s + int(1)) / (int(4) * s)
}

pub fn depressed_quartic(params: &ConeParams) -> DepressedQuartic {
    let p = build_p(params);
    let lead = p.leading().expect("quartic").clone();
    let shifted = p
        .taylor_shift(&depression_shift(params))
        .scale(&lead.recip());
    debug_assert!(shifted.coeff(3).is_zero());
    DepressedQuartic {
        p: shifted.coeff(2),
        q: shifted.coeff(1),
        r: shifted.coeff(0),
    }
}

/// `zeta^3 + 2p zeta^2 + (p^2 - 4r) zeta - q^2`
pub fn resolvent_cubic(d: &DepressedQuartic) -> Poly {
    Poly::new(vec![
        -(&d.q * &d.q),
        &d.p * &d.p - int(4) * &d.r,
        int(2) * &d.p,
        int(1),
    ])
}

/// Discriminant of the resolvent cubic,
/// `4p^2 C^2 - 4C^3 - 36 p C q^2 + 32 p^3 q^2 - 27 q^4` with `C = p^2 - 4r`.
pub fn theta(params: &ConeParams) -> Rational {
    let DepressedQuartic { p, q, r } = depressed_quartic(params);
    let c = &p * &p - int(4) * &r;
    let q2 = &q * &q;
    int(4) * &p * &p * &c * &c - int(4) * &c * &c * &c - int(36) * &p * &c * &q2
        + int(32) * &p * &p * &p * &q2
        - int(27) * &q2 * &q2
}

/// The certificate polynomial `p_m(alpha)`, degree 8 with integer
/// coefficients in `m`.
pub fn build_pm(m: u64) -> Poly {
    let k = BigInt::from(m) - 1;
    let c8 = 16 * &k * &k;
    let c7 = -4 * &k * in_m(&[3, 0, 8], m);
    let c6 = -in_m(&[153, -496, 584, -256, 16], m);
    let c5 = 2 * in_m(&[-852, 2545, -2738, 1238, -224, 32], m);
    let c4 = -&k * in_m(&[-641, -4321, 6672, -1712, 48, 16], m);
    let c3 = -2 * in_m(&[-123, 1566, -588, -3214, 2302, 250, -208, 16], m);
    let c2 = in_m(&[-52, 794, -3870, 4184, 1001, -2864, 984, -192, 16], m);
    let c1 = -2 * &k * in_m(&[2, -60, 185, -381, 363, -148, 22], m);
    let two_less: BigInt = BigInt::from(m) - 2;
    let c0: BigInt = -(&two_less * &two_less * &two_less) * &k * &k * BigInt::from(m);
    Poly::from_bigints(vec![c0, c1, c2, c3, c4, c5, c6, c7, c8])
}

/// Checks `(m + alpha)^12 theta = 16 alpha (m - 1) p_m(alpha)` exactly.
pub fn theta_pm_identity_check(params: &ConeParams) -> bool {
    let lhs = num_traits::pow(params.total(), 12) * theta(params);
    let rhs =
        int(16) * params.alpha() * big(params.m - 1) * build_pm(params.m).eval(params.alpha());
    lhs == rhs
}
