//! Exact rational scalars and univariate polynomials, with Sturm-chain root
//! counting, Descartes sign counting and bisection-based root isolation.
//!
//! Nothing in here rounds. Brackets returned by [`isolate_roots`] and
//! [`refine_root`] are certified by exact sign evaluations.

mod poly;
mod rational;
mod roots;
mod sturm;

pub use poly::Poly;
pub use rational::{
    big, fraction_string, from_f64, int, parse_rational, pow10, rat, round_half_even, to_f64,
    Interval, Rational, Sign,
};
pub use roots::{isolate_all_roots, isolate_roots, refine_relative, refine_root, refine_to_width};
pub use sturm::{Point, SturmChain};
