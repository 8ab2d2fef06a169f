//! Critical exponents of weighted minimizing hypercones.
//!
//! The cone `{0 <= y <= sqrt(alpha/(m-1)) |x|}` in `R^m x R_{>=0}` minimizes
//! the weighted perimeter with density `y^alpha` once `alpha` reaches an
//! algebraic threshold `alpha_m`. This crate computes `alpha_m` exactly (as
//! an isolated root of a degree-8 integer polynomial), checks every algebraic
//! claim behind it in rational arithmetic, and numerically certifies the two
//! geometric constructions: the explicit sub-calibration field and the
//! foliation by extremal curves between barrier solutions.
//!
//! Modules, bottom up:
//!
//! - [`ratpoly`]: rationals, polynomials, Sturm chains, root isolation.
//! - [`conepolys`]: the cone-specific polynomials and discriminants.
//! - [`alpham`]: `alpha_m`, root-count and bracket checks, Lawson cones.
//! - [`foliation`]: the first-order ODE, its barrier funnel and the level curves.
//! - [`calib`]: the explicit auxiliary function and its divergence.
//! - [`cli`]: subcommands and their CSV/JSON records.

// `!(x > 0.0)` guards reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpham;
pub mod calib;
pub mod cli;
pub mod conepolys;
pub mod error;
pub mod foliation;
pub mod ratpoly;

pub use error::{Error, Result};
