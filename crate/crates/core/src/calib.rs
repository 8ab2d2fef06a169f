//! The explicit sub-calibration `xi = -y^alpha grad F / |grad F|` for
//! `F = (alpha^2 |x|^4 - (m-1)^2 y^4) / 4`, checked in the rotationally
//! reduced half-plane `(r, y) = (|x|, y)`.
//!
//! The divergence in reduced coordinates is
//! `d_r xi_r + (m-1) xi_r / r + d_y xi_y`; in closed form it factors as
//! `-|grad F|^-3 (m-1) alpha y^alpha r^6 Q(y^2/r^2) (alpha r^2 - (m-1) y^2)`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};

/// Threshold for "at most zero" verdicts on the closed-form divergence.
pub const SIGN_TOL: f64 = 1e-10;
/// Largest accepted angle between `xi` and the cone normal on the cone.
pub const ALIGNMENT_TOL: f64 = 1e-6;
/// Largest accepted relative deviation of `|xi|` from `y^alpha`.
pub const NORM_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint {
    pub radial: f64,
    pub height: f64,
}

impl ReducedPoint {
    pub fn new(radial: f64, height: f64) -> Result<Self> {
        if !(radial > 0.0 && height > 0.0 && radial.is_finite() && height.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "reduced point ({radial}, {height}) must have positive coordinates"
            )));
        }
        Ok(ReducedPoint { radial, height })
    }

    pub fn angle(&self) -> f64 {
        self.height.atan2(self.radial)
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        ReducedPoint {
            radial: lambda * self.radial,
            height: lambda * self.height,
        }
    }
}

fn km1(m: u64) -> f64 {
    m as f64 - 1.0
}

pub fn f_explicit(m: u64, alpha: f64, pt: &ReducedPoint) -> f64 {
    let k = km1(m);
    0.25 * (alpha * alpha * pt.radial.powi(4) - k * k * pt.height.powi(4))
}

/// `(d_r F, d_y F) = (alpha^2 r^3, -(m-1)^2 y^3)`.
pub fn grad_f(m: u64, alpha: f64, pt: &ReducedPoint) -> (f64, f64) {
    let k = km1(m);
    (
        alpha * alpha * pt.radial.powi(3),
        -k * k * pt.height.powi(3),
    )
}

pub fn grad_norm(m: u64, alpha: f64, pt: &ReducedPoint) -> f64 {
    let (gr, gy) = grad_f(m, alpha, pt);
    gr.hypot(gy)
}

/// `xi_+ = -y^alpha grad F / |grad F|` in reduced components.
pub fn xi(m: u64, alpha: f64, pt: &ReducedPoint) -> (f64, f64) {
    let (gr, gy) = grad_f(m, alpha, pt);
    let s = -pt.height.powf(alpha) / gr.hypot(gy);
    (s * gr, s * gy)
}

/// `Q(s) = (m-1)^4 s^3 - 3(m-1)^2 alpha s^2 - 3(m-1) alpha^2 s + alpha^4`.
pub fn q_factor(m: u64, alpha: f64, s: f64) -> f64 {
    let k = km1(m);
    let a2 = alpha * alpha;
    ((k.powi(4) * s - 3.0 * k * k * alpha) * s - 3.0 * k * a2) * s + a2 * a2
}

/// Closed-form `div xi_+`.
pub fn div_xi_closed(m: u64, alpha: f64, pt: &ReducedPoint) -> f64 {
    let k = km1(m);
    let (r, y) = (pt.radial, pt.height);
    let n = grad_norm(m, alpha, pt);
    -(k * alpha * y.powf(alpha) * r.powi(6) / (n * n * n))
        * q_factor(m, alpha, (y * y) / (r * r))
        * (alpha * r * r - k * y * y)
}

/// Distance in the reduced plane from `pt` to the cone line
/// `sqrt(m-1) y = sqrt(alpha) r`.
pub fn cone_distance(m: u64, alpha: f64, pt: &ReducedPoint) -> f64 {
    let k = km1(m);
    (k.sqrt() * pt.height - alpha.sqrt() * pt.radial).abs() / (k + alpha).sqrt()
}

/// `div xi_+` by central differences of step `h`, independent of the
/// closed form. Needs `pt` farther than `2h` from the cone and both axes.
pub fn div_xi_numeric(m: u64, alpha: f64, pt: &ReducedPoint, h: f64) -> Result<f64> {
    let reach = 2.0 * h;
    if !(h > 0.0)
        || pt.radial <= reach
        || pt.height <= reach
        || cone_distance(m, alpha, pt) <= reach
    {
        return Err(Error::InvalidParams(format!(
            "point ({}, {}) lies within 2h = {reach} of the cone or an axis",
            pt.radial, pt.height
        )));
    }
    let at = |r: f64, y: f64| {
        xi(
            m,
            alpha,
            &ReducedPoint {
                radial: r,
                height: y,
            },
        )
    };
    let (r, y) = (pt.radial, pt.height);
    let d_r = (at(r + h, y).0 - at(r - h, y).0) / (2.0 * h);
    let d_y = (at(r, y + h).1 - at(r, y - h).1) / (2.0 * h);
    Ok(d_r + km1(m) * at(r, y).0 / r + d_y)
}

/// Rectangular grid in the reduced quadrant with an angular exclusion band
/// around the cone and both axes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub radial: (f64, f64),
    pub height: (f64, f64),
    pub n_radial: usize,
    pub n_height: usize,
    /// Half-width in angle of the excluded bands.
    pub band: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            radial: (0.1, 2.0),
            height: (0.1, 2.0),
            n_radial: 100,
            n_height: 100,
            band: 0.01,
        }
    }
}

impl GridSpec {
    pub fn new(
        radial: (f64, f64),
        height: (f64, f64),
        n_radial: usize,
        n_height: usize,
        band: f64,
    ) -> Result<Self> {
        let ok_range = |(lo, hi): (f64, f64)| lo > 0.0 && hi > lo && hi.is_finite();
        if !ok_range(radial) || !ok_range(height) {
            return Err(Error::InvalidParams(
                "grid ranges must satisfy 0 < lo < hi".into(),
            ));
        }
        if n_radial < 2 || n_height < 2 {
            return Err(Error::InvalidParams(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        if !(0.0..FRAC_PI_4_F).contains(&band) {
            return Err(Error::InvalidParams(format!(
                "band = {band} must lie in [0, pi/4)"
            )));
        }
        Ok(GridSpec {
            radial,
            height,
            n_radial,
            n_height,
            band,
        })
    }

    /// Cell-centred radial samples; the ranges are open.
    pub fn radial_samples(&self) -> Vec<f64> {
        centres(self.radial, self.n_radial)
    }

    pub fn height_samples(&self) -> Vec<f64> {
        centres(self.height, self.n_height)
    }

    /// All grid points, row by row in height.
    pub fn points(&self) -> Vec<ReducedPoint> {
        let rs = self.radial_samples();
        let mut out = Vec::with_capacity(self.n_radial * self.n_height);
        for height in self.height_samples() {
            out.extend(rs.iter().map(|&radial| ReducedPoint { radial, height }));
        }
        out
    }

    /// Whether `pt` falls in an excluded band for the cone angle `t_hat`.
    pub fn excluded(&self, t_hat: f64, pt: &ReducedPoint) -> bool {
        let a = pt.angle();
        (a - t_hat).abs() < self.band || a < self.band || a > FRAC_PI_2 - self.band
    }
}

const FRAC_PI_4_F: f64 = std::f64::consts::FRAC_PI_4;

fn centres((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
        .collect()
}

/// Cone angle in the reduced plane.
pub fn cone_angle(m: u64, alpha: f64) -> f64 {
    (alpha / km1(m)).sqrt().atan()
}

/// A grid value together with where it occurred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Located {
    pub value: f64,
    pub at: ReducedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcalibrationReport {
    /// Largest `div xi_+` below the cone; at most `SIGN_TOL` when `xi_+`
    /// sub-calibrates there.
    pub max_div_inside: Option<Located>,
    /// Smallest `div xi_+` above the cone. Since `xi_- = -xi_+`, this is at
    /// least `-SIGN_TOL` exactly when `div xi_- <= SIGN_TOL` there.
    pub min_div_outside: Option<Located>,
    pub inside_points: usize,
    pub outside_points: usize,
    pub excluded_points: usize,
    /// Largest relative gap between `|xi|` and `y^alpha`.
    pub max_norm_error: f64,
    pub norm_bound_ok: bool,
    /// Largest angle between `xi_+` and the cone normal
    /// `(-sqrt(alpha), sqrt(m-1))`, sampled on the cone at each grid radius.
    pub boundary_alignment_err: f64,
}

impl SubcalibrationReport {
    pub fn inside_ok(&self) -> bool {
        self.max_div_inside.map_or(true, |l| l.value <= SIGN_TOL)
    }

    pub fn outside_ok(&self) -> bool {
        self.min_div_outside.map_or(true, |l| l.value >= -SIGN_TOL)
    }

    pub fn passed(&self) -> bool {
        self.inside_ok()
            && self.outside_ok()
            && self.norm_bound_ok
            && self.boundary_alignment_err < ALIGNMENT_TOL
    }
}

fn norm_error(m: u64, alpha: f64, pt: &ReducedPoint) -> f64 {
    let (a, b) = xi(m, alpha, pt);
    let w = pt.height.powf(alpha);
    (a.hypot(b) - w).abs() / w
}

pub fn subcalibration_report(m: u64, alpha: f64, grid: &GridSpec) -> Result<SubcalibrationReport> {
    if m < 2 || !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!(
            "need m >= 2 and alpha > 0, got m = {m}, alpha = {alpha}"
        )));
    }
    let th = cone_angle(m, alpha);
    let mut max_inside: Option<Located> = None;
    let mut min_outside: Option<Located> = None;
    let (mut n_in, mut n_out, mut n_ex) = (0, 0, 0);
    let mut max_norm = 0.0f64;

    for pt in grid.points() {
        max_norm = max_norm.max(norm_error(m, alpha, &pt));
        if grid.excluded(th, &pt) {
            n_ex += 1;
            continue;
        }
        let value = div_xi_closed(m, alpha, &pt);
        let here = Located { value, at: pt };
        if pt.angle() < th {
            n_in += 1;
            if max_inside.map_or(true, |l| value > l.value) {
                max_inside = Some(here);
            }
        } else {
            n_out += 1;
            if min_outside.map_or(true, |l| value < l.value) {
                min_outside = Some(here);
            }
        }
    }

    let normal = (-alpha.sqrt(), km1(m).sqrt());
    let normal_angle = normal.1.atan2(normal.0);
    let mut alignment = 0.0f64;
    for r in grid.radial_samples() {
        let pt = ReducedPoint {
            radial: r,
            height: r * th.tan(),
        };
        max_norm = max_norm.max(norm_error(m, alpha, &pt));
        let (a, b) = xi(m, alpha, &pt);
        alignment = alignment.max((b.atan2(a) - normal_angle).abs());
    }

    Ok(SubcalibrationReport {
        max_div_inside: max_inside,
        min_div_outside: min_outside,
        inside_points: n_in,
        outside_points: n_out,
        excluded_points: n_ex,
        max_norm_error: max_norm,
        norm_bound_ok: max_norm <= NORM_TOL,
        boundary_alignment_err: alignment,
    })
}

/// Worst relative gap between the closed-form and finite-difference
/// divergence over the non-excluded grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub max_rel_err: f64,
    pub at: Option<ReducedPoint>,
    pub points: usize,
}

pub fn divergence_identity(m: u64, alpha: f64, grid: &GridSpec, h: f64) -> Result<IdentityReport> {
    let th = cone_angle(m, alpha);
    let mut worst: Option<(f64, ReducedPoint)> = None;
    let mut points = 0;
    for pt in grid.points() {
        if grid.excluded(th, &pt) || cone_distance(m, alpha, &pt) <= 2.0 * h {
            continue;
        }
        let exact = div_xi_closed(m, alpha, &pt);
        let approx = div_xi_numeric(m, alpha, &pt, h)?;
        let rel = (approx - exact).abs() / exact.abs();
        points += 1;
        if worst.map_or(true, |(w, _)| rel > w) {
            worst = Some((rel, pt));
        }
    }
    Ok(IdentityReport {
        max_rel_err: worst.map_or(0.0, |w| w.0),
        at: worst.map(|w| w.1),
        points,
    })
}

/// Observed order of the finite-difference divergence: `log2` of the ratio
/// of worst absolute errors at steps `h` and `h/2`, over grid points
/// farther than `2h` from the cone and axes.
pub fn richardson_slope(m: u64, alpha: f64, grid: &GridSpec, h: f64) -> Result<f64> {
    let th = cone_angle(m, alpha);
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for pt in grid.points() {
        if grid.excluded(th, &pt)
            || cone_distance(m, alpha, &pt) <= 2.0 * h
            || pt.radial <= 2.0 * h
            || pt.height <= 2.0 * h
        {
            continue;
        }
        let exact = div_xi_closed(m, alpha, &pt);
        e1 = e1.max((div_xi_numeric(m, alpha, &pt, h)? - exact).abs());
        e2 = e2.max((div_xi_numeric(m, alpha, &pt, h / 2.0)? - exact).abs());
    }
    Ok((e1 / e2).log2())
}
