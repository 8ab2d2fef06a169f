//! Foliation by level curves for the cone `{ sqrt(m-1) y = sqrt(alpha) |x| }`.
//!
//! In polar angle `t` of the reduced `(|x|, y)` half-plane, the level curves
//! of the auxiliary function are `rho = lambda * exp(v(t))` with `v' = w`
//! and
//!
//! ```text
//! w' = H(t, w) = (1 + w^2) * (m + alpha + K(t) * w),
//! K(t) = (m - alpha - 1 - (m + alpha - 1) cos 2t) / sin 2t.
//! ```
//!
//! `g = -(m + alpha) / K` solves `H(t, g) = 0` and is an upper solution;
//! `gamma * g` is a lower solution whenever the quadratic margin of
//! [`quad_margin`] is nonnegative. A solution is integrated inside that
//! funnel on each side of the cone angle `t_hat`, where it blows up.

mod dopri;

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use crate::alpham::gamma_window;
use crate::conepolys::ConeParams;
use crate::error::{Error, Result};
use crate::ratpoly::{from_f64, to_f64, Rational};

/// `|w|` above which the integrator switches to `u = 1/w`.
pub const RECIPROCAL_SWITCH: f64 = 1e3;
pub const DEFAULT_EPS: f64 = 1e-4;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 2001;

/// Relative slack for barrier comparisons, absorbing rounding in `g`.
const BARRIER_SLACK: f64 = 64.0 * f64::EPSILON;

fn total(m: u64, alpha: f64) -> f64 {
    m as f64 + alpha
}

/// Cone angle `arctan sqrt(alpha / (m - 1))`.
pub fn t_hat(m: u64, alpha: f64) -> f64 {
    (alpha / (m as f64 - 1.0)).sqrt().atan()
}

/// The same angle as `arccos((m - alpha - 1) / (m + alpha - 1)) / 2`.
pub fn t_hat_arccos(m: u64, alpha: f64) -> f64 {
    let mf = m as f64;
    0.5 * ((mf - alpha - 1.0) / (mf + alpha - 1.0)).acos()
}

/// The coefficient `K(t)` of `w` in `H`. The numerator is evaluated as
/// `2 (m + alpha - 1) sin(t + t_hat) sin(t - t_hat)`, which keeps full
/// relative accuracy next to the cone angle.
pub fn k_coef(m: u64, alpha: f64, t: f64) -> f64 {
    let th = t_hat(m, alpha);
    2.0 * (total(m, alpha) - 1.0) * (t + th).sin() * (t - th).sin() / (2.0 * t).sin()
}

fn g_raw(m: u64, alpha: f64, t: f64) -> f64 {
    -total(m, alpha) / k_coef(m, alpha, t)
}

fn check_angle(t: f64) -> Result<()> {
    if !(t > 0.0 && t < FRAC_PI_2) {
        return Err(Error::InvalidParams(format!("angle {t} outside (0, pi/2)")));
    }
    Ok(())
}

/// Upper solution `(m + alpha) sin 2t / ((m + alpha - 1) cos 2t - (m - alpha - 1))`.
pub fn g_upper(m: u64, alpha: f64, t: f64, eps: f64) -> Result<f64> {
    check_angle(t)?;
    if (t - t_hat(m, alpha)).abs() < eps {
        return Err(Error::AtPole { t, eps });
    }
    Ok(g_raw(m, alpha, t))
}

/// Closed-form derivative of [`g_upper`]; nonnegative off the pole.
pub fn g_prime(m: u64, alpha: f64, t: f64) -> f64 {
    let mt = total(m, alpha);
    let th = t_hat(m, alpha);
    let den = -2.0 * (mt - 1.0) * (t + th).sin() * (t - th).sin();
    2.0 * mt * ((mt - 1.0) - (m as f64 - alpha - 1.0) * (2.0 * t).cos()) / (den * den)
}

pub fn rhs_h(m: u64, alpha: f64, t: f64, w: f64) -> f64 {
    (1.0 + w * w) * (total(m, alpha) + k_coef(m, alpha, t) * w)
}

/// Coefficients of `a cos^2(2t) - 2b cos(2t) + c`, whose nonnegativity in
/// `t` is the lower-solution inequality for `gamma * g`, together with its
/// minimum over `cos 2t`, `c - b^2 / a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadMargin {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub margin: f64,
}

pub fn quad_margin(m: u64, alpha: f64, gamma: f64) -> Result<QuadMargin> {
    let mt = total(m, alpha);
    if !(gamma > 0.0 && gamma < 1.0 - 1.0 / mt) {
        return Err(Error::NotBelowOne { gamma });
    }
    let d = m as f64 - alpha - 1.0;
    let a = (1.0 - gamma) * ((mt - 1.0).powi(2) - gamma * gamma * mt * mt);
    let b = d * (mt - 1.0 - gamma * mt);
    let c =
        (1.0 - gamma) * gamma * gamma * mt * mt - 2.0 * gamma * (mt - 1.0) + (1.0 - gamma) * d * d;
    Ok(QuadMargin {
        a,
        b,
        c,
        margin: c - b * b / a,
    })
}

/// Side of the cone angle a solution lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `t` in `(0, t_hat)`, where `0 < gamma g <= w <= g`.
    Below,
    /// `t` in `(t_hat, pi/2)`, where `g <= w <= gamma g < 0`.
    Above,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Below, Branch::Above];

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Below => "below",
            Branch::Above => "above",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoliationConfig {
    pub m: u64,
    pub alpha: f64,
    pub gamma: f64,
    /// Distance kept from `0`, `t_hat` and `pi/2`.
    pub eps: f64,
    /// Bound on the first-order residual; the integrator runs a thousand
    /// times tighter.
    pub tol: f64,
    /// Output samples per branch.
    pub n: usize,
}

impl FoliationConfig {
    pub fn new(m: u64, alpha: f64, gamma: f64, eps: f64, tol: f64, n: usize) -> Result<Self> {
        if m < 2 || !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParams(format!(
                "need m >= 2 and alpha > 0, got m = {m}, alpha = {alpha}"
            )));
        }
        if !(gamma > 0.0 && gamma < 1.0 - 1.0 / total(m, alpha)) {
            return Err(Error::NotBelowOne { gamma });
        }
        let th = t_hat(m, alpha);
        let room = th.min(FRAC_PI_2 - th) / 4.0;
        if !(eps > 0.0 && eps < room) {
            return Err(Error::InvalidParams(format!(
                "eps = {eps} must lie in (0, {room})"
            )));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidParams(format!(
                "tol = {tol} must lie in (0, 1)"
            )));
        }
        if n < 8 {
            return Err(Error::InvalidParams(format!("n = {n} must be at least 8")));
        }
        Ok(FoliationConfig {
            m,
            alpha,
            gamma,
            eps,
            tol,
            n,
        })
    }

    /// Config at an exact `alpha`, with `gamma` taken from the certified
    /// gamma window and converted to `f64` inside that window. `None` when
    /// no admissible `gamma` exists.
    pub fn certified(
        m: u64,
        alpha: &Rational,
        eps: f64,
        tol: f64,
        n: usize,
    ) -> Result<Option<Self>> {
        let params = ConeParams::new(m, alpha.clone())?;
        let Some(win) = gamma_window(&params)? else {
            return Ok(None);
        };
        let mut gamma = to_f64(&win.gamma_star);
        let inside = |g: f64| from_f64(g).is_some_and(|q| win.window.contains(&q));
        if !inside(gamma) {
            // Rounding landed outside; step toward the window interior.
            let mid = to_f64(&win.window.midpoint());
            while !inside(gamma) && gamma != mid {
                gamma = gamma + (mid - gamma) / 2.0;
            }
        }
        Self::new(m, to_f64(alpha), gamma, eps, tol, n).map(Some)
    }

    pub fn t_hat(&self) -> f64 {
        t_hat(self.m, self.alpha)
    }

    pub fn margin(&self) -> Result<QuadMargin> {
        quad_margin(self.m, self.alpha, self.gamma)
    }

    /// Integration interval of a branch, ordered in time.
    pub fn span(&self, branch: Branch) -> (f64, f64) {
        let th = self.t_hat();
        match branch {
            Branch::Below => (self.eps, th - self.eps),
            Branch::Above => (th + self.eps, FRAC_PI_2 - self.eps),
        }
    }

    /// The open angular interval the branch approximates.
    fn domain(&self, branch: Branch) -> (f64, f64) {
        let th = self.t_hat();
        match branch {
            Branch::Below => (0.0, th),
            Branch::Above => (th, FRAC_PI_2),
        }
    }

    /// `(lower, upper)` barrier values at `t`.
    pub fn barriers(&self, branch: Branch, t: f64) -> (f64, f64) {
        let g = g_raw(self.m, self.alpha, t);
        match branch {
            Branch::Below => (self.gamma * g, g),
            Branch::Above => (g, self.gamma * g),
        }
    }

    fn contains(&self, branch: Branch, t: f64, w: f64) -> bool {
        let (lo, hi) = self.barriers(branch, t);
        let slack = BARRIER_SLACK * lo.abs().max(hi.abs());
        lo - slack <= w && w <= hi + slack
    }
}

/// Where the integration was launched inside the funnel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Launch {
    LowerBarrier,
    FunnelMidpoint,
}

/// Bookkeeping from one integration run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationStats {
    pub launch: Launch,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Every accepted step ended inside the funnel.
    pub contained_steps: usize,
    pub switched_to_reciprocal: bool,
    /// Zero of `u = 1/w` extrapolated linearly from the end next to the cone.
    pub pole_estimate: f64,
}

#[derive(Debug, Clone)]
pub struct FoliationSolution {
    pub branch: Branch,
    pub t_samples: Vec<f64>,
    pub w_samples: Vec<f64>,
    /// Empty until [`build_v`] runs.
    pub v_samples: Vec<f64>,
    pub stats: IntegrationStats,
    /// Richardson estimate of the quadrature error in `v`.
    pub quadrature_error: Option<f64>,
    cfg: FoliationConfig,
    /// Angles halfway in `sigma` between consecutive samples, and `w` there.
    t_mid: Vec<f64>,
    w_mid: Vec<f64>,
}

impl FoliationSolution {
    pub fn config(&self) -> &FoliationConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.t_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_samples.is_empty()
    }

    /// Fraction of output samples lying inside the barrier funnel.
    pub fn containment(&self) -> f64 {
        let inside = self
            .t_samples
            .iter()
            .zip(&self.w_samples)
            .filter(|(&t, &w)| self.cfg.contains(self.branch, t, w))
            .count();
        inside as f64 / self.len() as f64
    }

    /// Distance between the extrapolated zero of `1/w` and `t_hat`.
    pub fn pole_error(&self) -> f64 {
        (self.stats.pole_estimate - self.cfg.t_hat()).abs()
    }

    /// `sigma = ln((t - a) / (b - t))` for the branch domain `(a, b)`.
    fn sigma_map(&self) -> SigmaMap {
        let (a, b) = self.cfg.domain(self.branch);
        SigmaMap { a, b }
    }
}

#[derive(Debug, Clone, Copy)]
struct SigmaMap {
    a: f64,
    b: f64,
}

impl SigmaMap {
    fn sigma(&self, t: f64) -> f64 {
        ((t - self.a) / (self.b - t)).ln()
    }

    fn t(&self, sigma: f64) -> f64 {
        // Written to stay accurate at both ends.
        if sigma <= 0.0 {
            let e = sigma.exp();
            (self.a + self.b * e) / (1.0 + e)
        } else {
            let e = (-sigma).exp();
            (self.a * e + self.b) / (1.0 + e)
        }
    }

    /// `dt / dsigma`.
    fn jacobian(&self, t: f64) -> f64 {
        (t - self.a) * (self.b - t) / (self.b - self.a)
    }
}

struct Run {
    /// `w` on the grid, in increasing `t`.
    w: Vec<f64>,
    stats: IntegrationStats,
}

/// Adaptive integration that lands exactly on every grid point (given in
/// increasing `t`), so sampled values carry only the step error and no
/// interpolation error.
fn run_branch(cfg: &FoliationConfig, branch: Branch, grid: &[f64], launch: Launch) -> Result<Run> {
    let (m, alpha) = (cfg.m, cfg.alpha);
    let mut targets: Vec<f64> = grid.to_vec();
    let dir = match branch {
        Branch::Below => 1.0,
        Branch::Above => {
            targets.reverse();
            -1.0
        }
    };
    let t0 = targets[0];
    let g0 = g_raw(m, alpha, t0);
    let w0 = match launch {
        Launch::LowerBarrier => cfg.gamma * g0,
        Launch::FunnelMidpoint => 0.5 * (cfg.gamma + 1.0) * g0,
    };

    let fw = |t: f64, w: f64| rhs_h(m, alpha, t, w);
    let mt = total(m, alpha);
    let fu = |t: f64, u: f64| {
        let s = 1.0 + u * u;
        -s * mt - s * k_coef(m, alpha, t) / u
    };
    let rtol = cfg.tol * 1e-3;

    let mut recip = false;
    let mut t = t0;
    let mut y = w0;
    let mut k1 = fw(t, y);
    let mut h = dir * cfg.eps * 1e-2;
    let mut out = Vec::with_capacity(targets.len());
    out.push(w0);
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut contained = 0usize;

    for &target in &targets[1..] {
        while t != target {
            let mut step_h = h;
            let mut last = false;
            if (t + step_h - target) * dir >= 0.0 {
                step_h = target - t;
                last = true;
            }
            if step_h.abs() <= 16.0 * f64::EPSILON * t.abs() {
                return Err(Error::StepUnderflow { t, h: step_h });
            }
            let st = if recip {
                dopri::step(&fu, t, y, k1, step_h)
            } else {
                dopri::step(&fw, t, y, k1, step_h)
            };
            let scale = rtol * y.abs().max(st.y.abs()) + f64::MIN_POSITIVE;
            let err = (st.err / scale).abs();
            if !err.is_finite() || !st.y.is_finite() || err > 1.0 {
                rejected += 1;
                let fac = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                h = step_h * fac;
                continue;
            }
            accepted += 1;
            t = if last { target } else { t + step_h };
            y = st.y;
            k1 = st.k_end;

            let w = if recip { 1.0 / y } else { y };
            if !cfg.contains(branch, t, w) {
                let (lower, upper) = cfg.barriers(branch, t);
                return Err(Error::BarrierEscape { t, w, lower, upper });
            }
            contained += 1;
            if !recip && w.abs() > RECIPROCAL_SWITCH {
                recip = true;
                y = 1.0 / w;
                k1 = fu(t, y);
            }
            // A step shortened to hit the grid says little about the next one.
            if !last || step_h.abs() >= h.abs() {
                h = step_h * (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
            }
        }
        out.push(if recip { 1.0 / y } else { y });
    }

    let (u, du) = if recip {
        (y, k1)
    } else {
        (1.0 / y, -k1 / (y * y))
    };
    if dir < 0.0 {
        out.reverse();
    }
    Ok(Run {
        w: out,
        stats: IntegrationStats {
            launch,
            accepted_steps: accepted,
            rejected_steps: rejected,
            contained_steps: contained,
            switched_to_reciprocal: recip,
            pole_estimate: t - u / du,
        },
    })
}

/// Integrates `w' = H(t, w)` across one branch, launching on the lower
/// barrier at the end away from the cone (`t = eps` below, `t = pi/2 - eps`
/// above, integrating toward the cone in both cases). If the trajectory
/// leaves the funnel it is relaunched once from the funnel midpoint.
///
/// Samples are uniform in `sigma = ln((t - a) / (b - t))` over the branch
/// domain `(a, b)`, which resolves both singular ends evenly.
pub fn integrate_w(cfg: &FoliationConfig, branch: Branch) -> Result<FoliationSolution> {
    let margin = cfg.margin()?;
    if margin.margin < 0.0 {
        return Err(Error::InvalidParams(format!(
            "gamma = {} gives a negative lower-solution margin {}",
            cfg.gamma, margin.margin
        )));
    }
    let (lo, hi) = cfg.span(branch);
    let (a, b) = cfg.domain(branch);
    let map = SigmaMap { a, b };
    let (s0, s1) = (map.sigma(lo), map.sigma(hi));
    let fine = 2 * (cfg.n - 1);
    let grid: Vec<f64> = (0..=fine)
        .map(|i| match i {
            0 => lo,
            _ if i == fine => hi,
            _ => map.t(s0 + (s1 - s0) * i as f64 / fine as f64),
        })
        .collect();

    let run = match run_branch(cfg, branch, &grid, Launch::LowerBarrier) {
        Err(Error::BarrierEscape { .. }) => run_branch(cfg, branch, &grid, Launch::FunnelMidpoint)?,
        other => other?,
    };
    Ok(FoliationSolution {
        branch,
        t_samples: grid.iter().step_by(2).copied().collect(),
        w_samples: run.w.iter().step_by(2).copied().collect(),
        v_samples: Vec::new(),
        stats: run.stats,
        quadrature_error: None,
        cfg: cfg.clone(),
        t_mid: grid.iter().skip(1).step_by(2).copied().collect(),
        w_mid: run.w.iter().skip(1).step_by(2).copied().collect(),
    })
}

/// Fills `v`, the antiderivative of `w`, by cumulative trapezoid in
/// `sigma` on the sample grid and on the grid with midpoints added; the two
/// are combined by Richardson extrapolation. Below the cone `v -> 0` as
/// `t -> 0`, above it `v -> 0` as `t -> pi/2`; the missing end piece uses
/// `w` vanishing linearly at the boundary.
pub fn build_v(mut sol: FoliationSolution) -> FoliationSolution {
    let map = sol.sigma_map();
    let n = sol.len();
    let integrand = |t: f64, w: f64| w * map.jacobian(t);
    let f: Vec<f64> = sol
        .t_samples
        .iter()
        .zip(&sol.w_samples)
        .map(|(&t, &w)| integrand(t, w))
        .collect();
    // Uniform by construction; differencing sigma(t_i) would add round-off
    // from b - t near the ends.
    let hs = (map.sigma(sol.t_samples[n - 1]) - map.sigma(sol.t_samples[0])) / (n - 1) as f64;

    // Integral over each sample interval.
    let mut pieces = Vec::with_capacity(n - 1);
    let mut worst = 0.0f64;
    for i in 0..n - 1 {
        let fm = integrand(sol.t_mid[i], sol.w_mid[i]);
        let coarse = 0.5 * hs * (f[i] + f[i + 1]);
        let fine = 0.25 * hs * (f[i] + 2.0 * fm + f[i + 1]);
        let corr = (fine - coarse) / 3.0;
        worst = worst.max(corr.abs());
        pieces.push(fine + corr);
    }

    let mut v = vec![0.0; n];
    match sol.branch {
        Branch::Below => {
            let (t, w) = (sol.t_samples[0], sol.w_samples[0]);
            v[0] = 0.5 * t * w;
            for i in 1..n {
                v[i] = v[i - 1] + pieces[i - 1];
            }
        }
        Branch::Above => {
            let (t, w) = (sol.t_samples[n - 1], sol.w_samples[n - 1]);
            v[n - 1] = -0.5 * (FRAC_PI_2 - t) * w;
            for i in (0..n - 1).rev() {
                v[i] = v[i + 1] - pieces[i];
            }
        }
    }
    sol.v_samples = v;
    sol.quadrature_error = Some(worst);
    sol
}

/// Seven-point central derivatives in `sigma` at interior samples
/// `3..n-3`, converted to `t`. Returns `(index, d/dt, d2/dt2)` triples.
fn fd_derivatives(sol: &FoliationSolution, vals: &[f64]) -> Vec<(usize, f64, f64)> {
    let map = sol.sigma_map();
    let n = vals.len();
    let hs = map.sigma(sol.t_samples[n - 1]) - map.sigma(sol.t_samples[0]);
    let hs = hs / (n - 1) as f64;
    (3..n - 3)
        .map(|i| {
            let f = &vals[i - 3..=i + 3];
            let d1 =
                (-f[0] + 9.0 * f[1] - 45.0 * f[2] + 45.0 * f[4] - 9.0 * f[5] + f[6]) / (60.0 * hs);
            let d2 = (2.0 * f[0] - 27.0 * f[1] + 270.0 * f[2] - 490.0 * f[3] + 270.0 * f[4]
                - 27.0 * f[5]
                + 2.0 * f[6])
                / (180.0 * hs * hs);
            let t = sol.t_samples[i];
            // sigma_t and sigma_tt for sigma = ln(t - a) - ln(b - t)
            let s1 = 1.0 / (t - map.a) + 1.0 / (map.b - t);
            let s2 = -1.0 / (t - map.a).powi(2) + 1.0 / (map.b - t).powi(2);
            (i, d1 * s1, d2 * s1 * s1 + d1 * s2)
        })
        .collect()
}

/// Largest first-order residual `|w'/(1 + w^2) - (m + alpha + K w)|` over
/// interior samples, with `w'` from finite differences. Dividing `H` by
/// `1 + w^2` keeps the residual on the scale of `m + alpha` near the pole.
pub fn ode_residual(sol: &FoliationSolution) -> f64 {
    let (m, alpha) = (sol.cfg.m, sol.cfg.alpha);
    fd_derivatives(sol, &sol.w_samples)
        .into_iter()
        .map(|(i, dw, _)| {
            let (t, w) = (sol.t_samples[i], sol.w_samples[i]);
            (dw / (1.0 + w * w) - total(m, alpha) - k_coef(m, alpha, t) * w).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest residual of `v'' = (1 + v'^2) (m + alpha + K v')`, normalized as
/// in [`ode_residual`], with both derivatives from finite differences of
/// `v`. Zero if `v` has not been built.
pub fn el_residual(sol: &FoliationSolution) -> f64 {
    if sol.v_samples.is_empty() {
        return 0.0;
    }
    let (m, alpha) = (sol.cfg.m, sol.cfg.alpha);
    fd_derivatives(sol, &sol.v_samples)
        .into_iter()
        .map(|(i, dv, ddv)| {
            let t = sol.t_samples[i];
            (ddv / (1.0 + dv * dv) - total(m, alpha) - k_coef(m, alpha, t) * dv).abs()
        })
        .fold(0.0, f64::max)
}

/// Both branches with `v` built, plus the reconstructed auxiliary function.
#[derive(Debug, Clone)]
pub struct Foliation {
    pub below: FoliationSolution,
    pub above: FoliationSolution,
}

/// Certificate figures for one branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub branch: Branch,
    pub containment: f64,
    pub ode_residual: f64,
    pub el_residual: f64,
    pub pole_estimate: f64,
    pub pole_error: f64,
    pub quadrature_error: f64,
    pub stats: IntegrationStats,
}

impl BranchReport {
    /// Full containment, first-order residual below `tol`, second-order
    /// residual below `el_tol` and the pole located within `eps`.
    pub fn passed(&self, tol: f64, el_tol: f64, eps: f64) -> bool {
        self.containment == 1.0
            && self.ode_residual < tol
            && self.el_residual < el_tol
            && self.pole_error < eps
    }
}

impl Foliation {
    pub fn solve(cfg: &FoliationConfig) -> Result<Self> {
        Ok(Foliation {
            below: build_v(integrate_w(cfg, Branch::Below)?),
            above: build_v(integrate_w(cfg, Branch::Above)?),
        })
    }

    pub fn config(&self) -> &FoliationConfig {
        self.below.config()
    }

    pub fn branch(&self, branch: Branch) -> &FoliationSolution {
        match branch {
            Branch::Below => &self.below,
            Branch::Above => &self.above,
        }
    }

    pub fn report(&self, branch: Branch) -> BranchReport {
        let sol = self.branch(branch);
        BranchReport {
            branch,
            containment: sol.containment(),
            ode_residual: ode_residual(sol),
            el_residual: el_residual(sol),
            pole_estimate: sol.stats.pole_estimate,
            pole_error: sol.pole_error(),
            quadrature_error: sol.quadrature_error.unwrap_or(f64::NAN),
            stats: sol.stats.clone(),
        }
    }

    /// Points `(lambda e^v cos t, lambda e^v sin t)` at the branch samples.
    pub fn level_curve(&self, branch: Branch, lambda: f64) -> Result<Vec<(f64, f64)>> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParams(format!(
                "lambda = {lambda} must be positive"
            )));
        }
        let sol = self.branch(branch);
        Ok(sol
            .t_samples
            .iter()
            .zip(&sol.v_samples)
            .map(|(&t, &v)| {
                let rho = lambda * v.exp();
                (rho * t.cos(), rho * t.sin())
            })
            .collect())
    }

    /// `v` at an angle of the given branch: monotone cubic Hermite between
    /// samples, quadratic decay to zero past the outer sample.
    pub fn v_at(&self, branch: Branch, t: f64) -> f64 {
        let sol = self.branch(branch);
        let (ts, vs, ws) = (&sol.t_samples, &sol.v_samples, &sol.w_samples);
        let n = ts.len();
        match branch {
            Branch::Below if t <= ts[0] => return vs[0] * (t / ts[0]).powi(2),
            Branch::Above if t >= ts[n - 1] => {
                let s = (FRAC_PI_2 - t) / (FRAC_PI_2 - ts[n - 1]);
                return vs[n - 1] * s * s;
            }
            _ => {}
        }
        let i = ts.partition_point(|&x| x <= t).clamp(1, n - 1) - 1;
        hermite_monotone(ts[i], ts[i + 1], vs[i], vs[i + 1], ws[i], ws[i + 1], t)
    }

    /// Auxiliary function `+- sqrt(r^2 + y^2) exp(-v(arctan(y / r)))`,
    /// positive below the cone and negative above.
    pub fn f_bold(&self, radial: f64, height: f64) -> Result<f64> {
        if !(radial > 0.0 && height > 0.0) {
            return Err(Error::InvalidParams(format!(
                "point ({radial}, {height}) must lie in the open quadrant"
            )));
        }
        let cfg = self.config();
        let angle = height.atan2(radial);
        if (angle - cfg.t_hat()).abs() < cfg.eps {
            return Err(Error::AngleNearCone {
                angle,
                eps: cfg.eps,
            });
        }
        let rho = radial.hypot(height);
        Ok(if angle < cfg.t_hat() {
            rho * (-self.v_at(Branch::Below, angle)).exp()
        } else {
            -rho * (-self.v_at(Branch::Above, angle)).exp()
        })
    }
}

/// Cubic Hermite on `[x0, x1]` with slopes limited as in Fritsch–Carlson
/// so the interpolant stays monotone when the data are.
fn hermite_monotone(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let delta = (y1 - y0) / h;
    let (mut d0, mut d1) = (d0, d1);
    if delta == 0.0 {
        d0 = 0.0;
        d1 = 0.0;
    } else {
        if d0 * delta < 0.0 {
            d0 = 0.0;
        }
        if d1 * delta < 0.0 {
            d1 = 0.0;
        }
        let (a, b) = (d0 / delta, d1 / delta);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            d0 = tau * a * delta;
            d1 = tau * b * delta;
        }
    }
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}
