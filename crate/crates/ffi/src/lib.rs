//! C ABI for the `hypercone` crate.
//!
//! Every entry point returns an [`HcStatus`] and writes results through out
//! pointers. Exact results that own heap data ([`HcAlpha`], [`HcFoliation`])
//! are opaque handles released with their `_free` function. Panics never
//! cross the boundary; they surface as [`HcStatus::Internal`].
//!
//! Rational parameters are passed as `numerator / denominator` pairs. Out
//! pointers must be null (reported as [`HcStatus::NullPointer`]) or valid
//! for writes; buffers must hold the stated number of elements.

// `!(x > 0.0)` guards reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypercone::alpham::{self, AlphaResult};
use hypercone::calib::{self, ReducedPoint};
use hypercone::conepolys::{subcal_bound_test, ConeParams};
use hypercone::foliation::{Branch, Foliation, FoliationConfig};
use hypercone::ratpoly::{rat, to_f64, Rational};
use hypercone::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    /// The root count or bracket of `p_m` was not as expected.
    RootCheckFailed = 3,
    /// `alpha` admits no `gamma` with a nonnegative quadratic margin.
    NoGammaWindow = 4,
    /// The integrator left the barrier funnel or its step underflowed.
    IntegrationFailed = 5,
    /// The query point is too close to the cone or an axis.
    NearSingularity = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// Side of the cone angle.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcBranch {
    Below = 0,
    Above = 1,
}

impl From<HcBranch> for Branch {
    fn from(b: HcBranch) -> Self {
        match b {
            HcBranch::Below => Branch::Below,
            HcBranch::Above => Branch::Above,
        }
    }
}

/// Certificate figures for one branch of a foliation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HcBranchReport {
    pub containment: f64,
    pub ode_residual: f64,
    pub el_residual: f64,
    pub pole_estimate: f64,
    pub pole_error: f64,
}

/// Isolated and rounded `alpha_m`.
pub struct HcAlpha(AlphaResult);

/// Both branches of a solved foliation.
pub struct HcFoliation(Foliation);

impl From<&Error> for HcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Parse(_) | Error::NotBelowOne { .. } => {
                HcStatus::InvalidParams
            }
            Error::RootCountNotOne { .. } | Error::NoSignChange { .. } => HcStatus::RootCheckFailed,
            Error::BarrierEscape { .. } | Error::StepUnderflow { .. } => {
                HcStatus::IntegrationFailed
            }
            Error::AtPole { .. } | Error::AngleNearCone { .. } => HcStatus::NearSingularity,
            Error::EndpointIsRoot(_) | Error::ChainTooShort { .. } => HcStatus::Internal,
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), HcStatus>) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => HcStatus::Internal,
    }
}

fn lift<T>(r: hypercone::Result<T>) -> Result<T, HcStatus> {
    r.map_err(|e| HcStatus::from(&e))
}

fn out<'a, T>(p: *mut T) -> Result<&'a mut T, HcStatus> {
    // SAFETY: callers pass either null or a valid, writable, aligned pointer.
    unsafe { p.as_mut() }.ok_or(HcStatus::NullPointer)
}

fn handle<'a, T>(p: *const T) -> Result<&'a T, HcStatus> {
    // SAFETY: non-null handles come from the matching constructor.
    unsafe { p.as_ref() }.ok_or(HcStatus::NullPointer)
}

fn fraction(num: i64, den: i64) -> Result<Rational, HcStatus> {
    if den == 0 {
        return Err(HcStatus::InvalidParams);
    }
    Ok(rat(num, den))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hc_status_message(status: HcStatus) -> *const c_char {
    let s: &[u8] = match status {
        HcStatus::Ok => b"ok\0",
        HcStatus::NullPointer => b"null pointer argument\0",
        HcStatus::InvalidParams => b"invalid parameters\0",
        HcStatus::RootCheckFailed => b"root count or bracket check failed\0",
        HcStatus::NoGammaWindow => b"no admissible gamma\0",
        HcStatus::IntegrationFailed => b"integration left the barrier funnel\0",
        HcStatus::NearSingularity => b"point too close to the cone or an axis\0",
        HcStatus::BufferTooSmall => b"buffer too small\0",
        HcStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Computes `alpha_m` to `digits` decimals. On success `*out_alpha` owns a
/// handle to release with [`hc_alpha_free`].
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_alpha_compute(
    m: u64,
    digits: u32,
    out_alpha: *mut *mut HcAlpha,
) -> HcStatus {
    guard(|| {
        let slot = out(out_alpha)?;
        *slot = ptr::null_mut();
        let r = lift(alpham::compute_alpha_m(m, digits))?;
        *slot = Box::into_raw(Box::new(HcAlpha(r)));
        Ok(())
    })
}

/// Copies the rounded decimal string, NUL-terminated, into `buf`.
/// `*needed` receives the buffer size required, terminator included, even
/// when the status is [`HcStatus::BufferTooSmall`].
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_alpha_decimal(
    alpha: *const HcAlpha,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> HcStatus {
    guard(|| {
        let a = handle(alpha)?;
        let bytes = a.0.decimal.as_bytes();
        *out(needed)? = bytes.len() + 1;
        if buf.is_null() {
            return Err(HcStatus::NullPointer);
        }
        if len < bytes.len() + 1 {
            return Err(HcStatus::BufferTooSmall);
        }
        // SAFETY: `buf` holds at least `len` bytes.
        unsafe {
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
            *buf.add(bytes.len()) = 0;
        }
        Ok(())
    })
}

/// Ends of the rational isolating interval of `alpha_m`, each converted to
/// the nearest double.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_alpha_bounds(
    alpha: *const HcAlpha,
    lo: *mut f64,
    hi: *mut f64,
) -> HcStatus {
    guard(|| {
        let a = handle(alpha)?;
        *out(lo)? = to_f64(a.0.isolator.lo());
        *out(hi)? = to_f64(a.0.isolator.hi());
        Ok(())
    })
}

/// # Safety
/// The handle is null or came from the matching constructor and has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn hc_alpha_free(alpha: *mut HcAlpha) {
    if !alpha.is_null() {
        // SAFETY: produced by `hc_alpha_compute` and not freed before.
        drop(unsafe { Box::from_raw(alpha) });
    }
}

/// Number of positive roots of `p_m`.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_positive_root_count(m: u64, count: *mut usize) -> HcStatus {
    guard(|| {
        *out(count)? = lift(alpham::positive_root_count(m))?;
        Ok(())
    })
}

/// `p_m(2/m) < 0 < p_m(12/m)`.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_verify_bracket(m: u64, holds: *mut bool) -> HcStatus {
    guard(|| {
        if m < 2 {
            return Err(HcStatus::InvalidParams);
        }
        *out(holds)? = alpham::verify_bracket(m);
        Ok(())
    })
}

/// Whether the product cone over `S^k x S^h` is area minimizing.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_lawson_check(k: u64, h: u64, minimizing: *mut bool) -> HcStatus {
    guard(|| {
        *out(minimizing)? = lift(alpham::lawson_check(k, h))?;
        Ok(())
    })
}

/// Whether `alpha = num/den` meets the explicit sub-calibration bound.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_subcal_bound(m: u64, num: i64, den: i64, holds: *mut bool) -> HcStatus {
    guard(|| {
        let params = lift(ConeParams::new(m, fraction(num, den)?))?;
        *out(holds)? = subcal_bound_test(&params);
        Ok(())
    })
}

/// Closed-form divergence of the sub-calibration field at `(radial, height)`.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_div_xi(
    m: u64,
    alpha: f64,
    radial: f64,
    height: f64,
    div: *mut f64,
) -> HcStatus {
    guard(|| {
        if m < 2 || !(alpha > 0.0) {
            return Err(HcStatus::InvalidParams);
        }
        let pt = lift(ReducedPoint::new(radial, height))?;
        if calib::cone_distance(m, alpha, &pt) == 0.0 {
            return Err(HcStatus::NearSingularity);
        }
        *out(div)? = calib::div_xi_closed(m, alpha, &pt);
        Ok(())
    })
}

/// Solves the foliation at `alpha = num/den` with `gamma` taken from the
/// certified window. Release the handle with [`hc_foliation_free`].
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_foliation_solve(
    m: u64,
    num: i64,
    den: i64,
    eps: f64,
    tol: f64,
    n: usize,
    out_fol: *mut *mut HcFoliation,
) -> HcStatus {
    guard(|| {
        let slot = out(out_fol)?;
        *slot = ptr::null_mut();
        let alpha = fraction(num, den)?;
        let cfg = lift(FoliationConfig::certified(m, &alpha, eps, tol, n))?
            .ok_or(HcStatus::NoGammaWindow)?;
        let fol = lift(Foliation::solve(&cfg))?;
        *slot = Box::into_raw(Box::new(HcFoliation(fol)));
        Ok(())
    })
}

/// Sample count of one branch.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_foliation_len(
    fol: *const HcFoliation,
    branch: HcBranch,
    len: *mut usize,
) -> HcStatus {
    guard(|| {
        *out(len)? = handle(fol)?.0.branch(branch.into()).len();
        Ok(())
    })
}

/// Copies the angle, `w` and `v` samples of a branch into three arrays of
/// `cap` doubles each. Any of the arrays may be null to skip it.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_foliation_copy(
    fol: *const HcFoliation,
    branch: HcBranch,
    t: *mut f64,
    w: *mut f64,
    v: *mut f64,
    cap: usize,
) -> HcStatus {
    guard(|| {
        let sol = handle(fol)?.0.branch(branch.into());
        if cap < sol.len() {
            return Err(HcStatus::BufferTooSmall);
        }
        for (dst, src) in [
            (t, &sol.t_samples),
            (w, &sol.w_samples),
            (v, &sol.v_samples),
        ] {
            if !dst.is_null() {
                // SAFETY: `dst` holds at least `cap >= len` doubles.
                unsafe { ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len()) };
            }
        }
        Ok(())
    })
}

/// Certificate figures of one branch.
///
/// # Safety
/// Pointer arguments are null or valid for their documented use.
#[no_mangle]
pub unsafe extern "C" fn hc_foliation_report(
    fol: *const HcFoliation,
    branch: HcBranch,
    report: *mut HcBranchReport,
) -> HcStatus {
    guard(|| {
        let r = handle(fol)?.0.report(branch.into());
        *out(report)? = HcBranchReport {
            containment: r.containment,
            ode_residual: r.ode_residual,
            el_residual: r.el_residual,
            pole_estimate: r.pole_estimate,
            pole_error: r.pole_error,
        };
        Ok(())
    })
}

/// # Safety
/// The handle is null or came from the matching constructor and has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn hc_foliation_free(fol: *mut HcFoliation) {
    if !fol.is_null() {
        // SAFETY: produced by `hc_foliation_solve` and not freed before.
        drop(unsafe { Box::from_raw(fol) });
    }
}
