use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use hypercone_ffi::*;

fn alpha(m: u64, digits: u32) -> *mut HcAlpha {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(hc_alpha_compute(m, digits, &mut h), HcStatus::Ok);
        assert!(!h.is_null());
        h
    }
}

fn decimal(h: *const HcAlpha) -> String {
    let mut needed = 0;
    let mut buf = vec![0 as std::ffi::c_char; 64];
    // SAFETY: `buf` holds 64 bytes; on success the call wrote a
    // NUL-terminated string into it.
    unsafe {
        assert_eq!(
            hc_alpha_decimal(h, buf.as_mut_ptr(), buf.len(), &mut needed),
            HcStatus::Ok
        );
        CStr::from_ptr(buf.as_ptr()).to_str().unwrap().to_owned()
    }
}

#[test]
fn alpha_round_trip() {
    unsafe {
        for (m, want) in [(2, "5.881525129"), (4, "2.829350458"), (13, "0.317117533")] {
            let h = alpha(m, 9);
            assert_eq!(decimal(h), want);
            let (mut lo, mut hi) = (0.0, 0.0);
            assert_eq!(hc_alpha_bounds(h, &mut lo, &mut hi), HcStatus::Ok);
            let x: f64 = want.parse().unwrap();
            assert!(lo <= hi && (lo - x).abs() < 1e-9 && (hi - x).abs() < 1e-9);
            hc_alpha_free(h);
        }
    }
}

#[test]
fn decimal_reports_needed_size() {
    unsafe {
        let h = alpha(3, 12);
        let mut needed = 0;
        let mut small = [0 as std::ffi::c_char; 4];
        assert_eq!(
            hc_alpha_decimal(h, small.as_mut_ptr(), small.len(), &mut needed),
            HcStatus::BufferTooSmall
        );
        // "3." + 12 digits + NUL
        assert_eq!(needed, 15);
        hc_alpha_free(h);
    }
}

#[test]
fn invalid_inputs_are_reported() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(hc_alpha_compute(1, 9, &mut h), HcStatus::InvalidParams);
        assert!(h.is_null());
        assert_eq!(
            hc_alpha_compute(3, 9, ptr::null_mut()),
            HcStatus::NullPointer
        );
        let mut b = false;
        assert_eq!(hc_subcal_bound(3, 1, 0, &mut b), HcStatus::InvalidParams);
        assert_eq!(hc_subcal_bound(3, -1, 2, &mut b), HcStatus::InvalidParams);
        assert_eq!(hc_verify_bracket(1, &mut b), HcStatus::InvalidParams);
        let mut d = 0.0;
        assert_eq!(
            hc_div_xi(3, 2.0, -1.0, 1.0, &mut d),
            HcStatus::InvalidParams
        );
        assert_eq!(
            hc_alpha_bounds(ptr::null(), &mut d, &mut d),
            HcStatus::NullPointer
        );
        hc_alpha_free(ptr::null_mut());
        hc_foliation_free(ptr::null_mut());
    }
}

#[test]
fn scalar_checks() {
    unsafe {
        let mut n = 0;
        let mut b = false;
        for m in 2..=20 {
            assert_eq!(hc_positive_root_count(m, &mut n), HcStatus::Ok);
            assert_eq!(n, 1);
            assert_eq!(hc_verify_bracket(m, &mut b), HcStatus::Ok);
            assert!(b);
        }
        assert_eq!(hc_lawson_check(4, 4, &mut b), HcStatus::Ok);
        assert!(b);
        assert_eq!(hc_lawson_check(2, 6, &mut b), HcStatus::Ok);
        assert!(!b);
        assert_eq!(hc_subcal_bound(2, 11, 1, &mut b), HcStatus::Ok);
        assert!(b);
        assert_eq!(hc_subcal_bound(2, 10, 1, &mut b), HcStatus::Ok);
        assert!(!b);
    }
}

#[test]
fn divergence_sign_matches_the_library() {
    unsafe {
        let mut d = 0.0;
        // (2, 11) passes the bound: nonpositive below the cone, nonnegative above
        assert_eq!(hc_div_xi(2, 11.0, 1.0, 0.2, &mut d), HcStatus::Ok);
        let pt = hypercone::calib::ReducedPoint::new(1.0, 0.2).unwrap();
        assert_eq!(d, hypercone::calib::div_xi_closed(2, 11.0, &pt));
        assert!(d <= 0.0);
        assert_eq!(hc_div_xi(2, 11.0, 0.2, 1.0, &mut d), HcStatus::Ok);
        assert!(d >= 0.0);
    }
}

#[test]
fn foliation_handle() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(
            hc_foliation_solve(3, 4, 1, 1e-4, 1e-8, 2001, &mut f),
            HcStatus::Ok
        );
        for branch in [HcBranch::Below, HcBranch::Above] {
            let mut len = 0;
            assert_eq!(hc_foliation_len(f, branch, &mut len), HcStatus::Ok);
            assert_eq!(len, 2001);
            let (mut t, mut w) = (vec![0.0; len], vec![0.0; len]);
            assert_eq!(
                hc_foliation_copy(
                    f,
                    branch,
                    t.as_mut_ptr(),
                    w.as_mut_ptr(),
                    ptr::null_mut(),
                    len
                ),
                HcStatus::Ok
            );
            assert!(t.windows(2).all(|p| p[0] < p[1]));
            assert!(w.iter().all(|x| x.is_finite()));
            assert_eq!(
                hc_foliation_copy(
                    f,
                    branch,
                    t.as_mut_ptr(),
                    ptr::null_mut(),
                    ptr::null_mut(),
                    len - 1
                ),
                HcStatus::BufferTooSmall
            );
            let mut r = HcBranchReport::default();
            assert_eq!(hc_foliation_report(f, branch, &mut r), HcStatus::Ok);
            assert_eq!(r.containment, 1.0);
            assert!(
                r.ode_residual < 1e-8 && r.el_residual < 1e-5 && r.pole_error < 1e-4,
                "{r:?}"
            );
        }
        hc_foliation_free(f);

        let mut g = ptr::null_mut();
        assert_eq!(
            hc_foliation_solve(2, 5, 1, 1e-4, 1e-8, 501, &mut g),
            HcStatus::NoGammaWindow
        );
        assert!(g.is_null());
    }
}

#[test]
fn status_messages_are_distinct() {
    let all = [
        HcStatus::Ok,
        HcStatus::NullPointer,
        HcStatus::InvalidParams,
        HcStatus::RootCheckFailed,
        HcStatus::NoGammaWindow,
        HcStatus::IntegrationFailed,
        HcStatus::NearSingularity,
        HcStatus::BufferTooSmall,
        HcStatus::Internal,
    ];
    let msgs: std::collections::BTreeSet<_> = all
        .iter()
        // SAFETY: static NUL-terminated strings.
        .map(|&s| unsafe { CStr::from_ptr(hc_status_message(s)) }.to_owned())
        .collect();
    assert_eq!(msgs.len(), all.len());
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/hypercone.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "hc_alpha_compute",
        "hc_foliation_copy",
        "HC_STATUS_BUFFER_TOO_SMALL",
        "typedef struct HcAlpha HcAlpha",
    ] {
        assert!(text.contains(sym), "{sym}");
    }
    let src = std::env::temp_dir().join(format!("hypercone-header-{}.c", std::process::id()));
    std::fs::write(&src, "#include \"hypercone.h\"\nint main(void) { HcAlpha *a = 0; return hc_alpha_compute(2, 9, &a); }\n").unwrap();
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = match Command::new(cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(dir.join("include"))
            .arg(&src)
            .status()
        {
            Ok(s) => s,
            Err(e) => {
                eprintln!("skipping {lang} header check: {cc} unavailable ({e})");
                continue;
            }
        };
        assert!(status.success(), "{lang} compile of the header failed");
    }
    std::fs::remove_file(&src).unwrap();
}
