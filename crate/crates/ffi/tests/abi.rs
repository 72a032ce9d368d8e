use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bailey_zeta_ffi::*;

fn fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = bz_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Handles {
    ctx: *mut BzContext,
    weight: *mut BzWeight,
}

impl Handles {
    fn new(weight: &str) -> Self {
        let mut ctx = ptr::null_mut();
        let mut w = ptr::null_mut();
        let descriptor = CString::new(weight).unwrap();
        unsafe {
            assert_eq!(bz_context_new(192, false, &mut ctx), BzStatus::Ok);
            assert_eq!(bz_weight_new(descriptor.as_ptr(), &mut w), BzStatus::Ok);
        }
        Handles { ctx, weight: w }
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            bz_weight_free(self.weight);
            bz_context_free(self.ctx);
        }
    }
}

#[test]
fn a_n_small_values() {
    let h = Handles::new("trivial");
    let s = CString::new("2").unwrap();
    let (mut re, mut im) = (f64::NAN, f64::NAN);
    unsafe {
        assert_eq!(bz_a_n(h.ctx, h.weight, s.as_ptr(), 1, &mut re, &mut im), BzStatus::Ok);
    }
    assert_eq!((re, im), (0.25, 0.0));
    unsafe {
        assert_eq!(bz_a_n(h.ctx, h.weight, s.as_ptr(), 2, &mut re, ptr::null_mut()), BzStatus::Ok);
    }
    assert!((re - 2f64.sqrt() / 16.0 * 4.25).abs() < 1e-15);
}

#[test]
fn outer_limit_report_round_trip() {
    let h = Handles::new("mod4");
    let s = CString::new("2").unwrap();
    let schedule = [64u64, 128, 256, 512, 1024, 2048, 4096];
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(
            bz_outer_limit(h.ctx, h.weight, s.as_ptr(), schedule.as_ptr(), schedule.len(), ptr::null(), &mut rep),
            BzStatus::Ok
        );
        let (mut re, mut im, mut ure, mut uim, mut err) = (0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(bz_report_value(rep, &mut re, &mut im, &mut ure, &mut uim, &mut err), BzStatus::Ok);
        let catalan = 0.915_965_594_177_219;
        assert!((ure - catalan).abs() < 1e-8, "{ure}");
        assert!((re - catalan / std::f64::consts::PI.sqrt()).abs() < 1e-8);
        assert_eq!(im, 0.0);
        assert!(err > 0.0 && err < 1e-6);

        let mut count = 0usize;
        assert_eq!(bz_report_record_count(rep, &mut count), BzStatus::Ok);
        assert_eq!(count, schedule.len());
        let mut n = 0u64;
        assert_eq!(bz_report_record(rep, 6, &mut n, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), BzStatus::Ok);
        assert_eq!(n, 4096);
        assert_eq!(bz_report_record(rep, 7, &mut n, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), BzStatus::InvalidArgument);

        let mut json = ptr::null_mut();
        assert_eq!(bz_report_to_json(rep, false, &mut json), BzStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        bz_string_free(json);
        assert!(text.starts_with("{\"weight\":\"mod4\""), "{text}");
        assert!(text.contains("\"elapsed_ms\":0"));
        bz_report_free(rep);
    }
}

#[test]
fn errors_are_reported() {
    let h = Handles::new("trivial");
    let one = CString::new("1").unwrap();
    let bad = CString::new("two").unwrap();
    let mut re = 0.0;
    unsafe {
        assert_eq!(bz_a_n(h.ctx, h.weight, one.as_ptr(), 4, &mut re, ptr::null_mut()), BzStatus::InvalidArgument);
        assert!(last_error().contains("Re(s)"), "{}", last_error());
        assert_eq!(bz_a_n(h.ctx, h.weight, bad.as_ptr(), 4, &mut re, ptr::null_mut()), BzStatus::InvalidArgument);
        assert_eq!(bz_a_n(ptr::null(), h.weight, one.as_ptr(), 4, &mut re, ptr::null_mut()), BzStatus::NullArgument);
        assert!(last_error().contains("ctx"));

        let mut ctx = ptr::null_mut();
        assert_eq!(bz_context_new(8, false, &mut ctx), BzStatus::InvalidArgument);
        assert!(ctx.is_null());

        let mut w = ptr::null_mut();
        let nope = CString::new("nope").unwrap();
        assert_eq!(bz_weight_new(nope.as_ptr(), &mut w), BzStatus::InvalidArgument);

        let sched = [64u64, 128];
        let mut rep = ptr::null_mut();
        let two = CString::new("2").unwrap();
        assert_eq!(
            bz_outer_limit(h.ctx, h.weight, two.as_ptr(), sched.as_ptr(), sched.len(), ptr::null(), &mut rep),
            BzStatus::InvalidArgument
        );
        assert!(rep.is_null());

        // success clears the message
        assert_eq!(bz_a_n(h.ctx, h.weight, two.as_ptr(), 1, &mut re, ptr::null_mut()), BzStatus::Ok);
        assert!(bz_last_error().is_null());

        bz_string_free(ptr::null_mut());
        bz_report_free(ptr::null_mut());
    }
}

#[test]
fn weight_from_json_text() {
    let h = Handles::new(r#"{"kind": "periodic", "values": [[1, 0], [0, 0], [-1, 0], [0, 0]]}"#);
    let s = CString::new("2").unwrap();
    let mut re = 0.0;
    unsafe {
        assert_eq!(bz_a_n(h.ctx, h.weight, s.as_ptr(), 1, &mut re, ptr::null_mut()), BzStatus::Ok);
    }
    assert_eq!(re, 0.25);
}

#[test]
fn constants() {
    let h = Handles::new("trivial");
    let name = CString::new("zeta2").unwrap();
    let (mut v, mut err) = (0.0, 0.0);
    unsafe {
        assert_eq!(bz_constant(h.ctx, name.as_ptr(), &mut v, &mut err), BzStatus::Ok);
    }
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((v - zeta2 / std::f64::consts::PI.sqrt()).abs() < 1e-9);
    let bogus = CString::new("pi").unwrap();
    unsafe {
        assert_eq!(bz_constant(h.ctx, bogus.as_ptr(), &mut v, &mut err), BzStatus::InvalidArgument);
    }
}

#[test]
fn pair_files() {
    let mut outcome = BzOutcome::Inconclusive;
    let (mut n, mut p) = (0i64, 0i64);
    unsafe {
        assert_eq!(bz_verify_pair_file(fixture("unit.toml").as_ptr(), &mut outcome, &mut n, &mut p), BzStatus::Ok);
        assert_eq!((outcome, n, p), (BzOutcome::Verified, -1, -1));
        assert_eq!(bz_verify_pair_file(fixture("unit_defect.toml").as_ptr(), &mut outcome, &mut n, &mut p), BzStatus::Ok);
        assert_eq!((outcome, n, p), (BzOutcome::Mismatch, 3, 5));
        assert_eq!(bz_verify_pair_file(fixture("vacuous.toml").as_ptr(), &mut outcome, &mut n, &mut p), BzStatus::Ok);
        assert_eq!(outcome, BzOutcome::Inconclusive);
        assert_eq!(
            bz_verify_pair_file(fixture("missing.toml").as_ptr(), &mut outcome, &mut n, &mut p),
            BzStatus::ParseError
        );
    }
}

#[test]
fn header_is_valid_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/bailey_zeta.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["bz_last_error", "bz_context_new", "bz_outer_limit", "bz_report_to_json", "bz_verify_pair_file", "BZ_STATUS_OK"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).status() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
