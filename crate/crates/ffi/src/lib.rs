//! C ABI over `bailey-zeta`.
//!
//! Objects are opaque handles created by `*_new` functions and released by
//! the matching `*_free`. Every fallible call returns a `BzStatus`; on
//! failure `bz_last_error` describes the problem on the calling thread.
//! Strings returned by the library are released with `bz_string_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use bailey_zeta::bailey::{Outcome, PairDefinition};
use bailey_zeta::limits::{self, ConvergenceReport, Extrapolation};
use bailey_zeta::qcore::{PrecisionContext, SummationPolicy};
use bailey_zeta::weights::{ArithmeticWeight, GaussianRational};
use bailey_zeta::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BzStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    ComputationFailed = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BzOutcome {
    Verified = 0,
    Mismatch = 1,
    Inconclusive = 2,
}

/// Precision and summation settings.
pub struct BzContext {
    inner: PrecisionContext,
}

/// An arithmetic weight.
pub struct BzWeight {
    inner: ArithmeticWeight,
}

/// Result of an outer-limit run.
pub struct BzReport {
    inner: ConvergenceReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(BzStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::PrecisionTooLow { .. }
            | Error::EmptyGrid
            | Error::GridOutOfRange(_)
            | Error::InvalidWeight(_)
            | Error::InvalidParameter(_)
            | Error::NotAbsolutelyConvergent(_)
            | Error::ScheduleTooShort { .. }
            | Error::InvalidSchedule
            | Error::ZeroArgument => BzStatus::InvalidArgument,
            _ => BzStatus::ComputationFailed,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BzStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            BzStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(BzStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(BzStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(BzStatus::NullArgument, format!("{what} is null")))
}

fn out<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(BzStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn exponent(s: *const c_char) -> Result<GaussianRational, Fail> {
    Ok(text(s, "s")?.parse::<GaussianRational>()?)
}

unsafe fn write_opt<T>(p: *mut T, v: T) {
    if !p.is_null() {
        *p = v;
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn bz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn bz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `precision_bits` is the mantissa size of reported values (at least 64).
/// `pairwise` selects pairwise instead of ascending sequential summation.
#[no_mangle]
pub unsafe extern "C" fn bz_context_new(precision_bits: u32, pairwise: bool, out_ctx: *mut *mut BzContext) -> BzStatus {
    guard(|| {
        out(out_ctx, "out_ctx")?;
        let policy = if pairwise { SummationPolicy::Pairwise } else { SummationPolicy::SequentialAscending };
        let inner = PrecisionContext::with_bits(precision_bits)?.with_summation(policy);
        *out_ctx = Box::into_raw(Box::new(BzContext { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bz_context_free(ctx: *mut BzContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// `descriptor` is a preset name (`trivial`, `alternating`, `mod4`), a JSON
/// descriptor, or a path to a JSON descriptor file.
#[no_mangle]
pub unsafe extern "C" fn bz_weight_new(descriptor: *const c_char, out_weight: *mut *mut BzWeight) -> BzStatus {
    guard(|| {
        out(out_weight, "out_weight")?;
        let descriptor = text(descriptor, "descriptor")?;
        let inner = if descriptor.trim_start().starts_with('{') {
            ArithmeticWeight::from_json(descriptor)?
        } else {
            ArithmeticWeight::resolve(descriptor)?
        };
        *out_weight = Box::into_raw(Box::new(BzWeight { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bz_weight_free(weight: *mut BzWeight) {
    if !weight.is_null() {
        drop(Box::from_raw(weight));
    }
}

/// `a_n(s)` rounded to double. `s` is text such as `2` or `3/2+1i`.
#[no_mangle]
pub unsafe extern "C" fn bz_a_n(
    ctx: *const BzContext,
    weight: *const BzWeight,
    s: *const c_char,
    n: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BzStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        let weight = handle(weight, "weight")?;
        out(out_re, "out_re")?;
        let s = exponent(s)?;
        let v = limits::a_n(&weight.inner, &s, n, &ctx.inner)?;
        *out_re = v.real().to_f64();
        write_opt(out_im, v.imag().to_f64());
        Ok(())
    })
}

/// Runs the outer limit over `schedule[0..len]`. `accel` is
/// `polynomial[:k]`, `asymptotic[:k]` or `none`; null means the default.
#[no_mangle]
pub unsafe extern "C" fn bz_outer_limit(
    ctx: *const BzContext,
    weight: *const BzWeight,
    s: *const c_char,
    schedule: *const u64,
    len: usize,
    accel: *const c_char,
    out_report: *mut *mut BzReport,
) -> BzStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        let weight = handle(weight, "weight")?;
        out(out_report, "out_report")?;
        let s = exponent(s)?;
        if schedule.is_null() && len > 0 {
            return Err(Fail(BzStatus::NullArgument, "schedule is null".into()));
        }
        let schedule = if len == 0 { &[][..] } else { std::slice::from_raw_parts(schedule, len) };
        let accel = if accel.is_null() { Extrapolation::default() } else { text(accel, "accel")?.parse::<Extrapolation>()? };
        let inner = limits::outer_limit(&weight.inner, &s, schedule, &accel, &ctx.inner)?;
        *out_report = Box::into_raw(Box::new(BzReport { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bz_report_free(report: *mut BzReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Extrapolated `L(s, chi)/sqrt(pi)`, its unscaled value and error estimate.
/// Any output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn bz_report_value(
    report: *const BzReport,
    out_re: *mut f64,
    out_im: *mut f64,
    out_unscaled_re: *mut f64,
    out_unscaled_im: *mut f64,
    out_err_est: *mut f64,
) -> BzStatus {
    guard(|| {
        let r = &handle(report, "report")?.inner;
        write_opt(out_re, r.extrapolated.real().to_f64());
        write_opt(out_im, r.extrapolated.imag().to_f64());
        let u = r.unscaled();
        write_opt(out_unscaled_re, u.real().to_f64());
        write_opt(out_unscaled_im, u.imag().to_f64());
        write_opt(out_err_est, r.err_est.to_f64());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bz_report_record_count(report: *const BzReport, out_count: *mut usize) -> BzStatus {
    guard(|| {
        let r = &handle(report, "report")?.inner;
        out(out_count, "out_count")?;
        *out_count = r.records.len();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn bz_report_record(
    report: *const BzReport,
    index: usize,
    out_n: *mut u64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_err_est: *mut f64,
) -> BzStatus {
    guard(|| {
        let r = &handle(report, "report")?.inner;
        let rec = r
            .records
            .get(index)
            .ok_or_else(|| Fail(BzStatus::InvalidArgument, format!("record {index} out of range")))?;
        write_opt(out_n, rec.n);
        write_opt(out_re, rec.value.real().to_f64());
        write_opt(out_im, rec.value.imag().to_f64());
        write_opt(out_err_est, rec.err_est.to_f64());
        Ok(())
    })
}

/// Full-precision JSON rendering. Release the string with `bz_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bz_report_to_json(report: *const BzReport, timings: bool, out_json: *mut *mut c_char) -> BzStatus {
    guard(|| {
        let r = &handle(report, "report")?.inner;
        out(out_json, "out_json")?;
        let json = if timings { r.to_json() } else { r.clone().without_timings().to_json() };
        *out_json = CString::new(json.to_string()).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Named constant over the default schedule: `catalan`, `zeta2` and
/// `beta4` give `L/sqrt(pi)`, `gamma` gives `gamma/sqrt(pi)`.
#[no_mangle]
pub unsafe extern "C" fn bz_constant(
    ctx: *const BzContext,
    name: *const c_char,
    out_value: *mut f64,
    out_err_est: *mut f64,
) -> BzStatus {
    guard(|| {
        let ctx = handle(ctx, "ctx")?;
        out(out_value, "out_value")?;
        let name = text(name, "name")?;
        let schedule = limits::geometric_schedule(64, 2, 7)?;
        let (chi, s) = match name {
            "catalan" => (ArithmeticWeight::mod4(), GaussianRational::from_integer(2)),
            "zeta2" => (ArithmeticWeight::trivial(), GaussianRational::from_integer(2)),
            "beta4" => (ArithmeticWeight::mod4(), GaussianRational::from_integer(4)),
            "gamma" => {
                let rep = limits::euler_mascheroni_regularized(
                    &limits::default_delta_grid(),
                    &schedule,
                    &limits::REGULARIZATION_ACCEL,
                    &ctx.inner,
                )?;
                *out_value = rep.extrapolated_gamma_over_sqrt_pi.real().to_f64();
                write_opt(out_err_est, rep.err_est.to_f64());
                return Ok(());
            }
            other => return Err(Fail(BzStatus::InvalidArgument, format!("unknown constant `{other}`"))),
        };
        let rep = limits::outer_limit(&chi, &s, &schedule, &Extrapolation::default(), &ctx.inner)?;
        *out_value = rep.extrapolated.real().to_f64();
        write_opt(out_err_est, rep.err_est.to_f64());
        Ok(())
    })
}

/// Verifies a TOML pair definition under each of its `a` candidates.
/// `out_n` and `out_power` locate the first mismatch (`-1` when absent).
#[no_mangle]
pub unsafe extern "C" fn bz_verify_pair_file(
    path: *const c_char,
    out_outcome: *mut BzOutcome,
    out_n: *mut i64,
    out_power: *mut i64,
) -> BzStatus {
    guard(|| {
        let path = text(path, "path")?;
        out(out_outcome, "out_outcome")?;
        let def = PairDefinition::load(Path::new(path)).map_err(|e| Fail(BzStatus::ParseError, format!("{path}:{e}")))?;
        let search = def.verify(None, None)?;
        let outcomes: Vec<&Outcome> = search.reports.iter().map(|(_, r)| &r.outcome).collect();
        let (outcome, n, power) = if search.validated().is_some() {
            (BzOutcome::Verified, -1, -1)
        } else if outcomes.iter().any(|o| matches!(o, Outcome::Inconclusive { .. })) {
            (BzOutcome::Inconclusive, -1, -1)
        } else {
            match outcomes.first() {
                Some(Outcome::Mismatch { n, power }) => {
                    (BzOutcome::Mismatch, *n as i64, power.map_or(-1, |p| p as i64))
                }
                _ => (BzOutcome::Inconclusive, -1, -1),
            }
        };
        *out_outcome = outcome;
        write_opt(out_n, n);
        write_opt(out_power, power);
        Ok(())
    })
}
