//! C ABI for `robf-core`.
//!
//! Instances and solve reports are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`RobfStatus`]; on failure the message is available from
//! [`robf_last_error`] on the same thread. Strings returned through `char**`
//! out-parameters must be released with [`robf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use robf::error::Error;
use robf::io::{parse_instance, write_instance};
use robf::mip::export_mip;
use robf::solvers::{solve, MethodChoice, SolveOptions, SolveReport};
use robf::Instance;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInstance = 4,
    DimensionMismatch = 5,
    InfeasibleSolution = 6,
    BudgetExceeded = 7,
    Precondition = 8,
    Numerical = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Opaque validated instance.
pub struct RobfInstance {
    inner: Instance,
}

/// Opaque solve result.
pub struct RobfReport {
    inner: SolveReport,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RobfEvaluation {
    pub upper: f64,
    pub lower: f64,
    pub hurwicz: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> RobfStatus {
    match e {
        Error::Parse(_) => RobfStatus::ParseError,
        Error::InvalidInstance(_) | Error::IndexOutOfRange { .. } | Error::NotNormal { .. } => RobfStatus::InvalidInstance,
        Error::DimensionMismatch { .. } => RobfStatus::DimensionMismatch,
        Error::InfeasibleSolution { .. } | Error::EmptyFeasibleSet => RobfStatus::InfeasibleSolution,
        Error::BudgetExceeded { .. } | Error::CombinatorialOverflow { .. } => RobfStatus::BudgetExceeded,
        Error::Precondition(_) | Error::BigMRequired => RobfStatus::Precondition,
        Error::Lp(_) => RobfStatus::Numerical,
    }
}

struct Fail(RobfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RobfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RobfStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RobfStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(RobfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(RobfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn instance_arg<'a>(p: *const RobfInstance) -> Result<&'a Instance, Fail> {
    p.as_ref().map(|i| &i.inner).ok_or_else(|| null("instance"))
}

fn into_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|_| Fail(RobfStatus::Numerical, "output contains a NUL byte".into()))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn robf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates a JSON instance.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn robf_instance_from_json(json: *const c_char, out: *mut *mut RobfInstance) -> RobfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let loaded = parse_instance(text)?;
        *out = Box::into_raw(Box::new(RobfInstance { inner: loaded.instance }));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from [`robf_instance_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn robf_instance_free(inst: *mut RobfInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of scenarios, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn robf_instance_num_scenarios(inst: *const RobfInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.num_scenarios())
}

/// Solution dimension, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn robf_instance_dim(inst: *const RobfInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.scenarios.dim)
}

/// Upper and lower expectation and Hurwicz value of `x`.
///
/// # Safety
/// `x` must point to `len` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn robf_evaluate(inst: *const RobfInstance, x: *const f64, len: usize, out: *mut RobfEvaluation) -> RobfStatus {
    guard(|| {
        let inst = instance_arg(inst)?;
        let x = slice_arg(x, len, "x")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = robf::evaluate(inst, x)?;
        *out = RobfEvaluation { upper: e.upper_expectation, lower: e.lower_expectation, hurwicz: e.hurwicz };
        Ok(())
    })
}

/// `Bel(A)` for the 1-based scenario indices in `set`.
///
/// # Safety
/// `set` must point to `len` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn robf_belief(inst: *const RobfInstance, set: *const usize, len: usize, out: *mut f64) -> RobfStatus {
    guard(|| {
        let inst = instance_arg(inst)?;
        let set = slice_arg(set, len, "set")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let k = inst.num_scenarios();
        let zero_based = set
            .iter()
            .map(|&i| i.checked_sub(1).filter(|&j| j < k).ok_or(Error::IndexOutOfRange { index: i, num_scenarios: k }))
            .collect::<Result<Vec<_>, _>>()?;
        *out = inst.mass.belief(&zero_based)?;
        Ok(())
    })
}

/// Solves with the named method (`"auto"`, `"decomposition"`, ...); a null
/// method means `"auto"` and a zero budget the library default.
///
/// # Safety
/// `method` must be null or NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn robf_solve(inst: *const RobfInstance, method: *const c_char, budget: u64, out: *mut *mut RobfReport) -> RobfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = instance_arg(inst)?;
        let choice: MethodChoice = if method.is_null() { MethodChoice::Auto } else { str_arg(method, "method")?.parse()? };
        let mut opts = SolveOptions::default();
        if budget > 0 {
            opts.budget = budget;
        }
        let report = solve(inst, choice, &opts)?;
        *out = Box::into_raw(Box::new(RobfReport { inner: report }));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`robf_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn robf_report_free(report: *mut RobfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Hurwicz value of the reported solution; NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn robf_report_objective(report: *const RobfReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.objective)
}

/// Length of the solution vector; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn robf_report_dim(report: *const RobfReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.x.len())
}

/// Copies the solution into `buf`, which must hold `robf_report_dim` values.
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn robf_report_x(report: *const RobfReport, buf: *mut f64, len: usize) -> RobfStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        let x = &report.inner.x;
        if len < x.len() {
            return Err(Fail(RobfStatus::BufferTooSmall, format!("buffer holds {len} values, need {}", x.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        std::slice::from_raw_parts_mut(buf, x.len()).copy_from_slice(x);
        Ok(())
    })
}

/// Method tag of the report as a static string; empty for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn robf_report_method(report: *const RobfReport) -> *const c_char {
    let tag: &'static CStr = match report.as_ref().map(|r| r.inner.method.tag()) {
        Some("decomposition") => c"decomposition",
        Some("exhaustive") => c"exhaustive",
        Some("alpha1-lp") => c"alpha1-lp",
        Some("z2-lp") => c"z2-lp",
        Some("approx-v") => c"approx-v",
        Some("approx-mean") => c"approx-mean",
        _ => c"",
    };
    tag.as_ptr()
}

/// The report as a JSON object.
///
/// # Safety
/// `out` must be valid; release the string with [`robf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn robf_report_json(report: *const RobfReport, out: *mut *mut c_char) -> RobfStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let text = serde_json::to_string(&report.inner).map_err(|e| Fail(RobfStatus::Numerical, e.to_string()))?;
        *out = into_c_string(text)?;
        Ok(())
    })
}

/// Reads a JSON instance (typically with `fuzzy_mass`) and writes it back
/// with the reduced crisp mass.
///
/// # Safety
/// `json` must be NUL-terminated and `out` valid; release the string with
/// [`robf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn robf_reduce_fuzzy_json(json: *const c_char, out: *mut *mut c_char) -> RobfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let loaded = parse_instance(str_arg(json, "json")?)?;
        *out = into_c_string(write_instance(&loaded.instance))?;
        Ok(())
    })
}

/// The big-M model in LP format. A NaN `big_m` selects the default.
///
/// # Safety
/// `out` must be valid; release the string with [`robf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn robf_export_mip(inst: *const RobfInstance, big_m: f64, out: *mut *mut c_char) -> RobfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let inst = instance_arg(inst)?;
        let m = if big_m.is_nan() { None } else { Some(big_m) };
        *out = into_c_string(export_mip(inst, m)?.to_lp_string())?;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn robf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
