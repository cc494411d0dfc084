//! C ABI for the amalgamated-free-product calculator.
//!
//! Handles returned through out-parameters are owned by the caller and
//! released with their matching `_free` function; strings returned by
//! value with [`afp_string_free`]. On any non-`Ok` code the failing
//! call leaves a message retrievable with [`afp_last_error_message`];
//! the message slot is thread-local, so callers on different threads do
//! not race. Every entry point catches panics and converts them into
//! `InternalError` rather than unwinding across the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use afpcalc::dsl::{parse_problem, result_to_json};
use afpcalc::engine::{compute, Problem, ResultReport, Status};

/// Outcome of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AfpCode {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    InternalError = 5,
}

/// A parsed and validated computation input.
pub struct AfpProblem(Problem);

/// A finished computation report.
pub struct AfpResult(ResultReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message)
        .unwrap_or_else(|_| CString::new("error text contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn guard(body: impl FnOnce() -> AfpCode) -> AfpCode {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic".to_string());
            AfpCode::InternalError
        }
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn build_problem(text: &str) -> Result<Problem, (AfpCode, String)> {
    let doc = parse_problem(text).map_err(|ds| (AfpCode::ParseError, join(&ds)))?;
    let problem = doc
        .to_problem()
        .map_err(|ds| (AfpCode::ValidationError, join(&ds)))?;
    let violations = problem.validate();
    if !violations.is_empty() {
        return Err((AfpCode::ValidationError, join(&violations)));
    }
    Ok(problem)
}

/// Parses DSL text into a problem handle, running full validation.
///
/// On success writes a handle to `out`; the caller releases it with
/// [`afp_problem_free`].
#[no_mangle]
pub extern "C" fn afp_problem_parse(text: *const c_char, out: *mut *mut AfpProblem) -> AfpCode {
    guard(|| {
        clear_error();
        if text.is_null() || out.is_null() {
            set_error("null argument".to_string());
            return AfpCode::NullArgument;
        }
        unsafe { *out = ptr::null_mut() };
        let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
            set_error("input is not valid UTF-8".to_string());
            return AfpCode::InvalidUtf8;
        };
        match build_problem(text) {
            Ok(problem) => {
                unsafe { *out = Box::into_raw(Box::new(AfpProblem(problem))) };
                AfpCode::Ok
            }
            Err((code, message)) => {
                set_error(message);
                code
            }
        }
    })
}

/// Releases a problem handle. A null pointer is ignored.
#[no_mangle]
pub extern "C" fn afp_problem_free(problem: *mut AfpProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Runs the calculator on a parsed problem.
///
/// Always produces a result handle on `Ok`, even when the computation
/// itself reports an error status; inspect [`afp_result_status`].
#[no_mangle]
pub extern "C" fn afp_compute(problem: *const AfpProblem, out: *mut *mut AfpResult) -> AfpCode {
    guard(|| {
        clear_error();
        if problem.is_null() || out.is_null() {
            set_error("null argument".to_string());
            return AfpCode::NullArgument;
        }
        let report = compute(unsafe { &(*problem).0 });
        unsafe { *out = Box::into_raw(Box::new(AfpResult(report))) };
        AfpCode::Ok
    })
}

/// Releases a result handle. A null pointer is ignored.
#[no_mangle]
pub extern "C" fn afp_result_free(result: *mut AfpResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// Status of a computation: 0 resolved, 2 partial, 1 error — the same
/// mapping the command-line tool uses for exit codes. Returns -1 for a
/// null handle.
#[no_mangle]
pub extern "C" fn afp_result_status(result: *const AfpResult) -> i32 {
    if result.is_null() {
        return -1;
    }
    match unsafe { &(*result).0 }.status {
        Status::Resolved => 0,
        Status::Partial => 2,
        Status::Error => 1,
    }
}

/// The free-dimension value as a rational string (`"7/2"`, `"inf"`),
/// or null when the computation produced none. Free with
/// [`afp_string_free`].
#[no_mangle]
pub extern "C" fn afp_result_fdim(result: *const AfpResult) -> *mut c_char {
    if result.is_null() {
        return ptr::null_mut();
    }
    match &unsafe { &(*result).0 }.fdim {
        Some(value) => CString::new(value.to_string())
            .expect("rational text has no NUL bytes")
            .into_raw(),
        None => ptr::null_mut(),
    }
}

/// The full report as JSON, optionally with the derivation certificate.
/// Free with [`afp_string_free`]. Returns null for a null handle.
#[no_mangle]
pub extern "C" fn afp_result_json(
    result: *const AfpResult,
    include_certificate: bool,
) -> *mut c_char {
    if result.is_null() {
        return ptr::null_mut();
    }
    let mut report = unsafe { &(*result).0 }.clone();
    if !include_certificate {
        report.certificate.clear();
    }
    match CString::new(result_to_json(&report)) {
        Ok(json) => json.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}

/// One-shot convenience: parse, validate, compute and serialize.
///
/// On `Ok` writes a JSON string to `out_json`, owned by the caller.
#[no_mangle]
pub extern "C" fn afp_compute_json(
    text: *const c_char,
    include_certificate: bool,
    out_json: *mut *mut c_char,
) -> AfpCode {
    guard(|| {
        clear_error();
        if text.is_null() || out_json.is_null() {
            set_error("null argument".to_string());
            return AfpCode::NullArgument;
        }
        unsafe { *out_json = ptr::null_mut() };
        let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
            set_error("input is not valid UTF-8".to_string());
            return AfpCode::InvalidUtf8;
        };
        let problem = match build_problem(text) {
            Ok(problem) => problem,
            Err((code, message)) => {
                set_error(message);
                return code;
            }
        };
        let mut report = compute(&problem);
        if !include_certificate {
            report.certificate.clear();
        }
        match CString::new(result_to_json(&report)) {
            Ok(json) => {
                unsafe { *out_json = json.into_raw() };
                AfpCode::Ok
            }
            Err(_) => {
                set_error("report text contained a NUL byte".to_string());
                AfpCode::InternalError
            }
        }
    })
}

/// Releases a string produced by this library. A null pointer is
/// ignored.
#[no_mangle]
pub extern "C" fn afp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// A copy of the message attached to the most recent failing call on
/// this thread, or null when the last call succeeded. Free with
/// [`afp_string_free`].
#[no_mangle]
pub extern "C" fn afp_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// The library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn afp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
