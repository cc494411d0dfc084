//! Exercises the C entry points from Rust: ownership transfer, error
//! codes, the thread-local error message, and agreement with the
//! library's native JSON output.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use afpcalc::dsl::{parse_problem, result_to_json};
use afpcalc::engine::compute;
use afpcalc_ffi::{
    afp_compute, afp_compute_json, afp_last_error_message, afp_problem_free, afp_problem_parse,
    afp_result_fdim, afp_result_free, afp_result_json, afp_result_status, afp_string_free,
    afp_version, AfpCode, AfpProblem, AfpResult,
};

const RESOLVED_DOC: &str = "\
algebra A {
  summand a0 { kind = ifgf(2); weight = 1; }
}

algebra B {
  summand b0 { kind = ifgf(2); weight = 1; }
}

algebra D {
  summand d0 { kind = matrix(1); weight = 1; }
}

embed D into A {
  d0 -> { a0: trace 1 };
}

embed D into B {
  d0 -> { b0: trace 1 };
}
";

const PARTIAL_DOC: &str = "\
algebra A {
  summand a0 { kind = matrix(2); weight = 1; }
}

algebra B {
  summand b0 { kind = matrix(2); weight = 1; }
}

algebra D {
  summand d0 { kind = matrix(1); weight = 1/2; }
  summand d1 { kind = matrix(1); weight = 1/2; }
}

embed D into A {
  d0 -> { a0: mult 1 };
  d1 -> { a0: mult 1 };
}

embed D into B {
  d0 -> { b0: mult 1 };
  d1 -> { b0: mult 1 };
}
";

const BAD_WEIGHT_DOC: &str = "\
algebra A {
  summand a0 { kind = ifgf(2); weight = 1; }
}

algebra B {
  summand b0 { kind = ifgf(2); weight = 1/2; }
}

algebra D {
  summand d0 { kind = matrix(1); weight = 1; }
}

embed D into A {
  d0 -> { a0: trace 1 };
}

embed D into B {
  d0 -> { b0: trace 1/2 };
}
";

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null(), "expected a string");
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    afp_string_free(p);
    s
}

fn last_error() -> String {
    take_string(afp_last_error_message())
}

fn parse(doc: &str) -> *mut AfpProblem {
    let text = CString::new(doc).unwrap();
    let mut handle: *mut AfpProblem = ptr::null_mut();
    let code = afp_problem_parse(text.as_ptr(), &mut handle);
    assert_eq!(code, AfpCode::Ok, "{}", last_error());
    assert!(!handle.is_null());
    handle
}

#[test]
fn parse_compute_inspect_free() {
    let problem = parse(RESOLVED_DOC);
    let mut result: *mut AfpResult = ptr::null_mut();
    assert_eq!(afp_compute(problem, &mut result), AfpCode::Ok);
    afp_problem_free(problem);

    assert_eq!(afp_result_status(result), 0);
    assert_eq!(take_string(afp_result_fdim(result)), "4");

    let json = take_string(afp_result_json(result, false));
    let expected = {
        let problem = parse_problem(RESOLVED_DOC).unwrap().to_problem().unwrap();
        let mut report = compute(&problem);
        report.certificate.clear();
        result_to_json(&report)
    };
    assert_eq!(json, expected);

    let with_cert = take_string(afp_result_json(result, true));
    assert!(with_cert.contains("\"rule\":"));
    assert!(!json.contains("\"rule\":"));
    afp_result_free(result);
}

#[test]
fn partial_status_maps_to_two() {
    let problem = parse(PARTIAL_DOC);
    let mut result: *mut AfpResult = ptr::null_mut();
    assert_eq!(afp_compute(problem, &mut result), AfpCode::Ok);
    afp_problem_free(problem);
    assert_eq!(afp_result_status(result), 2);
    // The guaranteed free-dimension value is reported even when the
    // structure is only partially resolved.
    assert_eq!(take_string(afp_result_fdim(result)), "1");
    afp_result_free(result);
}

#[test]
fn one_shot_compute_matches_the_two_step_path() {
    let text = CString::new(RESOLVED_DOC).unwrap();
    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(
        afp_compute_json(text.as_ptr(), true, &mut json),
        AfpCode::Ok
    );
    let one_shot = take_string(json);

    let problem = parse(RESOLVED_DOC);
    let mut result: *mut AfpResult = ptr::null_mut();
    assert_eq!(afp_compute(problem, &mut result), AfpCode::Ok);
    afp_problem_free(problem);
    let two_step = take_string(afp_result_json(result, true));
    afp_result_free(result);

    assert_eq!(one_shot, two_step);
}

#[test]
fn syntax_errors_set_a_message() {
    let text = CString::new("algebra A { not a document").unwrap();
    let mut handle: *mut AfpProblem = ptr::null_mut();
    assert_eq!(
        afp_problem_parse(text.as_ptr(), &mut handle),
        AfpCode::ParseError
    );
    assert!(handle.is_null());
    let message = last_error();
    assert!(
        message.contains(':'),
        "diagnostic names a position: {message}"
    );
}

#[test]
fn validation_errors_are_distinguished_from_syntax_errors() {
    let text = CString::new(BAD_WEIGHT_DOC).unwrap();
    let mut handle: *mut AfpProblem = ptr::null_mut();
    assert_eq!(
        afp_problem_parse(text.as_ptr(), &mut handle),
        AfpCode::ValidationError
    );
    assert!(handle.is_null());
    assert!(last_error().contains('B'), "message names the bad algebra");
}

#[test]
fn null_arguments_are_rejected() {
    let mut handle: *mut AfpProblem = ptr::null_mut();
    assert_eq!(
        afp_problem_parse(ptr::null(), &mut handle),
        AfpCode::NullArgument
    );
    let text = CString::new(RESOLVED_DOC).unwrap();
    assert_eq!(
        afp_problem_parse(text.as_ptr(), ptr::null_mut()),
        AfpCode::NullArgument
    );
    let mut result: *mut AfpResult = ptr::null_mut();
    assert_eq!(afp_compute(ptr::null(), &mut result), AfpCode::NullArgument);
    assert_eq!(afp_result_status(ptr::null()), -1);
    assert!(afp_result_fdim(ptr::null()).is_null());
    assert!(afp_result_json(ptr::null(), true).is_null());
    afp_problem_free(ptr::null_mut());
    afp_result_free(ptr::null_mut());
    afp_string_free(ptr::null_mut());
}

#[test]
fn invalid_utf8_is_rejected() {
    let text = CString::new([0xffu8, 0xfe].as_slice()).unwrap();
    let mut handle: *mut AfpProblem = ptr::null_mut();
    assert_eq!(
        afp_problem_parse(text.as_ptr(), &mut handle),
        AfpCode::InvalidUtf8
    );
    assert!(last_error().contains("UTF-8"));
}

#[test]
fn error_message_clears_on_success() {
    let bad = CString::new("nonsense").unwrap();
    let mut handle: *mut AfpProblem = ptr::null_mut();
    assert_eq!(
        afp_problem_parse(bad.as_ptr(), &mut handle),
        AfpCode::ParseError
    );
    assert!(!last_error().is_empty());
    afp_problem_free(parse(RESOLVED_DOC));
    assert!(afp_last_error_message().is_null());
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(afp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
