use std::ffi::{CStr, CString};
use std::io::Write;
use std::process::{Command, Stdio};
use std::ptr;

use jamloc_ffi::*;

fn last_error() -> String {
    let p = jl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(jl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn enclosing_circle_of_triangle() {
    let pts = [
        JlPoint { x: 0.0, y: 0.0 },
        JlPoint { x: 4.0, y: 0.0 },
        JlPoint { x: 0.0, y: 3.0 },
    ];
    let mut c = JlCircle { x: 0.0, y: 0.0, radius: 0.0 };
    let status = unsafe { jl_min_enclosing_circle(pts.as_ptr(), pts.len(), &mut c) };
    assert_eq!(status, JlStatus::Ok);
    assert!((c.x - 2.0).abs() < 1e-12 && (c.y - 1.5).abs() < 1e-12);
    assert!((c.radius - 2.5).abs() < 1e-12);
    assert!(jl_last_error_message().is_null());
}

#[test]
fn null_and_empty_inputs_are_reported() {
    let mut c = JlCircle { x: 0.0, y: 0.0, radius: 0.0 };
    let status = unsafe { jl_min_enclosing_circle(ptr::null(), 3, &mut c) };
    assert_eq!(status, JlStatus::NullPointer);
    let status = unsafe { jl_min_enclosing_circle(ptr::null(), 0, &mut c) };
    assert_eq!(status, JlStatus::EmptyPointSet);
    assert!(!last_error().is_empty());
    let pts = [JlPoint { x: 1.0, y: 1.0 }];
    let status = unsafe { jl_min_enclosing_circle(pts.as_ptr(), 1, ptr::null_mut()) };
    assert_eq!(status, JlStatus::NullPointer);
}

#[test]
fn compensation_delta_modes() {
    let mut out = 0.0;
    // 20 dB apart: k = 10.
    let s = unsafe { jl_compensation_delta(-40.0, -20.0, 12.0, JlMode::Paper, &mut out) };
    assert_eq!(s, JlStatus::Ok);
    assert!((out - 10.0).abs() < 1e-12);
    let s = unsafe { jl_compensation_delta(-40.0, -20.0, 12.0, JlMode::Geometric, &mut out) };
    assert_eq!(s, JlStatus::Ok);
    assert!((out - 108.0 / 11.0).abs() < 1e-12);
    let s = unsafe { jl_compensation_delta(-40.0, -20.0, 12.0, JlMode::None, &mut out) };
    assert_eq!(s, JlStatus::InvalidArgument);
}

fn square(obs: *mut JlObservations) {
    let corners = [(40.0, 40.0), (60.0, 40.0), (60.0, 60.0), (40.0, 60.0)];
    for (i, (x, y)) in corners.into_iter().enumerate() {
        let s = unsafe { jl_observations_push(obs, i as u32, x, y, -30.0) };
        assert_eq!(s, JlStatus::Ok);
    }
}

#[test]
fn localize_through_handle() {
    let obs = jl_observations_new();
    square(obs);
    assert_eq!(unsafe { jl_observations_len(obs) }, 4);
    let mut e = JlEstimate { x: 0.0, y: 0.0, method: JlMethod::Cl, fallback: false };
    for method in [JlMethod::Cl, JlMethod::Cj] {
        let s = unsafe { jl_localize(obs, method, JlMode::None, 15.0, &mut e) };
        assert_eq!(s, JlStatus::Ok);
        assert_eq!(e.method, method);
        assert!((e.x - 50.0).abs() < 1e-9 && (e.y - 50.0).abs() < 1e-9);
    }
    let s = unsafe { jl_localize(obs, JlMethod::Gjl, JlMode::Geometric, 15.0, &mut e) };
    assert_eq!(s, JlStatus::Ok);
    assert_eq!(e.method, JlMethod::Gjl);
    assert!(!e.fallback);
    assert!((e.x - 50.0).abs() < 1e-9 && (e.y - 50.0).abs() < 1e-9);
    let s = unsafe { jl_localize(obs, JlMethod::Gjl, JlMode::None, 15.0, &mut e) };
    assert_eq!(s, JlStatus::InvalidArgument);
    unsafe { jl_observations_free(obs) };
}

#[test]
fn gjl_falls_back_on_two_points() {
    let obs = jl_observations_new();
    unsafe {
        jl_observations_push(obs, 0, 0.0, 0.0, -30.0);
        jl_observations_push(obs, 1, 10.0, 0.0, -30.0);
    }
    let mut e = JlEstimate { x: 0.0, y: 0.0, method: JlMethod::Cl, fallback: false };
    let s = unsafe { jl_localize(obs, JlMethod::Gjl, JlMode::Paper, 15.0, &mut e) };
    assert_eq!(s, JlStatus::Ok);
    assert!(e.fallback);
    assert_eq!(e.method, JlMethod::Cj);
    assert!((e.x - 5.0).abs() < 1e-12 && e.y.abs() < 1e-12);
    unsafe { jl_observations_free(obs) };
}

#[test]
fn empty_observations_error() {
    let obs = jl_observations_new();
    let mut e = JlEstimate { x: 0.0, y: 0.0, method: JlMethod::Cl, fallback: false };
    let s = unsafe { jl_localize(obs, JlMethod::Cl, JlMode::None, 15.0, &mut e) };
    assert_ne!(s, JlStatus::Ok);
    assert!(!last_error().is_empty());
    let s = unsafe { jl_observations_push(obs, 0, f64::NAN, 0.0, 0.0) };
    assert_eq!(s, JlStatus::InvalidArgument);
    unsafe { jl_observations_free(obs) };
    let s = unsafe { jl_localize(ptr::null(), JlMethod::Cl, JlMode::None, 15.0, &mut e) };
    assert_eq!(s, JlStatus::NullPointer);
    unsafe { jl_observations_free(ptr::null_mut()) };
}

#[test]
fn experiment_from_json() {
    let cfg = CString::new(r#"{"trials": 20, "master_seed": 42, "methods": ["CL", "CJ"]}"#).unwrap();
    let mut exp: *mut JlExperiment = ptr::null_mut();
    let s = unsafe { jl_experiment_run(cfg.as_ptr(), true, &mut exp) };
    assert_eq!(s, JlStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { jl_experiment_trial_count(exp) }, 20);
    assert_eq!(unsafe { jl_experiment_summary_len(exp) }, 2);
    let mut row = JlSummaryRow {
        method: JlMethod::Gjl,
        mode: JlMode::Paper,
        trials: 0,
        clean: 0,
        fallbacks: 0,
        failures: 0,
        mean_error: 0.0,
        std_error: 0.0,
        median_error: 0.0,
    };
    let s = unsafe { jl_experiment_summary_get(exp, 0, &mut row) };
    assert_eq!(s, JlStatus::Ok);
    assert_eq!(row.method, JlMethod::Cl);
    assert_eq!(row.mode, JlMode::None);
    assert_eq!(row.trials, 20);
    assert_eq!(row.clean + row.fallbacks + row.failures, 20);
    let s = unsafe { jl_experiment_summary_get(exp, 2, &mut row) };
    assert_eq!(s, JlStatus::OutOfRange);

    let csv = unsafe { jl_experiment_trials_csv(exp) };
    let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_owned();
    unsafe { jl_string_free(csv) };
    assert!(text.starts_with("trial_index,"));
    assert_eq!(text.lines().count(), 1 + 20 * 2);

    // Serial execution gives the same table.
    let mut serial: *mut JlExperiment = ptr::null_mut();
    assert_eq!(unsafe { jl_experiment_run(cfg.as_ptr(), false, &mut serial) }, JlStatus::Ok);
    let csv2 = unsafe { jl_experiment_trials_csv(serial) };
    assert_eq!(unsafe { CStr::from_ptr(csv2) }.to_str().unwrap(), text);
    unsafe {
        jl_string_free(csv2);
        jl_experiment_free(serial);
        jl_experiment_free(exp);
    }
}

#[test]
fn bad_config_json() {
    let mut exp: *mut JlExperiment = ptr::null_mut();
    for text in [r#"{"trials": "#, r#"{"bogus": 1}"#, r#"{"trials": 0}"#] {
        let cfg = CString::new(text).unwrap();
        let s = unsafe { jl_experiment_run(cfg.as_ptr(), false, &mut exp) };
        assert_eq!(s, JlStatus::InvalidConfig, "{text}");
        assert!(exp.is_null());
    }
    let s = unsafe { jl_experiment_run(ptr::null(), false, &mut exp) };
    assert_eq!(s, JlStatus::NullPointer);
    assert!(unsafe { jl_experiment_trials_csv(ptr::null()) }.is_null());
}

fn header() -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/jamloc.h");
    std::fs::read_to_string(path).expect("header generated by build script")
}

#[test]
fn header_declares_entry_points() {
    let h = header();
    for sym in [
        "jl_version",
        "jl_last_error_message",
        "jl_string_free",
        "jl_min_enclosing_circle",
        "jl_compensation_delta",
        "jl_observations_new",
        "jl_observations_push",
        "jl_observations_len",
        "jl_observations_free",
        "jl_localize",
        "jl_experiment_run",
        "jl_experiment_trial_count",
        "jl_experiment_summary_len",
        "jl_experiment_summary_get",
        "jl_experiment_trials_csv",
        "jl_experiment_free",
        "typedef struct JlObservations JlObservations;",
        "typedef struct JlExperiment JlExperiment;",
        "JL_STATUS_OK = 0",
    ] {
        assert!(h.contains(sym), "missing {sym}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(mut child) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg("-")
        .stdin(Stdio::piped())
        .spawn()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"#include \"jamloc.h\"\nint main(void) { JlStatus s = JL_STATUS_OK; return (int)s; }\n")
        .unwrap();
    assert!(child.wait().unwrap().success());
}
