//! C ABI over `jamloc`.
//!
//! Every fallible entry point returns a [`JlStatus`]; on failure a message is
//! available from [`jl_last_error_message`] on the same thread. Objects are
//! opaque handles created by `*_new` / `*_run` and released with the matching
//! `*_free`. Strings returned to the caller are freed with [`jl_string_free`].
//!
//! The header `include/jamloc.h` is generated by the build script.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use jamloc::{
    compensation_delta, localize, min_enclosing_circle, run_experiment_with, BoundaryObservation,
    CompensationMode, Error, Estimator, EstimatorSummary, Execution, ExperimentResult, Point2D,
    ScenarioConfig,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    EmptyPointSet = 4,
    DegenerateSegment = 5,
    NearParallelLines = 6,
    NoBoundaryNodes = 7,
    InsufficientBoundaryNodes = 8,
    NoTransverseChord = 9,
    OutOfRange = 10,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JlMethod {
    Cl = 0,
    Cj = 1,
    Gjl = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JlMode {
    Paper = 0,
    Geometric = 1,
    /// Not a GJL estimator.
    None = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JlPoint {
    pub x: f64,
    pub y: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JlCircle {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JlEstimate {
    pub x: f64,
    pub y: f64,
    /// Method that produced the position (CJ when GJL fell back).
    pub method: JlMethod,
    pub fallback: bool,
}

/// Per-estimator summary. Error statistics are NaN when every trial failed.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JlSummaryRow {
    pub method: JlMethod,
    pub mode: JlMode,
    pub trials: usize,
    pub clean: usize,
    pub fallbacks: usize,
    pub failures: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub median_error: f64,
}

/// Opaque list of boundary observations.
pub struct JlObservations {
    inner: Vec<BoundaryObservation>,
}

/// Opaque experiment result.
pub struct JlExperiment {
    inner: ExperimentResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> JlStatus {
    match err {
        Error::EmptyPointSet => JlStatus::EmptyPointSet,
        Error::DegenerateSegment | Error::DegenerateLine { .. } => JlStatus::DegenerateSegment,
        Error::NearParallelLines { .. } => JlStatus::NearParallelLines,
        Error::NoBoundaryNodes => JlStatus::NoBoundaryNodes,
        Error::InsufficientBoundaryNodes { .. } => JlStatus::InsufficientBoundaryNodes,
        Error::NoTransverseChord { .. } => JlStatus::NoTransverseChord,
        Error::InvalidConfig(_) => JlStatus::InvalidConfig,
        Error::NonFinitePoint { .. }
        | Error::NonPositiveDistance { .. }
        | Error::BelowMinimumDistance { .. } => JlStatus::InvalidArgument,
    }
}

fn fail(status: JlStatus, msg: impl Into<String>) -> JlStatus {
    set_last_error(msg);
    status
}

fn from_error(err: Error) -> JlStatus {
    let status = status_of(&err);
    fail(status, err.to_string())
}

/// Runs `f`, turning panics into [`JlStatus::Panic`].
fn guard(f: impl FnOnce() -> JlStatus) -> JlStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(JlStatus::Panic, "internal panic"),
    }
}

fn estimator(method: JlMethod, mode: JlMode) -> Result<Estimator, JlStatus> {
    match (method, mode) {
        (JlMethod::Cl, _) => Ok(Estimator::Cl),
        (JlMethod::Cj, _) => Ok(Estimator::Cj),
        (JlMethod::Gjl, JlMode::Paper) => Ok(Estimator::Gjl(CompensationMode::PaperEq8)),
        (JlMethod::Gjl, JlMode::Geometric) => Ok(Estimator::Gjl(CompensationMode::GeometricD0)),
        (JlMethod::Gjl, JlMode::None) => Err(fail(
            JlStatus::InvalidArgument,
            "GJL needs a compensation mode",
        )),
    }
}

fn method_of(m: jamloc::Method) -> JlMethod {
    match m {
        jamloc::Method::Cl => JlMethod::Cl,
        jamloc::Method::Cj => JlMethod::Cj,
        jamloc::Method::Gjl => JlMethod::Gjl,
    }
}

fn mode_of(est: Estimator) -> JlMode {
    match est.mode() {
        Some(CompensationMode::PaperEq8) => JlMode::Paper,
        Some(CompensationMode::GeometricD0) => JlMode::Geometric,
        None => JlMode::None,
    }
}

fn compensation_mode(mode: JlMode) -> Result<CompensationMode, JlStatus> {
    match mode {
        JlMode::Paper => Ok(CompensationMode::PaperEq8),
        JlMode::Geometric => Ok(CompensationMode::GeometricD0),
        JlMode::None => Err(fail(JlStatus::InvalidArgument, "mode must be paper or geometric")),
    }
}

unsafe fn input_slice<'a, T>(data: *const T, len: usize) -> Result<&'a [T], JlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(JlStatus::NullPointer, "data is null"));
    }
    Ok(slice::from_raw_parts(data, len))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($p:expr, $name:literal) => {
        if $p.is_null() {
            return fail(JlStatus::NullPointer, concat!($name, " is null"));
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn jl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// `jl_*` call on the same thread.
#[no_mangle]
pub extern "C" fn jl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn jl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Minimum enclosing circle of `len` points.
#[no_mangle]
pub unsafe extern "C" fn jl_min_enclosing_circle(
    points: *const JlPoint,
    len: usize,
    out: *mut JlCircle,
) -> JlStatus {
    guard(|| {
        non_null!(out, "out");
        let pts = try_status!(input_slice(points, len));
        let pts: Vec<Point2D> = pts.iter().map(|p| Point2D::new(p.x, p.y)).collect();
        match min_enclosing_circle(&pts) {
            Ok(c) => {
                *out = JlCircle {
                    x: c.center.x,
                    y: c.center.y,
                    radius: c.radius,
                };
                JlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// GJL perpendicular offset for a chord of length `d12` whose endpoints sense
/// `p1 <= p2` dBm.
#[no_mangle]
pub unsafe extern "C" fn jl_compensation_delta(
    p1: f64,
    p2: f64,
    d12: f64,
    mode: JlMode,
    out: *mut f64,
) -> JlStatus {
    guard(|| {
        non_null!(out, "out");
        let mode = try_status!(compensation_mode(mode));
        match compensation_delta(p1, p2, d12, mode) {
            Ok(v) => {
                *out = v;
                JlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub extern "C" fn jl_observations_new() -> *mut JlObservations {
    Box::into_raw(Box::new(JlObservations { inner: Vec::new() }))
}

#[no_mangle]
pub unsafe extern "C" fn jl_observations_free(obs: *mut JlObservations) {
    if !obs.is_null() {
        drop(Box::from_raw(obs));
    }
}

/// Appends one boundary observation (`power` in dBm).
#[no_mangle]
pub unsafe extern "C" fn jl_observations_push(
    obs: *mut JlObservations,
    node_id: u32,
    x: f64,
    y: f64,
    power: f64,
) -> JlStatus {
    guard(|| {
        non_null!(obs, "observations");
        if !(x.is_finite() && y.is_finite() && power.is_finite()) {
            return fail(JlStatus::InvalidArgument, "observation values must be finite");
        }
        (*obs).inner.push(BoundaryObservation {
            node_id,
            position: Point2D::new(x, y),
            received_power: power,
        });
        JlStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn jl_observations_len(obs: *const JlObservations) -> usize {
    if obs.is_null() {
        0
    } else {
        (*obs).inner.len()
    }
}

/// Localizes with one method. GJL answers chord failures with CJ and sets
/// `out->fallback`; `mode` is ignored for CL and CJ.
#[no_mangle]
pub unsafe extern "C" fn jl_localize(
    obs: *const JlObservations,
    method: JlMethod,
    mode: JlMode,
    min_angle_deg: f64,
    out: *mut JlEstimate,
) -> JlStatus {
    guard(|| {
        non_null!(obs, "observations");
        non_null!(out, "out");
        let est = try_status!(estimator(method, mode));
        match localize(est, &(*obs).inner, min_angle_deg) {
            Ok(o) => {
                *out = JlEstimate {
                    x: o.estimate.position.x,
                    y: o.estimate.position.y,
                    method: method_of(o.estimate.method),
                    fallback: o.fallback.is_some(),
                };
                JlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Runs the scenario described by the JSON document `config_json` and stores
/// a new handle in `*out`. `parallel` selects multi-threaded trial execution;
/// results are identical either way.
#[no_mangle]
pub unsafe extern "C" fn jl_experiment_run(
    config_json: *const c_char,
    parallel: bool,
    out: *mut *mut JlExperiment,
) -> JlStatus {
    guard(|| {
        non_null!(config_json, "config_json");
        non_null!(out, "out");
        *out = ptr::null_mut();
        let text = match CStr::from_ptr(config_json).to_str() {
            Ok(t) => t,
            Err(_) => return fail(JlStatus::InvalidArgument, "config is not UTF-8"),
        };
        let config: ScenarioConfig = match serde_json::from_str(text) {
            Ok(c) => c,
            Err(e) => return fail(JlStatus::InvalidConfig, format!("invalid config: {e}")),
        };
        let execution = if parallel {
            Execution::Parallel
        } else {
            Execution::Serial
        };
        match run_experiment_with(&config, &config.estimators(), execution) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(JlExperiment { inner }));
                JlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn jl_experiment_free(exp: *mut JlExperiment) {
    if !exp.is_null() {
        drop(Box::from_raw(exp));
    }
}

#[no_mangle]
pub unsafe extern "C" fn jl_experiment_trial_count(exp: *const JlExperiment) -> usize {
    if exp.is_null() {
        0
    } else {
        (*exp).inner.records.len()
    }
}

#[no_mangle]
pub unsafe extern "C" fn jl_experiment_summary_len(exp: *const JlExperiment) -> usize {
    if exp.is_null() {
        0
    } else {
        (*exp).inner.summary.rows.len()
    }
}

fn summary_row(s: &EstimatorSummary) -> JlSummaryRow {
    JlSummaryRow {
        method: method_of(s.estimator.method()),
        mode: mode_of(s.estimator),
        trials: s.trials,
        clean: s.clean,
        fallbacks: s.fallbacks,
        failures: s.failures,
        mean_error: s.mean_error.unwrap_or(f64::NAN),
        std_error: s.std_error.unwrap_or(f64::NAN),
        median_error: s.median_error.unwrap_or(f64::NAN),
    }
}

#[no_mangle]
pub unsafe extern "C" fn jl_experiment_summary_get(
    exp: *const JlExperiment,
    index: usize,
    out: *mut JlSummaryRow,
) -> JlStatus {
    guard(|| {
        non_null!(exp, "experiment");
        non_null!(out, "out");
        let rows = &(*exp).inner.summary.rows;
        match rows.get(index) {
            Some(row) => {
                *out = summary_row(row);
                JlStatus::Ok
            }
            None => fail(JlStatus::OutOfRange, format!("summary index {index} out of range")),
        }
    })
}

/// Per-trial CSV table (same format as the CLI's `trials.csv`). Free the
/// result with [`jl_string_free`]. Returns NULL on failure.
#[no_mangle]
pub unsafe extern "C" fn jl_experiment_trials_csv(exp: *const JlExperiment) -> *mut c_char {
    clear_last_error();
    if exp.is_null() {
        set_last_error("experiment is null");
        return ptr::null_mut();
    }
    let csv = jamloc::report::trials_csv(&(*exp).inner.records);
    match CString::new(csv) {
        Ok(s) => s.into_raw(),
        Err(_) => {
            set_last_error("CSV contains NUL");
            ptr::null_mut()
        }
    }
}
