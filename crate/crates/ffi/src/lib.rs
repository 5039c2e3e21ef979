//! C interface to `covariant-core`.
//!
//! Groups and reports are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`CovStatus`]; on a non-zero code
//! [`cov_last_error`] holds a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use covariant_core::axb::{
    run_axb_suite, sigma_n_axb, AxbPoint, AxbSuiteConfig, GridSpec, QuadratureGrid,
};
use covariant_core::group::AssociativityCheck;
use covariant_core::{
    builtin_by_name, run_suite, Error, FiniteGroup, SuiteConfig, SuiteReport, WeightPolicy,
};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    MalformedTable = 4,
    NotAGroup = 5,
    UnknownFamily = 6,
    OutOfRange = 7,
    TooLarge = 8,
    GridTooCoarse = 9,
    Internal = 10,
}

impl From<&Error> for CovStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::MalformedTable(_) => CovStatus::MalformedTable,
            Error::NotAGroup(_) => CovStatus::NotAGroup,
            Error::UnknownFamily(_) => CovStatus::UnknownFamily,
            Error::ParameterOutOfRange { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NotInDomain(_) => CovStatus::OutOfRange,
            Error::TooLarge { .. } => CovStatus::TooLarge,
            Error::GridTooCoarse(_) => CovStatus::GridTooCoarse,
            _ => CovStatus::InvalidArgument,
        }
    }
}

/// A finite group.
pub struct CovGroup {
    inner: FiniteGroup,
}

/// A suite report.
pub struct CovReport {
    inner: SuiteReport,
}

/// Options for [`cov_suite_run`]. Obtain defaults from
/// [`cov_suite_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CovSuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub u: f64,
    pub v: f64,
    /// When true, `v` is ignored and each subgroup gets `v = 1/|N|`.
    pub probability_v: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: CovStatus, msg: impl Into<String>) -> CovStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> CovStatus) -> CovStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(CovStatus::Internal, "internal panic"))
}

fn core_error(e: Error) -> CovStatus {
    fail(CovStatus::from(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, CovStatus> {
    if p.is_null() {
        return Err(fail(CovStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(CovStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> CovStatus {
    if out.is_null() {
        return fail(CovStatus::NullPointer, "output pointer is null");
    }
    out.write(value);
    CovStatus::Ok
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cov_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a builtin group such as `"S3"`, `"D4"` or `"Z2xZ2"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cov_group_builtin(
    name: *const c_char,
    out: *mut *mut CovGroup,
) -> CovStatus {
    guard(|| {
        let name = try_ffi!(read_str(name, "name"));
        match builtin_by_name(name) {
            Ok(g) => write_out(out, Box::into_raw(Box::new(CovGroup { inner: g }))),
            Err(e) => core_error(e),
        }
    })
}

/// Parses a Cayley-table document `{"order": n, "table": [[...]], "labels": [...]}`.
///
/// # Safety
/// `name` and `json` must be NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cov_group_from_json(
    name: *const c_char,
    json: *const c_char,
    out: *mut *mut CovGroup,
) -> CovStatus {
    guard(|| {
        let name = try_ffi!(read_str(name, "name"));
        let json = try_ffi!(read_str(json, "json"));
        match FiniteGroup::from_json(name, json, AssociativityCheck::Auto) {
            Ok(g) => write_out(out, Box::into_raw(Box::new(CovGroup { inner: g }))),
            Err(e) => core_error(e),
        }
    })
}

/// # Safety
/// `group` must come from this library and not be freed; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cov_group_order(group: *const CovGroup, out: *mut usize) -> CovStatus {
    guard(|| match group.as_ref() {
        Some(g) => write_out(out, g.inner.order()),
        None => fail(CovStatus::NullPointer, "group is null"),
    })
}

/// # Safety
/// `group` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cov_group_free(group: *mut CovGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

#[no_mangle]
pub extern "C" fn cov_suite_options_default() -> CovSuiteOptions {
    let d = SuiteConfig::default();
    CovSuiteOptions {
        trials: d.trials,
        seed: d.seed,
        tolerance: d.tolerance,
        u: 1.0,
        v: 1.0,
        probability_v: false,
    }
}

/// Runs all theorem checks over every normal subgroup and character.
///
/// # Safety
/// `group` must be a live handle, `options` readable (or null for the
/// defaults) and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cov_suite_run(
    group: *const CovGroup,
    options: *const CovSuiteOptions,
    out: *mut *mut CovReport,
) -> CovStatus {
    guard(|| {
        let Some(g) = group.as_ref() else {
            return fail(CovStatus::NullPointer, "group is null");
        };
        let o = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| cov_suite_options_default());
        let weights = if o.probability_v {
            WeightPolicy::Probability { u: o.u }
        } else {
            WeightPolicy::Fixed { u: o.u, v: o.v }
        };
        let config = SuiteConfig {
            trials: o.trials,
            seed: o.seed,
            tolerance: o.tolerance,
            weights,
            ..SuiteConfig::default()
        };
        match run_suite(&g.inner, &config) {
            Ok(reports) => write_out(
                out,
                Box::into_raw(Box::new(CovReport {
                    inner: SuiteReport::new(config.seed, &reports),
                })),
            ),
            Err(e) => core_error(e),
        }
    })
}

/// Runs the ax+b quadrature checks at frequency `omega` on an
/// `nodes × nodes` grid.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_axb_run(
    omega: f64,
    nodes: usize,
    seed: u64,
    out: *mut *mut CovReport,
) -> CovStatus {
    guard(|| {
        let grid = try_ffi!(QuadratureGrid::new(GridSpec::with_nodes(nodes)).map_err(core_error));
        try_ffi!(grid.require_resolves(omega).map_err(core_error));
        let config = AxbSuiteConfig {
            omega,
            nodes,
            seed,
            refinement_nodes: nodes / 2,
            ..AxbSuiteConfig::default()
        };
        match run_axb_suite(&config) {
            Ok(c) => {
                let mut report = SuiteReport::new(seed, &[]);
                report.continuous.push(c);
                write_out(out, Box::into_raw(Box::new(CovReport { inner: report })))
            }
            Err(e) => core_error(e),
        }
    })
}

/// Measured `σ_N((a, b))` for the translation subgroup of the ax+b group.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cov_axb_sigma(a: f64, b: f64, nodes: usize, out: *mut f64) -> CovStatus {
    guard(|| {
        let x = try_ffi!(AxbPoint::new(a, b).map_err(core_error));
        let grid = try_ffi!(QuadratureGrid::new(GridSpec::with_nodes(nodes)).map_err(core_error));
        match sigma_n_axb(x, &grid) {
            Ok(s) => write_out(out, s),
            Err(e) => core_error(e),
        }
    })
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cov_report_all_pass(
    report: *const CovReport,
    out: *mut bool,
) -> CovStatus {
    guard(|| match report.as_ref() {
        Some(r) => write_out(out, r.inner.all_pass()),
        None => fail(CovStatus::NullPointer, "report is null"),
    })
}

/// Number of checks in the report, and how many failed.
///
/// # Safety
/// `report` must be a live handle; `total` and `failed` writable.
#[no_mangle]
pub unsafe extern "C" fn cov_report_counts(
    report: *const CovReport,
    total: *mut usize,
    failed: *mut usize,
) -> CovStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return fail(CovStatus::NullPointer, "report is null");
        };
        if total.is_null() || failed.is_null() {
            return fail(CovStatus::NullPointer, "output pointer is null");
        }
        total.write(r.inner.entries().count());
        failed.write(r.inner.num_failures());
        CovStatus::Ok
    })
}

/// The report as pretty-printed JSON. Release with [`cov_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cov_report_json(
    report: *const CovReport,
    out: *mut *mut c_char,
) -> CovStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return fail(CovStatus::NullPointer, "report is null");
        };
        match CString::new(r.inner.to_json()) {
            Ok(s) => write_out(out, s.into_raw()),
            Err(_) => fail(CovStatus::Internal, "report contains a NUL byte"),
        }
    })
}

/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cov_report_free(report: *mut CovReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
