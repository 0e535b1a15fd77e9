//! C ABI over `spectral-core`.
//!
//! Objects are opaque handles created by `sp_*_new`/`sp_*_parse` and released
//! by the matching `sp_*_free`. Every fallible call returns an [`SpStatus`];
//! a description of the most recent failure on the calling thread is
//! available from [`sp_last_error_message`]. Panics never cross the boundary.
//!
//! Tensor indices passed through this interface are one-based, like the text
//! format. Partitions and exponents use the CLI encodings (`"1;2,3"`,
//! `"2,4"`).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spectral_core::io::{self, ConfigError, FormatError};
use spectral_core::{
    classify_regime, solve, CooTensor, Criticality, Method, ProblemError, Regime, SolveError, SolveResult,
    SolverOptions, SpectralProblem,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    InvalidTensor = 4,
    InvalidPartition = 5,
    InvalidExponent = 6,
    /// the tensor is not σ-strictly nonnegative
    StructuralRejection = 7,
    /// a partial result is still returned
    MaxIterExceeded = 8,
    /// a partial result is still returned
    SingularNewtonSystem = 9,
    /// a partial result is still returned
    LineSearchFailed = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpMethod {
    LsNnm = 0,
    Power = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpRegime {
    StrictSubcritical = 0,
    WeaklyIrrCritical = 1,
    BothValid = 2,
    Unsupported = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpSolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub armijo_c: f64,
    pub backtrack_rho: f64,
    pub max_backtracks: usize,
    /// must hold one of the declared `SpMethod` values
    pub method: SpMethod,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpAssumptions {
    pub strict_nonneg: bool,
    pub weakly_irreducible: bool,
    pub nu_over_p: f64,
    /// sign of `Σν/p - 1`: -1, 0 or 1
    pub criticality: i32,
    pub rho_a: f64,
    pub regime: SpRegime,
}

pub struct SpTensor(CooTensor);

pub struct SpProblem(SpectralProblem);

pub struct SpResult {
    result: SolveResult,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("interior NULs were removed"));
}

fn fail(status: SpStatus, msg: impl Into<String>) -> SpStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`SpStatus::Panic`].
fn guard(f: impl FnOnce() -> SpStatus) -> SpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(SpStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, SpStatus> {
    if s.is_null() {
        return Err(fail(SpStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(SpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn format_status(e: &FormatError) -> SpStatus {
    match e {
        FormatError::Tensor(_) => SpStatus::InvalidTensor,
        _ => SpStatus::ParseError,
    }
}

fn config_status(e: &ConfigError) -> SpStatus {
    match e {
        ConfigError::BadPartition { .. } => SpStatus::InvalidPartition,
        ConfigError::BadExponent { .. } => SpStatus::InvalidExponent,
        ConfigError::Problem(ProblemError::Partition(_)) => SpStatus::InvalidPartition,
        ConfigError::Problem(ProblemError::Tensor(_)) => SpStatus::InvalidPartition,
        ConfigError::Problem(_) => SpStatus::InvalidExponent,
        ConfigError::Format(f) => format_status(f),
    }
}

/// Message of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a tensor in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sp_tensor_parse(text: *const c_char, out: *mut *mut SpTensor) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return fail(SpStatus::NullPointer, "out is NULL");
        }
        *out = ptr::null_mut();
        let text = match read_str(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match io::parse_tensor_str(text) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(SpTensor(t)));
                SpStatus::Ok
            }
            Err(e) => fail(format_status(&e), e.to_string()),
        }
    })
}

/// Builds a tensor from `nnz` entries. `indices` holds `nnz * order`
/// one-based indices, entry by entry.
///
/// # Safety
/// `dims` must point to `order` values, `indices` to `nnz * order` values and
/// `values` to `nnz` values (either may be NULL when `nnz == 0`).
#[no_mangle]
pub unsafe extern "C" fn sp_tensor_new(
    order: usize,
    dims: *const usize,
    nnz: usize,
    indices: *const usize,
    values: *const f64,
    out: *mut *mut SpTensor,
) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return fail(SpStatus::NullPointer, "out is NULL");
        }
        *out = ptr::null_mut();
        if dims.is_null() || (nnz > 0 && (indices.is_null() || values.is_null())) {
            return fail(SpStatus::NullPointer, "dims, indices or values is NULL");
        }
        let Some(total) = nnz.checked_mul(order) else {
            return fail(SpStatus::InvalidArgument, "nnz * order overflows");
        };
        let dims = std::slice::from_raw_parts(dims, order).to_vec();
        let (idx, vals) = if nnz == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(indices, total), std::slice::from_raw_parts(values, nnz))
        };
        let entries = (0..nnz).map(|e| (idx[e * order..(e + 1) * order].to_vec(), vals[e])).collect();
        match CooTensor::from_one_based(dims, entries) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(SpTensor(t)));
                SpStatus::Ok
            }
            Err(e) => fail(SpStatus::InvalidTensor, e.to_string()),
        }
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sp_tensor_free(t: *mut SpTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of stored entries, or 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live tensor handle.
#[no_mangle]
pub unsafe extern "C" fn sp_tensor_nnz(t: *const SpTensor) -> usize {
    t.as_ref().map_or(0, |t| t.0.nnz())
}

/// Builds a problem. `partition` may be NULL for a single block. The tensor
/// is copied, so it may be freed afterwards.
///
/// # Safety
/// `t` must be a live tensor handle, the strings NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sp_problem_new(
    t: *const SpTensor,
    partition: *const c_char,
    p: *const c_char,
    out: *mut *mut SpProblem,
) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return fail(SpStatus::NullPointer, "out is NULL");
        }
        *out = ptr::null_mut();
        let Some(t) = t.as_ref() else {
            return fail(SpStatus::NullPointer, "tensor is NULL");
        };
        let blocks = if partition.is_null() {
            None
        } else {
            let text = match read_str(partition, "partition") {
                Ok(s) => s,
                Err(s) => return s,
            };
            match io::parse_partition(text) {
                Ok(b) => Some(b),
                Err(e) => return fail(config_status(&e), e.to_string()),
            }
        };
        let p = match read_str(p, "p").map(io::parse_exponents) {
            Ok(Ok(p)) => p,
            Ok(Err(e)) => return fail(config_status(&e), e.to_string()),
            Err(s) => return s,
        };
        match io::build_problem(t.0.clone(), blocks, &p) {
            Ok(prob) => {
                *out = Box::into_raw(Box::new(SpProblem(prob)));
                SpStatus::Ok
            }
            Err(e) => fail(config_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `prob` must be NULL or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn sp_problem_free(prob: *mut SpProblem) {
    if !prob.is_null() {
        drop(Box::from_raw(prob));
    }
}

/// Length `n` of the flat eigenvector, or 0 for NULL.
///
/// # Safety
/// `prob` must be NULL or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn sp_problem_dim(prob: *const SpProblem) -> usize {
    prob.as_ref().map_or(0, |p| p.0.dim())
}

/// # Safety
/// `prob` must be a live problem handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sp_problem_check(prob: *const SpProblem, out: *mut SpAssumptions) -> SpStatus {
    guard(|| {
        let (Some(prob), false) = (prob.as_ref(), out.is_null()) else {
            return fail(SpStatus::NullPointer, "problem or out is NULL");
        };
        let r = classify_regime(&prob.0);
        *out = SpAssumptions {
            strict_nonneg: r.strict_nonneg,
            weakly_irreducible: r.weakly_irreducible,
            nu_over_p: r.nu_over_p,
            criticality: match r.criticality {
                Criticality::Below => -1,
                Criticality::Equal => 0,
                Criticality::Above => 1,
            },
            rho_a: r.rho_a,
            regime: match r.regime {
                Regime::StrictSubcritical => SpRegime::StrictSubcritical,
                Regime::WeaklyIrrCritical => SpRegime::WeaklyIrrCritical,
                Regime::BothValid => SpRegime::BothValid,
                Regime::Unsupported => SpRegime::Unsupported,
            },
        };
        SpStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn sp_solver_options_default() -> SpSolverOptions {
    let o = SolverOptions::default();
    SpSolverOptions {
        tol: o.tol,
        max_iter: o.max_iter,
        armijo_c: o.armijo_c,
        backtrack_rho: o.backtrack_rho,
        max_backtracks: o.max_backtracks,
        method: SpMethod::LsNnm,
    }
}

/// Solves `prob`. `opts` may be NULL for the defaults. On
/// `MaxIterExceeded`, `SingularNewtonSystem` and `LineSearchFailed` the
/// partial result is still stored in `out` and must be freed.
///
/// # Safety
/// `prob` must be a live problem handle, `opts` NULL or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sp_solve(
    prob: *const SpProblem,
    opts: *const SpSolverOptions,
    out: *mut *mut SpResult,
) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return fail(SpStatus::NullPointer, "out is NULL");
        }
        *out = ptr::null_mut();
        let Some(prob) = prob.as_ref() else {
            return fail(SpStatus::NullPointer, "problem is NULL");
        };
        let o = opts.as_ref().copied().unwrap_or_else(|| sp_solver_options_default());
        let opts = SolverOptions {
            tol: o.tol,
            max_iter: o.max_iter,
            armijo_c: o.armijo_c,
            backtrack_rho: o.backtrack_rho,
            max_backtracks: o.max_backtracks,
            method: match o.method {
                SpMethod::LsNnm => Method::LsNnm,
                SpMethod::Power => Method::Power,
            },
        };
        if !classify_regime(&prob.0).strict_nonneg {
            return fail(SpStatus::StructuralRejection, "the tensor is not σ-strictly nonnegative");
        }
        let (result, status) = match solve(&prob.0, None, &opts) {
            Ok(r) => (r, SpStatus::Ok),
            Err(e) => {
                let status = match &e {
                    SolveError::MaxIterExceeded(_) => SpStatus::MaxIterExceeded,
                    SolveError::SingularNewtonSystem { .. } => SpStatus::SingularNewtonSystem,
                    SolveError::LineSearchFailed { .. } => SpStatus::LineSearchFailed,
                    SolveError::InvalidOptions(_) | SolveError::InvalidStart(_) => SpStatus::InvalidArgument,
                    SolveError::Map(_) => SpStatus::SingularNewtonSystem,
                };
                set_error(e.to_string());
                match e.partial() {
                    Some(r) => (r.clone(), status),
                    None => return status,
                }
            }
        };
        let json = io::result_json(&prob.0, &result).to_string();
        *out = Box::into_raw(Box::new(SpResult { result, json }));
        status
    })
}

/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_free(r: *mut SpResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// `λ*`, or NaN for NULL.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_lambda_star(r: *const SpResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.result.lambda_star)
}

/// Final `Res`, or NaN for NULL.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_res(r: *const SpResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.result.res)
}

/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_iterations(r: *const SpResult) -> usize {
    r.as_ref().map_or(0, |r| r.result.iterations)
}

/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_total_backtracks(r: *const SpResult) -> usize {
    r.as_ref().map_or(0, |r| r.result.total_backtracks)
}

/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_converged(r: *const SpResult) -> bool {
    r.as_ref().is_some_and(|r| r.result.converged)
}

/// Copies the flat normalized eigenvector into `buf`, which must hold at
/// least `sp_problem_dim` values.
///
/// # Safety
/// `r` must be a live result handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sp_result_x(r: *const SpResult, buf: *mut f64, len: usize) -> SpStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), buf.is_null()) else {
            return fail(SpStatus::NullPointer, "result or buf is NULL");
        };
        let x = r.result.x.as_slice();
        if len < x.len() {
            return fail(SpStatus::InvalidArgument, format!("buffer holds {len} values, need {}", x.len()));
        }
        ptr::copy_nonoverlapping(x.as_ptr(), buf, x.len());
        SpStatus::Ok
    })
}

/// The result as JSON. Free the string with [`sp_string_free`]. Returns NULL
/// for a NULL handle.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_to_json(r: *const SpResult) -> *mut c_char {
    r.as_ref().and_then(|r| CString::new(r.json.as_str()).ok()).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
