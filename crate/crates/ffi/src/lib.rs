//! C ABI for `extropy-kit`.
//!
//! Distributions, weights and samples are opaque handles created by
//! `ek_*_new`/`ek_*_parse` and released with the matching `ek_*_free`.
//! Every fallible call returns an [`EkStatus`]; on failure the message is
//! available from [`ek_last_error_message`] on the same thread until the next
//! failing call. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use extropy_kit::{
    bootstrap_ci, dynamic_curve, estimate, gwcpex_max, gwcrex_min, load_sample, CurveKind, Distribution, Error,
    EstimatorKind, MeasureResult, Method, QuadratureSettings, Sample, WeightFunction,
};

/// Result code of every fallible call. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    InvalidParameter = 10,
    OutOfSupport = 11,
    DegenerateDenominator = 12,
    Diverged = 13,
    NotConverged = 14,
    UnboundedSupport = 15,
    InvalidIndex = 16,
    DomainError = 17,
    TooFewObservations = 18,
    NegativeValue = 19,
    NonFiniteValue = 20,
    InvalidLevel = 21,
    EmptyGrid = 22,
    ZeroDenominator = 23,
    EvaluationFailure = 24,
    Parse = 25,
    Io = 26,
}

impl From<&Error> for EkStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter(_) => EkStatus::InvalidParameter,
            Error::OutOfSupport { .. } => EkStatus::OutOfSupport,
            Error::DegenerateDenominator(_) => EkStatus::DegenerateDenominator,
            Error::Diverged(_) => EkStatus::Diverged,
            Error::NotConverged { .. } => EkStatus::NotConverged,
            Error::UnboundedSupport(_) => EkStatus::UnboundedSupport,
            Error::InvalidIndex { .. } => EkStatus::InvalidIndex,
            Error::DomainError(_) => EkStatus::DomainError,
            Error::TooFewObservations(_) => EkStatus::TooFewObservations,
            Error::NegativeValue { .. } => EkStatus::NegativeValue,
            Error::NonFiniteValue { .. } => EkStatus::NonFiniteValue,
            Error::InvalidLevel(_) => EkStatus::InvalidLevel,
            Error::EmptyGrid => EkStatus::EmptyGrid,
            Error::ZeroDenominator(_) => EkStatus::ZeroDenominator,
            Error::EvaluationFailure { .. } => EkStatus::EvaluationFailure,
            Error::Parse(_) => EkStatus::Parse,
            Error::Io(_) => EkStatus::Io,
        }
    }
}

/// How a measure was evaluated.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EkMethod {
    ClosedForm = 0,
    Quadrature = 1,
    Empirical = 2,
}

/// A measure value in both conventions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EkMeasure {
    pub signed_value: f64,
    pub magnitude: f64,
    /// Bound on the absolute error of `signed_value`.
    pub error_bound: f64,
    pub method: EkMethod,
}

impl From<&MeasureResult> for EkMeasure {
    fn from(r: &MeasureResult) -> Self {
        EkMeasure {
            signed_value: r.signed_value,
            magnitude: r.magnitude,
            error_bound: r.error_bound,
            method: match r.method {
                Method::ClosedForm => EkMethod::ClosedForm,
                Method::Quadrature => EkMethod::Quadrature,
                Method::Empirical => EkMethod::Empirical,
            },
        }
    }
}

/// Opaque lifetime distribution.
pub struct EkDistribution(Distribution);

/// Opaque weight function.
pub struct EkWeight(WeightFunction);

/// Opaque validated sample.
pub struct EkSample(Sample);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul bytes were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EkStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            EkStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_last_error(&format!("invalid UTF-8 in {what}"));
            EkStatus::InvalidUtf8
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            EkStatus::from(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            set_last_error(&format!("internal panic: {msg}"));
            EkStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn ek_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failing call on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ek_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a distribution such as `"weibull:k=1,h=2"`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out_dist` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ek_distribution_parse(spec: *const c_char, out_dist: *mut *mut EkDistribution) -> EkStatus {
    guard(|| {
        let slot = out(out_dist, "out_dist")?;
        *slot = ptr::null_mut();
        let d: Distribution = text(spec, "spec")?.parse()?;
        *slot = Box::into_raw(Box::new(EkDistribution(d)));
        Ok(())
    })
}

/// Releases a distribution. Null is ignored.
///
/// # Safety
/// `dist` must come from [`ek_distribution_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ek_distribution_free(dist: *mut EkDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Survival function of `dist` at `x`.
///
/// # Safety
/// `dist` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ek_distribution_sf(dist: *const EkDistribution, x: f64, out_value: *mut f64) -> EkStatus {
    guard(|| {
        let d = get(dist, "dist")?;
        *out(out_value, "out_value")? = d.0.sf(x);
        Ok(())
    })
}

/// Parses a weight such as `"identity"`, `"const:2"` or `"pow:m=3"`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out_weight` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ek_weight_parse(spec: *const c_char, out_weight: *mut *mut EkWeight) -> EkStatus {
    guard(|| {
        let slot = out(out_weight, "out_weight")?;
        *slot = ptr::null_mut();
        let w: WeightFunction = text(spec, "spec")?.parse()?;
        *slot = Box::into_raw(Box::new(EkWeight(w)));
        Ok(())
    })
}

/// Releases a weight. Null is ignored.
///
/// # Safety
/// `weight` must come from [`ek_weight_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ek_weight_free(weight: *mut EkWeight) {
    if !weight.is_null() {
        drop(Box::from_raw(weight));
    }
}

/// Copies and validates `len` observations (finite, non-negative, at least 2).
///
/// # Safety
/// `values` must point to `len` doubles and `out_sample` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ek_sample_new(values: *const f64, len: usize, out_sample: *mut *mut EkSample) -> EkStatus {
    guard(|| {
        let slot = out(out_sample, "out_sample")?;
        *slot = ptr::null_mut();
        let s = load_sample(slice(values, len, "values")?.to_vec())?;
        *slot = Box::into_raw(Box::new(EkSample(s)));
        Ok(())
    })
}

/// Number of observations in `sample`, or 0 for null.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ek_sample_len(sample: *const EkSample) -> usize {
    sample.as_ref().map_or(0, |s| s.0.len())
}

/// Releases a sample. Null is ignored.
///
/// # Safety
/// `sample` must come from [`ek_sample_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ek_sample_free(sample: *mut EkSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Static measure of the minimum (`kind = "residual-min"`) or maximum
/// (`kind = "past-max"`) of `n` draws, with default quadrature settings.
///
/// # Safety
/// Handles must be live, `kind` nul-terminated and `out_measure` valid.
#[no_mangle]
pub unsafe extern "C" fn ek_measure(
    kind: *const c_char,
    dist: *const EkDistribution,
    weight: *const EkWeight,
    n: usize,
    out_measure: *mut EkMeasure,
) -> EkStatus {
    guard(|| {
        let kind: EstimatorKind = text(kind, "kind")?.parse()?;
        let (d, w) = (&get(dist, "dist")?.0, &get(weight, "weight")?.0);
        let slot = out(out_measure, "out_measure")?;
        let s = QuadratureSettings::default();
        let r = match kind {
            EstimatorKind::ResidualMin => gwcrex_min(d, w, n, &s)?,
            EstimatorKind::PastMax => gwcpex_max(d, w, n, &s)?,
        };
        *slot = EkMeasure::from(&r);
        Ok(())
    })
}

/// Dynamic curve at `len` strictly increasing times. `kind` is one of
/// `residual-min`, `past-max`, `residual-kn`, `past-kn`; `k` is used only by
/// the order-statistic kinds. Points that fail to evaluate are written as NaN
/// and counted in `out_failed` (which may be null).
///
/// # Safety
/// `t` and `out_values` must each hold `len` doubles; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ek_dynamic(
    kind: *const c_char,
    dist: *const EkDistribution,
    weight: *const EkWeight,
    n: usize,
    k: usize,
    t: *const f64,
    len: usize,
    out_values: *mut f64,
    out_failed: *mut usize,
) -> EkStatus {
    guard(|| {
        let kind: CurveKind = text(kind, "kind")?.parse()?;
        let (d, w) = (&get(dist, "dist")?.0, &get(weight, "weight")?.0);
        let grid = slice(t, len, "t")?;
        if out_values.is_null() && len > 0 {
            return Err(Failure::Null("out_values"));
        }
        let curve = dynamic_curve(kind, d, w, n, Some(k), grid, &QuadratureSettings::default())?;
        let dest = std::slice::from_raw_parts_mut(out_values, len);
        for (slot, p) in dest.iter_mut().zip(&curve.points) {
            *slot = p.result.as_ref().map_or(f64::NAN, |r| r.signed_value);
        }
        if let Some(f) = out_failed.as_mut() {
            *f = curve.failures();
        }
        Ok(())
    })
}

/// Plug-in estimate from a sample; `kind` is `residual-min` or `past-max`.
///
/// # Safety
/// Handles must be live, `kind` nul-terminated and `out_measure` valid.
#[no_mangle]
pub unsafe extern "C" fn ek_estimate(
    kind: *const c_char,
    sample: *const EkSample,
    weight: *const EkWeight,
    n: usize,
    out_measure: *mut EkMeasure,
) -> EkStatus {
    guard(|| {
        let kind: EstimatorKind = text(kind, "kind")?.parse()?;
        let r = estimate(&get(sample, "sample")?.0, kind, &get(weight, "weight")?.0, n)?;
        *out(out_measure, "out_measure")? = EkMeasure::from(&r);
        Ok(())
    })
}

/// Percentile bootstrap interval for the signed estimate. Deterministic for a
/// given `seed`.
///
/// # Safety
/// Handles must be live, `kind` nul-terminated and both outputs valid.
#[no_mangle]
pub unsafe extern "C" fn ek_bootstrap(
    kind: *const c_char,
    sample: *const EkSample,
    weight: *const EkWeight,
    n: usize,
    replicates: usize,
    level: f64,
    seed: u64,
    out_lower: *mut f64,
    out_upper: *mut f64,
) -> EkStatus {
    guard(|| {
        let kind: EstimatorKind = text(kind, "kind")?.parse()?;
        let (s, w) = (&get(sample, "sample")?.0, &get(weight, "weight")?.0);
        let (lo_slot, hi_slot) = (out(out_lower, "out_lower")?, out(out_upper, "out_upper")?);
        let (lo, hi) = bootstrap_ci(s, kind, w, n, replicates, level, seed)?;
        *lo_slot = lo;
        *hi_slot = hi;
        Ok(())
    })
}
