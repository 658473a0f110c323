//! C ABI for `manifold-volumes`.
//!
//! Exact volumes are returned as opaque `MvVolume` handles that the caller
//! releases with `mv_volume_free`. Every fallible function returns an
//! `MvStatus`; on failure `mv_last_error_message` describes the error for the
//! calling thread. Strings are written into caller buffers: `written`
//! receives the length without the terminating NUL, also when the buffer is
//! too small, so a call with `len = 0` queries the size.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use manifold_volumes::closed_forms::{weinstein_integer, ClosedFormError, Family, ManifoldId};
use manifold_volumes::exact::{ExactError, ExactVolume};
use manifold_volumes::integrate::{integrate_mc, integrate_tensor, IntegrateError, Method};
use manifold_volumes::states::{orbit_dimension, su3_positivity};
use manifold_volumes::verify::verification_target;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    DivideByZero = 4,
    Unsupported = 5,
    BufferTooSmall = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvMethod {
    Quadrature = 0,
    MonteCarlo = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvIntegrationResult {
    pub estimate: f64,
    /// Zero for quadrature.
    pub std_error: f64,
    pub evaluations: u64,
    pub method: MvMethod,
}

/// Opaque exact volume `(p/q)·√m·π^k`.
pub struct MvVolume {
    inner: ExactVolume,
}

struct Failure {
    status: MvStatus,
    message: String,
}

impl Failure {
    fn new(status: MvStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        let status = match e {
            ExactError::DivideByZero => MvStatus::DivideByZero,
            _ => MvStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<ClosedFormError> for Failure {
    fn from(e: ClosedFormError) -> Self {
        let status = match &e {
            ClosedFormError::InvalidParameter(_) => MvStatus::InvalidArgument,
            ClosedFormError::Unsupported(_) => MvStatus::Unsupported,
            ClosedFormError::InternalConsistency(_) => MvStatus::Internal,
            ClosedFormError::Exact(ExactError::DivideByZero) => MvStatus::DivideByZero,
            ClosedFormError::Exact(_) => MvStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<IntegrateError> for Failure {
    fn from(e: IntegrateError) -> Self {
        let status = match e {
            IntegrateError::TooManyDimensions { .. } => MvStatus::Unsupported,
            _ => MvStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MvStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MvStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            set_last_error(&format!("panic: {msg}"));
            MvStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure::new(MvStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(MvStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn volume_ref<'a>(v: *const MvVolume, name: &str) -> Result<&'a ExactVolume, Failure> {
    v.as_ref().map(|v| &v.inner).ok_or_else(|| null(name))
}

unsafe fn store<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn store_volume(out: *mut *mut MvVolume, v: ExactVolume) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(MvVolume { inner: v })));
    Ok(())
}

unsafe fn write_text(s: &str, buf: *mut c_char, len: usize, written: *mut usize) -> Result<(), Failure> {
    if !written.is_null() {
        written.write(s.len());
    }
    if len < s.len() + 1 {
        return Err(Failure::new(
            MvStatus::BufferTooSmall,
            format!("buffer of {len} bytes, need {}", s.len() + 1),
        ));
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

fn parse_family(key: &str) -> Result<Family, Failure> {
    Family::from_key(key).ok_or_else(|| Failure::new(MvStatus::InvalidArgument, format!("unknown family '{key}'")))
}

unsafe fn build_volume(
    family: *const c_char,
    params: *const u32,
    n_params: usize,
    xi: Option<(i64, i64)>,
    out: *mut *mut MvVolume,
) -> Result<(), Failure> {
    let family = parse_family(read_str(family, "family")?)?;
    let params = read_slice(params, n_params, "params")?.to_vec();
    let mut id = ManifoldId::new(family, params)?;
    if let Some((num, den)) = xi {
        if den == 0 {
            return Err(Failure::new(MvStatus::DivideByZero, "xi denominator is zero"));
        }
        id = id.with_xi(BigRational::new(BigInt::from(num), BigInt::from(den)))?;
    }
    store_volume(out, id.volume()?)
}

/// Exact volume of `family` (`"sphere"`, `"cp"`, `"su"`, `"flag"`, …) with
/// integer parameters `params[0..n_params]`.
///
/// # Safety
/// `family` must be a NUL-terminated string, `params` must point to
/// `n_params` values (or be null when `n_params` is 0), `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume(
    family: *const c_char,
    params: *const u32,
    n_params: usize,
    out: *mut *mut MvVolume,
) -> MvStatus {
    guard(|| build_volume(family, params, n_params, None, out))
}

/// As [`mv_volume`], with the scale `ξ = xi_num/xi_den` used by `g2` and `f4`.
///
/// # Safety
/// Same as [`mv_volume`].
#[no_mangle]
pub unsafe extern "C" fn mv_volume_with_xi(
    family: *const c_char,
    params: *const u32,
    n_params: usize,
    xi_num: i64,
    xi_den: i64,
    out: *mut *mut MvVolume,
) -> MvStatus {
    guard(|| build_volume(family, params, n_params, Some((xi_num, xi_den)), out))
}

/// Parses the text form, e.g. `"(1/3)·√2·π^9"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_parse(text: *const c_char, out: *mut *mut MvVolume) -> MvStatus {
    guard(|| {
        let v: ExactVolume = read_str(text, "text")?.parse()?;
        store_volume(out, v)
    })
}

/// Reads a JSON record with integer fields `num`, `den`, `radicand`, `pi_pow`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_from_json(json: *const c_char, out: *mut *mut MvVolume) -> MvStatus {
    guard(|| {
        let value: serde_json::Value = serde_json::from_str(read_str(json, "json")?)
            .map_err(|e| Failure::new(MvStatus::InvalidArgument, e.to_string()))?;
        store_volume(out, ExactVolume::from_json(&value)?)
    })
}

/// # Safety
/// `v` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_clone(v: *const MvVolume, out: *mut *mut MvVolume) -> MvStatus {
    guard(|| store_volume(out, volume_ref(v, "v")?.clone()))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `v` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_free(v: *mut MvVolume) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_approx(v: *const MvVolume, out: *mut f64) -> MvStatus {
    guard(|| store(out, volume_ref(v, "v")?.approx(), "out"))
}

/// Exponent `k` of π.
///
/// # Safety
/// `v` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_pi_pow(v: *const MvVolume, out: *mut u32) -> MvStatus {
    guard(|| store(out, volume_ref(v, "v")?.pi_pow(), "out"))
}

/// # Safety
/// `a`, `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_equal(a: *const MvVolume, b: *const MvVolume, out: *mut bool) -> MvStatus {
    guard(|| store(out, volume_ref(a, "a")? == volume_ref(b, "b")?, "out"))
}

/// # Safety
/// `a`, `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_mul(a: *const MvVolume, b: *const MvVolume, out: *mut *mut MvVolume) -> MvStatus {
    guard(|| store_volume(out, volume_ref(a, "a")?.mul(volume_ref(b, "b")?)))
}

/// `a / b`; fails with `DivideByZero` for `b = 0` and `InvalidArgument`
/// when the π exponent would become negative.
///
/// # Safety
/// `a`, `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_div(a: *const MvVolume, b: *const MvVolume, out: *mut *mut MvVolume) -> MvStatus {
    guard(|| store_volume(out, volume_ref(a, "a")?.div(volume_ref(b, "b")?)?))
}

/// Canonical text form (UTF-8).
///
/// # Safety
/// `v` must be a live handle; `buf` must hold `len` bytes (may be null when
/// `len` is 0); `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn mv_volume_render(
    v: *const MvVolume,
    buf: *mut c_char,
    len: usize,
    written: *mut usize,
) -> MvStatus {
    guard(|| write_text(&volume_ref(v, "v")?.to_string(), buf, len, written))
}

/// JSON record `{"num","den","radicand","pi_pow","approx"}`.
///
/// # Safety
/// As [`mv_volume_render`].
#[no_mangle]
pub unsafe extern "C" fn mv_volume_to_json(
    v: *const MvVolume,
    buf: *mut c_char,
    len: usize,
    written: *mut usize,
) -> MvStatus {
    guard(|| {
        let text = serde_json::to_string(&volume_ref(v, "v")?.to_json()).expect("JSON serializes");
        write_text(&text, buf, len, written)
    })
}

/// Weinstein integer of `rp`, `cp`, `hp` or `op` in dimension `n`, as a
/// decimal string.
///
/// # Safety
/// `family` must be a NUL-terminated string; buffer rules as in
/// [`mv_volume_render`].
#[no_mangle]
pub unsafe extern "C" fn mv_weinstein_integer(
    family: *const c_char,
    n: u32,
    buf: *mut c_char,
    len: usize,
    written: *mut usize,
) -> MvStatus {
    guard(|| {
        let id = ManifoldId::new(parse_family(read_str(family, "family")?)?, vec![n])?;
        write_text(&weinstein_integer(&id)?.to_string(), buf, len, written)
    })
}

/// Integrates a named chart (`"su2-euler"`, `"su3"`, `"sphere-4"`, …).
/// `order` is used by quadrature; `samples`, `seed`, `chunks` by Monte Carlo.
///
/// # Safety
/// `chart` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_integrate_chart(
    chart: *const c_char,
    method: MvMethod,
    order: u32,
    samples: u64,
    seed: u64,
    chunks: u64,
    out: *mut MvIntegrationResult,
) -> MvStatus {
    guard(|| {
        let target = verification_target(read_str(chart, "chart")?)
            .map_err(|e| Failure::new(MvStatus::InvalidArgument, e.to_string()))?;
        let r = match method {
            MvMethod::Quadrature => integrate_tensor(&target.chart, order as usize)?,
            MvMethod::MonteCarlo => integrate_mc(&target.chart, samples, seed, chunks)?,
        };
        let method = match r.method {
            Method::GaussTensor => MvMethod::Quadrature,
            Method::MonteCarlo => MvMethod::MonteCarlo,
        };
        store(
            out,
            MvIntegrationResult {
                estimate: r.estimate,
                std_error: r.std_error,
                evaluations: r.evaluations,
                method,
            },
            "out",
        )
    })
}

/// Exact volume that the named chart integrates to.
///
/// # Safety
/// `chart` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_chart_exact_volume(chart: *const c_char, out: *mut *mut MvVolume) -> MvStatus {
    guard(|| {
        let target = verification_target(read_str(chart, "chart")?)
            .map_err(|e| Failure::new(MvStatus::InvalidArgument, e.to_string()))?;
        store_volume(out, target.exact)
    })
}

/// `n² − Σ q_i²` for a partition `parts[0..n_parts]` of `n`.
///
/// # Safety
/// `parts` must point to `n_parts` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mv_orbit_dimension(n: u32, parts: *const u32, n_parts: usize, out: *mut u32) -> MvStatus {
    guard(|| {
        let parts = read_slice(parts, n_parts, "parts")?;
        let d = orbit_dimension(n, parts).map_err(|e| Failure::new(MvStatus::InvalidArgument, e.to_string()))?;
        store(out, d, "out")
    })
}

/// Positivity of the diagonal qutrit state with Bloch coordinates `(x3, x8)`.
#[no_mangle]
pub extern "C" fn mv_su3_positivity(x3: f64, x8: f64) -> bool {
    su3_positivity(x3, x8)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn mv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn mv_status_name(status: MvStatus) -> *const c_char {
    let name: &'static CStr = match status {
        MvStatus::Ok => c"ok",
        MvStatus::NullPointer => c"null pointer",
        MvStatus::InvalidArgument => c"invalid argument",
        MvStatus::InvalidUtf8 => c"invalid UTF-8",
        MvStatus::DivideByZero => c"divide by zero",
        MvStatus::Unsupported => c"unsupported",
        MvStatus::BufferTooSmall => c"buffer too small",
        MvStatus::Internal => c"internal error",
        MvStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// Library version, static string.
#[no_mangle]
pub extern "C" fn mv_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}
