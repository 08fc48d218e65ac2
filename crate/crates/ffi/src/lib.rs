//! C ABI over `siegel-theta`.
//!
//! Conventions:
//!
//! - Every fallible function returns an [`StStatus`]; `ST_STATUS_OK` is zero.
//! - On failure a thread-local message and a stable error code are recorded
//!   and can be read with [`st_last_error_message`] and [`st_last_error_code`].
//! - Strings returned through `char **` outputs are owned by the caller and
//!   must be released with [`st_string_free`].
//! - [`StQExp`] handles are released with [`st_qexp_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use siegel_theta::arith::{m_shift, Prime, Weight};
use siegel_theta::cycle::{cycle_closed_form, cycle_solver, selector};
use siegel_theta::qexp::{QExpJsonError, QExpansion};
use siegel_theta::serre::LocalRepDescriptor;
use siegel_theta::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An input string was not UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON.
    Parse = 3,
    /// Well-formed input that violates a precondition.
    Invalid = 4,
    /// Internal failure; the message has details.
    Internal = 5,
}

/// Opaque truncated q-expansion.
pub struct StQExp {
    inner: QExpansion,
}

struct LastError {
    code: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn c_string(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).expect("no interior nul")
}

fn set_error(status: StStatus, code: &str, message: &str) -> StStatus {
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = Some(LastError {
            code: c_string(code),
            message: c_string(message),
        })
    });
    status
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn from_error(e: Error) -> StStatus {
    let status = match e {
        Error::Parse { .. } | Error::Io { .. } => StStatus::Parse,
        _ => StStatus::Invalid,
    };
    set_error(status, e.code(), &e.to_string())
}

/// Runs `f`, converting panics into `ST_STATUS_INTERNAL`.
fn guard(f: impl FnOnce() -> Result<(), StStatus>) -> StStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => set_error(StStatus::Internal, "panic", "internal panic"),
    }
}

fn null_error(what: &str) -> StStatus {
    set_error(StStatus::NullPointer, "null_pointer", &format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, StStatus> {
    if s.is_null() {
        return Err(null_error(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| set_error(StStatus::InvalidUtf8, "invalid_utf8", &format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), StStatus> {
    if out.is_null() {
        return Err(null_error("output pointer"));
    }
    *out = c_string(&s).into_raw();
    Ok(())
}

fn prime(p: i64) -> Result<Prime, StStatus> {
    Prime::new(p).map_err(|e| from_error(e.into()))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn st_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// Stable machine-readable code of the last failed call on this thread, or null.
#[no_mangle]
pub extern "C" fn st_last_error_code() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.code.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a q-expansion document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_qexp_from_json(json: *const c_char, out: *mut *mut StQExp) -> StStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null_error("output pointer"));
        }
        let inner = QExpansion::from_json(text).map_err(|e| match e {
            QExpJsonError::Syntax(e) => set_error(StStatus::Parse, "parse", &e.to_string()),
            QExpJsonError::Invalid(e) => from_error(e.into()),
        })?;
        *out = Box::into_raw(Box::new(StQExp { inner }));
        Ok(())
    })
}

/// Releases a q-expansion handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn st_qexp_free(f: *mut StQExp) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Canonical JSON of a q-expansion.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_qexp_to_json(f: *const StQExp, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null_error("handle"))?;
        write_string(out, f.inner.to_json())
    })
}

/// Applies theta `iterations` times, producing a new handle.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_qexp_theta(f: *const StQExp, iterations: u32, out: *mut *mut StQExp) -> StStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null_error("handle"))?;
        if out.is_null() {
            return Err(null_error("output pointer"));
        }
        let inner = f.inner.theta_iterate(iterations);
        *out = Box::into_raw(Box::new(StQExp { inner }));
        Ok(())
    })
}

/// Whether every stored coefficient sits at a `T` with `p | det T`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_qexp_is_weakly_p_singular(f: *const StQExp, out: *mut bool) -> StStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null_error("handle"))?;
        let out = out.as_mut().ok_or_else(|| null_error("output pointer"))?;
        *out = f.inner.is_weakly_p_singular();
        Ok(())
    })
}

/// Weight `(k1, k2)` of a q-expansion.
///
/// # Safety
/// `f` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_qexp_weight(f: *const StQExp, k1: *mut i64, k2: *mut i64) -> StStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null_error("handle"))?;
        let (k1, k2) = (
            k1.as_mut().ok_or_else(|| null_error("k1"))?,
            k2.as_mut().ok_or_else(|| null_error("k2"))?,
        );
        *k1 = f.inner.weight().k1();
        *k2 = f.inner.weight().k2();
        Ok(())
    })
}

/// Parallel shift `m` added by theta at weight `(k1, k2)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_m_shift(p: i64, k1: i64, k2: i64, out: *mut i64) -> StStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null_error("output pointer"))?;
        let w = Weight::new(k1, k2).map_err(|e| from_error(e.into()))?;
        *out = m_shift(prime(p)?, w).k1();
        Ok(())
    })
}

/// Theta cycle as JSON: one object from the closed form, or an array of
/// candidates when `solver` is set.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_cycle_json(
    p: i64,
    r: i64,
    k: i64,
    semi_ordinary: bool,
    solver: bool,
    out: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let p = prime(p)?;
        let value = if solver {
            cycle_solver(p, r, k, semi_ordinary).map(|v| serde_json::to_value(v).expect("serializable"))
        } else {
            cycle_closed_form(p, r, k, semi_ordinary).map(|v| serde_json::to_value(v).expect("serializable"))
        }
        .map_err(|e| from_error(e.into()))?;
        write_string(out, value.to_string())
    })
}

/// Classical Serre weight of a descriptor document.
///
/// # Safety
/// `descriptor` must be a nul-terminated string; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_serre_weight(
    descriptor: *const c_char,
    k1: *mut i64,
    k2: *mut i64,
    w: *mut i64,
) -> StStatus {
    guard(|| {
        let text = read_str(descriptor, "descriptor")?;
        let (k1, k2, w) = (
            k1.as_mut().ok_or_else(|| null_error("k1"))?,
            k2.as_mut().ok_or_else(|| null_error("k2"))?,
            w.as_mut().ok_or_else(|| null_error("w"))?,
        );
        let d: LocalRepDescriptor = serde_json::from_str(text).map_err(|e| {
            if e.classify() == serde_json::error::Category::Data {
                set_error(StStatus::Invalid, "invalid_document", &e.to_string())
            } else {
                set_error(StStatus::Parse, "parse", &e.to_string())
            }
        })?;
        let sw = d.serre_weight().map_err(|e| from_error(e.into()))?;
        (*k1, *k2, *w) = (sw.k1, sw.k2, sw.w);
        Ok(())
    })
}

/// Position `j` in the cycle and whether the small theta operator is used.
///
/// # Safety
/// Outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_selector(p: i64, w: i64, j: *mut i64, use_theta3: *mut bool) -> StStatus {
    guard(|| {
        let j = j.as_mut().ok_or_else(|| null_error("j"))?;
        let flag = use_theta3.as_mut().ok_or_else(|| null_error("use_theta3"))?;
        (*j, *flag) = selector(prime(p)?, w).map_err(|e| from_error(e.into()))?;
        Ok(())
    })
}
