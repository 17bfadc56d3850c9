//! C ABI for qfsys.
//!
//! Systems live behind an opaque `QfsSystem` handle created from the JSON
//! system format and released with `qfs_system_free`. Every fallible call
//! returns a `QfsStatus`; on failure `qfs_last_error` describes the problem
//! for the calling thread. Strings handed out by the library must be
//! released with `qfs_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qfsys::closure::{closure_basis, signature_scan};
use qfsys::involutions::{theorem1_decide, weak_order_with};
use qfsys::pairs::{rebase_pair, theorem2_witness};
use qfsys::quadforms::{MatrixFile, QFSystem, QuadForm};
use qfsys::Error;

/// Opaque system handle.
pub struct QfsSystem(QFSystem);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// A typed mathematical refusal: singular system, degree cap, unmet
    /// precondition or unsupported input.
    Refused = 5,
    /// The search finished without finding what was asked for.
    NotFound = 6,
    Internal = 7,
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> QfsStatus {
    match err {
        Error::Parse(_) => QfsStatus::Parse,
        Error::Internal(_) => QfsStatus::Internal,
        e if e.is_mathematical() => QfsStatus::Refused,
        _ => QfsStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into a status plus the thread's last
/// error message.
fn guard(f: impl FnOnce() -> Result<(), (QfsStatus, String)>) -> QfsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QfsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside qfsys");
            QfsStatus::Panic
        }
    }
}

fn lib(err: Error) -> (QfsStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (QfsStatus, String) {
    (QfsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn system_ref<'a>(sys: *const QfsSystem) -> Result<&'a QFSystem, (QfsStatus, String)> {
    // SAFETY: the caller passes a live handle from qfs_system_from_json or null.
    unsafe { sys.as_ref() }.map(|s| &s.0).ok_or_else(|| null("system"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (QfsStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and, per the contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (QfsStatus, String)> {
    let c = CString::new(s).map_err(|_| (QfsStatus::Internal, "nul byte in output".to_string()))?;
    unsafe { write_out(out, c.into_raw()) }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next qfsys call on the same thread.
#[no_mangle]
pub extern "C" fn qfs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse a system from its JSON text. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_system_from_json(json: *const c_char, out: *mut *mut QfsSystem) -> QfsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        // SAFETY: non-null and nul-terminated per the contract.
        let text = unsafe { CStr::from_ptr(json) }.to_str().map_err(|e| (QfsStatus::InvalidUtf8, e.to_string()))?;
        let sys = QFSystem::from_json(text).map_err(lib)?;
        unsafe { write_out(out, Box::into_raw(Box::new(QfsSystem(sys)))) }
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `sys` must come from `qfs_system_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qfs_system_free(sys: *mut QfsSystem) {
    if !sys.is_null() {
        // SAFETY: allocated by Box::into_raw in qfs_system_from_json.
        drop(unsafe { Box::from_raw(sys) });
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qfs_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw in write_string.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Dimension of the underlying space.
///
/// # Safety
/// `sys` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_system_dim(sys: *const QfsSystem, out: *mut usize) -> QfsStatus {
    guard(|| unsafe { write_out(out, system_ref(sys)?.dim()) })
}

/// Number of forms in the system.
///
/// # Safety
/// `sys` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_system_len(sys: *const QfsSystem, out: *mut usize) -> QfsStatus {
    guard(|| unsafe { write_out(out, system_ref(sys)?.len()) })
}

/// Canonical JSON of the system. Free the result with `qfs_string_free`.
///
/// # Safety
/// `sys` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_system_to_json(sys: *const QfsSystem, out: *mut *mut c_char) -> QfsStatus {
    guard(|| unsafe { write_string(out, system_ref(sys)?.to_json()) })
}

/// Trace test: signature of the involution trace form, and whether some
/// multiple of the system is hyperbolic (that signature is zero).
///
/// # Safety
/// `sys` must be a live handle; the outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_decide(sys: *const QfsSystem, trace_sgn: *mut i64, exists_n: *mut bool) -> QfsStatus {
    guard(|| {
        let d = theorem1_decide(unsafe { system_ref(sys)? });
        unsafe {
            write_out(trace_sgn, d.trace_sgn)?;
            write_out(exists_n, d.exists_n)
        }
    })
}

/// Dimension of the closure of the system.
///
/// # Safety
/// `sys` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_closure_dim(sys: *const QfsSystem, out: *mut usize) -> QfsStatus {
    guard(|| unsafe { write_out(out, closure_basis(system_ref(sys)?).dim()) })
}

/// Smallest `2^k` with `k <= cap` such that that many copies are hyperbolic.
/// Returns `NotFound` when no level up to the cap was found; `*exact` then
/// tells whether every level was ruled out rather than merely not found.
///
/// # Safety
/// `sys` must be a live handle; the outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_weak_order(
    sys: *const QfsSystem,
    cap: u32,
    budget: u32,
    order: *mut u64,
    exact: *mut bool,
) -> QfsStatus {
    guard(|| {
        let wo = weak_order_with(unsafe { system_ref(sys)? }, cap, i64::from(budget)).map_err(lib)?;
        unsafe { write_out(exact, wo.exact)? };
        match wo.order {
            Some(m) => unsafe { write_out(order, m) },
            None => Err((QfsStatus::NotFound, format!("no hyperbolic multiple up to 2^{cap} copies"))),
        }
    })
}

/// A closure form of nonzero signature, as a one-matrix JSON payload. Pairs
/// use the exact pair construction; larger systems a scan of height
/// `budget` over the closure basis. Returns `NotFound` when there is none.
///
/// # Safety
/// `sys` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qfs_witness_json(sys: *const QfsSystem, budget: u32, out: *mut *mut c_char) -> QfsStatus {
    guard(|| {
        let sys = unsafe { system_ref(sys)? };
        let form: Option<QuadForm> = if sys.len() == 2 {
            theorem2_witness(&rebase_pair(sys).map_err(lib)?).map_err(lib)?.map(|w| w.form)
        } else {
            signature_scan(&closure_basis(sys), budget)
        };
        let form = form.ok_or_else(|| (QfsStatus::NotFound, "no closure form of nonzero signature".into()))?;
        let file = MatrixFile::new(sys.dim(), vec![form.gram().clone()], vec!["closure_form".into()]).map_err(lib)?;
        unsafe { write_string(out, file.to_json()) }
    })
}
