//! C ABI over the DSL, the catalog and the acceptance suite.
//!
//! Every function returns an [`LfStatus`]. Strings handed out by the library
//! are NUL-terminated UTF-8 and must be released with [`lf_string_free`];
//! workspaces with [`lf_workspace_free`]. On any status other than `LF_OK`
//! (or `LF_CHECK_FAILED` / `LF_PRECONDITION_FAILED` from a run),
//! [`lf_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lieforge::catalog;
use lieforge::dsl::{self, catalog_ident, catalog_json, emit_catalog_dsl, RunOptions, Workspace};
use lieforge::suite;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LfStatus {
    LfOk = 0,
    /// The run completed and at least one check failed.
    LfCheckFailed = 1,
    /// The run completed and a check's preconditions did not hold.
    LfPreconditionFailed = 2,
    LfParseError = 3,
    LfNullArgument = 4,
    LfInvalidUtf8 = 5,
    LfNotFound = 6,
    LfPanic = 7,
}

/// A parsed program; opaque to C.
pub struct LfWorkspace {
    inner: Workspace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> LfStatus) -> LfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            LfStatus::LfPanic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, LfStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(LfStatus::LfNullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        LfStatus::LfInvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> LfStatus {
    if out.is_null() {
        set_error("null output pointer");
        return LfStatus::LfNullArgument;
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            LfStatus::LfOk
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            LfStatus::LfPanic
        }
    }
}

/// Message for the last failing call on this thread, or NULL. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses DSL source into a new workspace.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_workspace_parse(
    text: *const c_char,
    out: *mut *mut LfWorkspace,
) -> LfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return LfStatus::LfNullArgument;
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match dsl::parse(text) {
            Ok(ws) => {
                *out = Box::into_raw(Box::new(LfWorkspace { inner: ws }));
                LfStatus::LfOk
            }
            Err(e) => {
                set_error(e.to_string());
                LfStatus::LfParseError
            }
        }
    })
}

/// # Safety
/// `ws` must come from [`lf_workspace_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lf_workspace_free(ws: *mut LfWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Runs the check queue and writes the JSON report to `json_out`.
/// `threads == 0` uses the default pool.
///
/// # Safety
/// `ws` must be a live workspace; `json_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_workspace_run(
    ws: *const LfWorkspace,
    threads: usize,
    json_out: *mut *mut c_char,
) -> LfStatus {
    guard(|| {
        let Some(ws) = ws.as_ref() else {
            set_error("null workspace");
            return LfStatus::LfNullArgument;
        };
        let opts = RunOptions {
            threads: (threads > 0).then_some(threads),
        };
        let report = dsl::run(&ws.inner, &opts);
        let st = write_string(json_out, report.to_json());
        if st != LfStatus::LfOk {
            return st;
        }
        match report.exit_code() {
            0 => LfStatus::LfOk,
            1 => LfStatus::LfCheckFailed,
            _ => LfStatus::LfPreconditionFailed,
        }
    })
}

/// Canonical DSL text of a workspace.
///
/// # Safety
/// `ws` must be a live workspace; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_workspace_to_dsl(
    ws: *const LfWorkspace,
    out: *mut *mut c_char,
) -> LfStatus {
    guard(|| match ws.as_ref() {
        Some(ws) => write_string(out, ws.inner.to_dsl()),
        None => {
            set_error("null workspace");
            LfStatus::LfNullArgument
        }
    })
}

/// Emits a catalog entry as DSL (`as_json == 0`) or JSON.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params` must point to
/// `n_params` values (or be NULL when `n_params == 0`), `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_catalog_emit(
    name: *const c_char,
    params: *const usize,
    n_params: usize,
    as_json: i32,
    out: *mut *mut c_char,
) -> LfStatus {
    guard(|| {
        let name = match read_str(name) {
            Ok(n) => n,
            Err(s) => return s,
        };
        let params: &[usize] = if n_params == 0 {
            &[]
        } else if params.is_null() {
            set_error("null parameter array");
            return LfStatus::LfNullArgument;
        } else {
            std::slice::from_raw_parts(params, n_params)
        };
        let entry = match catalog::lookup(name, params) {
            Ok(e) => e,
            Err(e) => {
                set_error(e.to_string());
                return LfStatus::LfNotFound;
            }
        };
        let text = if as_json != 0 {
            catalog_json(&entry).to_string()
        } else {
            emit_catalog_dsl(&entry, &catalog_ident(name, params))
        };
        write_string(out, text)
    })
}

/// Runs the acceptance suite; `LF_OK` iff every criterion passes.
///
/// # Safety
/// `json_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_acceptance(json_out: *mut *mut c_char) -> LfStatus {
    guard(|| {
        let results = suite::run_all();
        let text = serde_json::to_string(&results).unwrap_or_default();
        let st = write_string(json_out, text);
        if st != LfStatus::LfOk {
            return st;
        }
        if results.iter().all(|r| r.pass) {
            LfStatus::LfOk
        } else {
            LfStatus::LfCheckFailed
        }
    })
}
