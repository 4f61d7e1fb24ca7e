//! C ABI for the dihull toolkit.
//!
//! The surface is deliberately small: parse a document in the dihull text
//! format into an opaque handle, run the named report commands against it,
//! and run bounded searches. Every report is returned as a heap-allocated
//! NUL-terminated string that the caller releases with
//! [`dihull_string_free`]. Failures set a thread-local message retrievable
//! via [`dihull_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dihull::cli::run_on_document;
use dihull::input::{self, InputDocument};
use dihull::search::{run_search, SearchMode, SearchSpec, StructureKind};
use dihull::Error;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DihullStatus {
    /// Success; any claim checked by the command holds.
    Ok = 0,
    /// The command ran and a checked claim failed; the report contains the
    /// witness.
    ClaimFailed = 1,
    /// Malformed input: parse error, invalid structure, or a cap exceeded.
    InvalidInput = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
}

/// Opaque parsed document.
pub struct DihullDocument {
    doc: InputDocument,
}

fn status_of(err: &Error) -> DihullStatus {
    match err.exit_code() {
        1 => DihullStatus::ClaimFailed,
        _ => DihullStatus::InvalidInput,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, DihullStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(DihullStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        DihullStatus::InvalidUtf8
    })
}

fn export_string(s: String, out: *mut *mut c_char) -> DihullStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            DihullStatus::Ok
        }
        Err(_) => {
            set_error("report contained an interior NUL byte");
            DihullStatus::InvalidInput
        }
    }
}

/// Parses a document in the dihull text format.
///
/// On success `*out` owns the handle; release it with [`dihull_document_free`].
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dihull_parse(
    text: *const c_char,
    out: *mut *mut DihullDocument,
) -> DihullStatus {
    if out.is_null() {
        set_error("null output pointer");
        return DihullStatus::NullPointer;
    }
    unsafe { *out = ptr::null_mut() };
    let text = match unsafe { read_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match input::parse(text, None) {
        Ok(doc) => {
            let handle = Box::new(DihullDocument { doc });
            unsafe { *out = Box::into_raw(handle) };
            DihullStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Releases a document handle. Null is ignored.
///
/// # Safety
/// `doc` must have come from [`dihull_parse`] and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn dihull_document_free(doc: *mut DihullDocument) {
    if !doc.is_null() {
        drop(unsafe { Box::from_raw(doc) });
    }
}

/// Number of declared elements.
///
/// # Safety
/// `doc` must be a live handle from [`dihull_parse`] (or null, giving 0).
#[no_mangle]
pub unsafe extern "C" fn dihull_element_count(doc: *const DihullDocument) -> usize {
    if doc.is_null() {
        return 0;
    }
    unsafe { &*doc }.doc.labels.len()
}

/// Number of declared states (0 when no `states` line is present).
///
/// # Safety
/// `doc` must be a live handle from [`dihull_parse`] (or null, giving 0).
#[no_mangle]
pub unsafe extern "C" fn dihull_state_count(doc: *const DihullDocument) -> usize {
    if doc.is_null() {
        return 0;
    }
    unsafe { &*doc }.doc.states.as_ref().map_or(0, |s| s.len())
}

/// Runs a report command (`check`, `hull`, `macneille`, `cartan`, `ortho`,
/// `dhull`) against the document. `max_subset_bits` caps the
/// subset-enumerating algorithms; pass 0 for the default of 16.
///
/// The report text is stored in `*out_report` on both `Ok` and
/// `ClaimFailed`; release it with [`dihull_string_free`].
///
/// # Safety
/// `doc` must be a live handle; `command` a valid NUL-terminated string;
/// `out_report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dihull_run(
    doc: *const DihullDocument,
    command: *const c_char,
    max_subset_bits: usize,
    out_report: *mut *mut c_char,
) -> DihullStatus {
    if doc.is_null() || out_report.is_null() {
        set_error("null argument");
        return DihullStatus::NullPointer;
    }
    unsafe { *out_report = ptr::null_mut() };
    let command = match unsafe { read_str(command) } {
        Ok(c) => c,
        Err(s) => return s,
    };
    let bits = if max_subset_bits == 0 {
        16
    } else {
        max_subset_bits
    };
    let handle = unsafe { &*doc };
    match run_on_document(&handle.doc, command, bits, 24) {
        Ok((report, code)) => {
            let status = if code == 0 {
                DihullStatus::Ok
            } else {
                DihullStatus::ClaimFailed
            };
            let export = export_string(report, out_report);
            if export != DihullStatus::Ok {
                return export;
            }
            status
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Runs a bounded search. `kind` is one of `lattice`, `ortholattice`,
/// `cartan`, `weak-cartan`; `mode` one of `witness`, `counterexample`,
/// `count`. `Ok` means the search completed with its goal satisfied the
/// same way the CLI exit code would report it.
///
/// # Safety
/// `kind`, `predicate` and `mode` must be valid NUL-terminated strings and
/// `out_report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dihull_search(
    kind: *const c_char,
    predicate: *const c_char,
    max_elements: usize,
    max_states: usize,
    mode: *const c_char,
    seed: u64,
    sampled: bool,
    samples: usize,
    out_report: *mut *mut c_char,
) -> DihullStatus {
    if out_report.is_null() {
        set_error("null output pointer");
        return DihullStatus::NullPointer;
    }
    unsafe { *out_report = ptr::null_mut() };
    let (kind, predicate, mode) = match (
        unsafe { read_str(kind) },
        unsafe { read_str(predicate) },
        unsafe { read_str(mode) },
    ) {
        (Ok(k), Ok(p), Ok(m)) => (k, p, m),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    let spec = SearchSpec {
        kind: match StructureKind::parse(kind) {
            Ok(k) => k,
            Err(e) => {
                set_error(e.to_string());
                return DihullStatus::InvalidInput;
            }
        },
        predicate: predicate.to_string(),
        max_elements,
        max_states,
        mode: match SearchMode::parse(mode) {
            Ok(m) => m,
            Err(e) => {
                set_error(e.to_string());
                return DihullStatus::InvalidInput;
            }
        },
        seed,
        sampled,
        samples,
        max_bits: 16,
    };
    match run_search(&spec) {
        Ok(outcome) => {
            let failed = match spec.mode {
                SearchMode::FindWitness => !outcome.found,
                SearchMode::FindCounterexample => outcome.found,
                SearchMode::Count => false,
            };
            let export = export_string(outcome.report, out_report);
            if export != DihullStatus::Ok {
                return export;
            }
            if failed {
                DihullStatus::ClaimFailed
            } else {
                DihullStatus::Ok
            }
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a dihull function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn dihull_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Last error message on this thread, or null when none was recorded.
/// Release with [`dihull_string_free`].
#[no_mangle]
pub extern "C" fn dihull_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.clone().into_raw())
            .unwrap_or(ptr::null_mut())
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn dihull_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
