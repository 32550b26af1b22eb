//! C ABI over the tasbench library.
//!
//! Every fallible call returns a [`TasbenchStatus`]. On anything other than
//! `TASBENCH_STATUS_OK` a message is available from [`tasbench_last_error`]
//! on the same thread until the next call. Handles are opaque and owned by the
//! caller, who releases them with the matching `_free` function. Strings
//! returned through out-pointers are released with [`tasbench_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tasbench::atam::Tas;
use tasbench::consistency::verify_locally_consistent;
use tasbench::encode::{compile, BitString, CompileParams, CompiledSystem, EncodeError};
use tasbench::format::parse_tas;
use tasbench::lookup::{trace_lookup, LookupError};
use tasbench::verify::full_report;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TasbenchStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// The tile system text did not parse.
    Parse = 3,
    /// Compilation was refused because the system is not locally consistent.
    NotLocallyConsistent = 4,
    /// Compilation failed for another reason.
    Compile = 5,
    /// The random-bit string was not made of '0' and '1'.
    InvalidBits = 6,
    /// The address is past the last table entry.
    AddressRange = 7,
    /// The addressed entry has no sub-entries.
    EmptyEntry = 8,
    /// The table itself is malformed.
    Lookup = 9,
    /// The library panicked; the message has the details.
    Internal = 10,
}

/// A parsed tile assembly system.
pub struct TasbenchSystem {
    tas: Tas,
}

/// A compiled lookup table together with its source system.
pub struct TasbenchCompiled {
    cs: CompiledSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: TasbenchStatus, msg: impl Into<String>) -> TasbenchStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> TasbenchStatus) -> TasbenchStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(TasbenchStatus::Internal, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TasbenchStatus> {
    if s.is_null() {
        return Err(fail(TasbenchStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(TasbenchStatus::InvalidUtf8, e.to_string()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn tasbench_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tasbench_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a tile system in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tasbench_system_parse(text: *const c_char, out: *mut *mut TasbenchSystem) -> TasbenchStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TasbenchStatus::NullArgument, "null out pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_tas(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(TasbenchSystem { tas: doc.tas }));
                TasbenchStatus::Ok
            }
            Err(e) => fail(TasbenchStatus::Parse, e.to_string()),
        }
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `sys` must come from [`tasbench_system_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tasbench_system_free(sys: *mut TasbenchSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of tile types, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tasbench_system_tile_count(sys: *const TasbenchSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.tas.tiles().len())
}

/// Checks local consistency over assemblies of at most `bound` tiles.
/// `witness` may be null; otherwise it receives a description of the
/// violation, or null when the system passes.
///
/// # Safety
/// `sys` must be a live handle, `consistent` a valid pointer, and `witness`
/// null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tasbench_check_local_consistency(
    sys: *const TasbenchSystem,
    bound: usize,
    consistent: *mut bool,
    witness: *mut *mut c_char,
) -> TasbenchStatus {
    guarded(|| {
        let (Some(sys), false) = (sys.as_ref(), consistent.is_null()) else {
            return fail(TasbenchStatus::NullArgument, "null argument");
        };
        let report = verify_locally_consistent(&sys.tas, bound);
        let w = report.verdict.witness();
        *consistent = w.is_none();
        if !witness.is_null() {
            *witness = w.map_or(ptr::null_mut(), |w| into_c_string(w.to_string()));
        }
        TasbenchStatus::Ok
    })
}

/// Compiles the lookup table. With `force` the local-consistency check is
/// skipped.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tasbench_compile(
    sys: *const TasbenchSystem,
    force: bool,
    out: *mut *mut TasbenchCompiled,
) -> TasbenchStatus {
    guarded(|| {
        let (Some(sys), false) = (sys.as_ref(), out.is_null()) else {
            return fail(TasbenchStatus::NullArgument, "null argument");
        };
        *out = ptr::null_mut();
        let params = CompileParams { force, ..CompileParams::default() };
        match compile(&sys.tas, &params) {
            Ok(cs) => {
                *out = Box::into_raw(Box::new(TasbenchCompiled { cs }));
                TasbenchStatus::Ok
            }
            Err(e @ EncodeError::NotLocallyConsistent(_)) => fail(TasbenchStatus::NotLocallyConsistent, e.to_string()),
            Err(e) => fail(TasbenchStatus::Compile, e.to_string()),
        }
    })
}

/// Releases a compiled system. Null is ignored.
///
/// # Safety
/// `cs` must come from [`tasbench_compile`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tasbench_compiled_free(cs: *mut TasbenchCompiled) {
    if !cs.is_null() {
        drop(Box::from_raw(cs));
    }
}

/// Number of table entries, or 0 for a null handle.
///
/// # Safety
/// `cs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tasbench_compiled_entry_count(cs: *const TasbenchCompiled) -> u64 {
    cs.as_ref().map_or(0, |c| c.cs.entry_count)
}

/// Table length in columns, or 0 for a null handle.
///
/// # Safety
/// `cs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tasbench_compiled_table_len(cs: *const TasbenchCompiled) -> usize {
    cs.as_ref().map_or(0, |c| c.cs.table.len())
}

/// The compiled artifact as text, or null for a null handle. Free with
/// [`tasbench_string_free`].
///
/// # Safety
/// `cs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tasbench_compiled_to_text(cs: *const TasbenchCompiled) -> *mut c_char {
    cs.as_ref().map_or(ptr::null_mut(), |c| into_c_string(c.cs.to_text()))
}

/// Runs the table sweep for `addr` with random bits `bits` (most significant
/// first; null means all zeros). On success `selected` receives the index of
/// the chosen sub-entry in table order and `count` the number of sub-entries.
///
/// # Safety
/// `cs` must be a live handle, `bits` null or a NUL-terminated string, and
/// `selected` and `count` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tasbench_lookup(
    cs: *const TasbenchCompiled,
    addr: u64,
    bits: *const c_char,
    selected: *mut u64,
    count: *mut u64,
) -> TasbenchStatus {
    guarded(|| {
        let (Some(c), false, false) = (cs.as_ref(), selected.is_null(), count.is_null()) else {
            return fail(TasbenchStatus::NullArgument, "null argument");
        };
        let cs = &c.cs;
        let b: BitString = if bits.is_null() {
            BitString::zeros(cs.random_bits)
        } else {
            match read_str(bits).map(str::parse::<BitString>) {
                Ok(Ok(b)) => b,
                Ok(Err(e)) => return fail(TasbenchStatus::InvalidBits, e),
                Err(status) => return status,
            }
        };
        match trace_lookup(&cs.table, &cs.glues, addr, &b, false) {
            Ok((sel, _)) => {
                *selected = sel.selected_index;
                *count = sel.sub_entry_count;
                TasbenchStatus::Ok
            }
            Err(e @ LookupError::AddressRange { .. }) => fail(TasbenchStatus::AddressRange, e.to_string()),
            Err(e @ LookupError::EmptyEntry { .. }) => fail(TasbenchStatus::EmptyEntry, e.to_string()),
            Err(e) => fail(TasbenchStatus::Lookup, e.to_string()),
        }
    })
}

/// Checks the simulation conditions up to `bound`. `passed` receives the
/// verdict; `report`, if not null, receives the full report text.
///
/// # Safety
/// `cs` must be a live handle, `passed` a valid pointer, and `report` null or
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tasbench_verify(
    cs: *const TasbenchCompiled,
    bound: usize,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> TasbenchStatus {
    guarded(|| {
        let (Some(c), false) = (cs.as_ref(), passed.is_null()) else {
            return fail(TasbenchStatus::NullArgument, "null argument");
        };
        let r = full_report(&c.cs, bound);
        *passed = r.passed();
        if !report.is_null() {
            *report = into_c_string(r.to_text());
        }
        TasbenchStatus::Ok
    })
}
