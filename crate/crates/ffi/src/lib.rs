//! C interface to `degdrop`.
//!
//! Every fallible call returns a [`DegdropStatus`] and writes its result
//! through an out-pointer. Handles are opaque and must be released with the
//! matching `*_free` function. After a failure,
//! [`degdrop_last_error_message`] describes it for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use degdrop::counting::{self, CountMode, CountQuery};
use degdrop::degree_drop::{self, ScanOptions, ScanReport};
use degdrop::{Degree, Error, FieldCtx, Scope, VectorialFunction};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegdropStatus {
    Ok = 0,
    InvalidParameter = 1,
    CapExceeded = 2,
    Consistency = 3,
    Parse = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Degree value used for the zero function.
pub const DEGDROP_DEGREE_NEG_INF: i32 = -1;

/// Finite field GF(2^n) with a fixed modulus.
pub struct DegdropField(FieldCtx);

/// Function F_2^n -> F_2^m stored as a truth table.
pub struct DegdropFunction(VectorialFunction);

/// Result of an exhaustive subspace scan.
pub struct DegdropScanReport(ScanReport);

/// Counting query selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegdropCountMode {
    DropHyperplanes = 0,
    FastPoints = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> DegdropStatus {
    match err {
        Error::InvalidParameter(_) => DegdropStatus::InvalidParameter,
        Error::CapExceeded(_) => DegdropStatus::CapExceeded,
        Error::Consistency(_) => DegdropStatus::Consistency,
        Error::Parse(_) => DegdropStatus::Parse,
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), DegdropStatus>) -> DegdropStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DegdropStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DegdropStatus::Panic
        }
    }
}

fn lib<T>(r: degdrop::Result<T>) -> Result<T, DegdropStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, DegdropStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null pointer argument".into());
        DegdropStatus::NullPointer
    })
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), DegdropStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(DegdropStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn degree_code(d: Degree) -> i32 {
    match d {
        Degree::NegInf => DEGDROP_DEGREE_NEG_INF,
        Degree::Finite(k) => k as i32,
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn degdrop_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn degdrop_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates GF(2^n). `modulus` 0 selects the default irreducible polynomial.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn degdrop_field_new(n: u32, modulus: u64, out: *mut *mut DegdropField) -> DegdropStatus {
    guard(|| {
        let ctx = lib(FieldCtx::new(n, (modulus != 0).then_some(modulus)))?;
        put(out, boxed(DegdropField(ctx)))
    })
}

/// # Safety
/// `field` must come from [`degdrop_field_new`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn degdrop_field_free(field: *mut DegdropField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn degdrop_field_modulus(field: *const DegdropField, out: *mut u64) -> DegdropStatus {
    guard(|| put(out, deref(field)?.0.modulus()))
}

/// x -> x^d on the field.
///
/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_function_power(
    field: *const DegdropField,
    d: u64,
    out: *mut *mut DegdropFunction,
) -> DegdropStatus {
    guard(|| {
        let f = VectorialFunction::power(&deref(field)?.0, d);
        put(out, boxed(DegdropFunction(f)))
    })
}

/// x -> x^(2^n - 2), with 0 -> 0.
///
/// # Safety
/// `field` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_function_inverse(
    field: *const DegdropField,
    out: *mut *mut DegdropFunction,
) -> DegdropStatus {
    guard(|| put(out, boxed(DegdropFunction(VectorialFunction::inverse(&deref(field)?.0)))))
}

/// Builds a function from `len == 2^n` outputs, each below `2^m`.
///
/// # Safety
/// `values` must point to `len` readable integers and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_function_from_table(
    n: u32,
    m: u32,
    values: *const u32,
    len: usize,
    out: *mut *mut DegdropFunction,
) -> DegdropStatus {
    guard(|| {
        if values.is_null() {
            set_error("null table".into());
            return Err(DegdropStatus::NullPointer);
        }
        let table = std::slice::from_raw_parts(values, len).to_vec();
        if n > 24 || table.len() != 1usize << n {
            set_error(format!("table has {len} entries, expected 2^{n}"));
            return Err(DegdropStatus::InvalidParameter);
        }
        put(out, boxed(DegdropFunction(lib(VectorialFunction::new(n, m, table))?)))
    })
}

/// # Safety
/// `f` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn degdrop_function_free(f: *mut DegdropFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Algebraic degree; [`DEGDROP_DEGREE_NEG_INF`] for the zero function.
///
/// # Safety
/// `f` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_function_degree(f: *const DegdropFunction, out: *mut i32) -> DegdropStatus {
    guard(|| put(out, degree_code(deref(f)?.0.degree())))
}

/// Whether the function is APN.
///
/// # Safety
/// `f` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_function_is_apn(f: *const DegdropFunction, out: *mut bool) -> DegdropStatus {
    guard(|| put(out, lib(degree_drop::is_apn(&deref(f)?.0))?))
}

/// Scans every subspace of codimension `k` (affine ones when `affine`).
/// `workers` 0 uses all cores.
///
/// # Safety
/// `f` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_scan(
    f: *const DegdropFunction,
    k: u32,
    affine: bool,
    workers: u32,
    out: *mut *mut DegdropScanReport,
) -> DegdropStatus {
    guard(|| {
        let scope = if affine { Scope::Affine } else { Scope::Linear };
        let opts = ScanOptions::with_workers(workers as usize);
        let rep = lib(degree_drop::scan(&deref(f)?.0, k, scope, &opts))?;
        put(out, boxed(DegdropScanReport(rep)))
    })
}

/// # Safety
/// `r` must come from [`degdrop_scan`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn degdrop_scan_report_free(r: *mut DegdropScanReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle and the out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_scan_report_summary(
    r: *const DegdropScanReport,
    total: *mut u64,
    drop_count: *mut u64,
    min_degree: *mut i32,
) -> DegdropStatus {
    guard(|| {
        let r = &deref(r)?.0;
        put(total, r.total)?;
        put(drop_count, r.drop_count)?;
        put(min_degree, degree_code(r.min_degree))
    })
}

/// Number of histogram bins, ordered by decreasing degree.
///
/// # Safety
/// `r` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_scan_report_bins(r: *const DegdropScanReport, out: *mut usize) -> DegdropStatus {
    guard(|| put(out, deref(r)?.0.histogram.len()))
}

/// # Safety
/// `r` must be a live handle and the out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_scan_report_bin(
    r: *const DegdropScanReport,
    index: usize,
    degree: *mut i32,
    count: *mut u64,
) -> DegdropStatus {
    guard(|| {
        let bin = deref(r)?.0.histogram.get(index).copied().ok_or_else(|| {
            set_error(format!("bin {index} out of range"));
            DegdropStatus::InvalidParameter
        })?;
        put(degree, degree_code(bin.degree))?;
        put(count, bin.count)
    })
}

/// Full report as JSON. Release with [`degdrop_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_scan_report_json(r: *const DegdropScanReport, out: *mut *mut c_char) -> DegdropStatus {
    guard(|| put(out, c_string(deref(r)?.0.to_json())))
}

/// Counts homogeneous degree-`r` functions F_2^n -> F_2^m. A negative `j`
/// counts those with no nonzero drop direction (or fast point); otherwise
/// those whose direction space has dimension exactly `j`. The count is
/// written as a decimal string; release it with [`degdrop_string_free`].
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn degdrop_count(
    mode: DegdropCountMode,
    n: u32,
    m: u32,
    r: u32,
    j: i32,
    out: *mut *mut c_char,
) -> DegdropStatus {
    guard(|| {
        let mode = match mode {
            DegdropCountMode::DropHyperplanes => CountMode::DropHyperplanes,
            DegdropCountMode::FastPoints => CountMode::FastPoints,
        };
        let mut q = CountQuery::new(n, m, r);
        if j >= 0 {
            q = q.with_j(j as u32);
        }
        let c = lib(counting::count(&q, mode))?;
        put(out, c_string(c.to_string()))
    })
}
