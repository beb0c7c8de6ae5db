//! C ABI over `dseries`.
//!
//! Every function returns a [`DsStatus`]; results go through out-pointers. On failure the message is
//! available from [`ds_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dseries::cubic_oracle::{enumerate_cubics, CubicTable};
use dseries::dirichlet::IntegerSeries;
use dseries::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    InputError = 2,
    ResourceError = 3,
    InternalError = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Flattened series: `(n, a_n)` pairs with nonzero `a_n`, sorted by `n`.
pub struct DsSeries {
    terms: Vec<(u64, i64)>,
}

/// Counts of cubic fields by discriminant.
pub struct DsCubicTable {
    table: CubicTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> DsStatus {
    match e {
        Error::Input(_) => DsStatus::InputError,
        Error::Resource(_) => DsStatus::ResourceError,
        Error::Invariant(_) => DsStatus::InternalError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (DsStatus, String)>) -> DsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DsStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            DsStatus::Panic
        }
    }
}

fn lib<T>(r: dseries::Result<T>) -> Result<T, (DsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (DsStatus, String) {
    (DsStatus::NullPointer, format!("{name} is null"))
}

fn to_ffi_series(s: &IntegerSeries) -> Result<DsSeries, (DsStatus, String)> {
    let terms = s
        .terms
        .iter()
        .map(|(&n, c)| {
            i64::try_from(c)
                .map(|v| (n, v))
                .map_err(|_| (DsStatus::ResourceError, format!("coefficient at {n} does not fit in 64 bits")))
        })
        .collect::<Result<_, _>>()?;
    Ok(DsSeries { terms })
}

/// Computes the series for degree `ell` and resolvent discriminant `d` up to `x`.
///
/// `fields` is null or a NUL-terminated field list (`ell D k c0 ... c_{ell-1}` per line).
/// On success `*out` owns a series to be released with [`ds_series_free`].
///
/// # Safety
/// `fields` must be null or a valid C string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_phi(ell: u64, d: i64, x: u64, fields: *const c_char, out: *mut *mut DsSeries) -> DsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = if fields.is_null() {
            None
        } else {
            Some(
                CStr::from_ptr(fields)
                    .to_str()
                    .map_err(|_| (DsStatus::InputError, "fields is not UTF-8".to_owned()))?,
            )
        };
        let (s, _) = lib(dseries::cli::compute_series(ell, d, x, text, None))?;
        *out = Box::into_raw(Box::new(to_ffi_series(&s)?));
        Ok(())
    })
}

/// Number of nonzero terms.
///
/// # Safety
/// `s` must come from [`ds_phi`]; `len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_series_len(s: *const DsSeries, len: *mut usize) -> DsStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        *len.as_mut().ok_or_else(|| null("len"))? = s.terms.len();
        Ok(())
    })
}

/// The `i`-th nonzero term `(n, a_n)` in increasing `n`.
///
/// # Safety
/// `s` must come from [`ds_phi`]; `n` and `c` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_series_term(s: *const DsSeries, i: usize, n: *mut u64, c: *mut i64) -> DsStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        let &(tn, tc) = s
            .terms
            .get(i)
            .ok_or_else(|| (DsStatus::InputError, format!("index {i} out of range {}", s.terms.len())))?;
        *n.as_mut().ok_or_else(|| null("n"))? = tn;
        *c.as_mut().ok_or_else(|| null("c"))? = tc;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or come from [`ds_phi`], and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ds_series_free(s: *mut DsSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Kronecker symbol `(d/n)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_kronecker(d: i64, n: i64, out: *mut i32) -> DsStatus {
    guard(|| {
        let v = lib(dseries::arith::kronecker(d, n))?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// Enumerates cubic fields with `|Disc| <= x`.
///
/// # Safety
/// `out` must be valid for writes; release the table with [`ds_cubic_table_free`].
#[no_mangle]
pub unsafe extern "C" fn ds_cubic_table_build(x: u64, out: *mut *mut DsCubicTable) -> DsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let table = lib(enumerate_cubics(x))?;
        *out = Box::into_raw(Box::new(DsCubicTable { table }));
        Ok(())
    })
}

/// Number of cubic fields of discriminant exactly `d`.
///
/// # Safety
/// `t` must come from [`ds_cubic_table_build`]; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_cubic_table_n3(t: *const DsCubicTable, d: i64, out: *mut u64) -> DsStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        let v = lib(t.table.n3(d))?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// # Safety
/// `t` must be null or come from [`ds_cubic_table_build`], and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ds_cubic_table_free(t: *mut DsCubicTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Leading constant of the partial counts, to `digits` significant digits.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_residue_constant(ell: u64, d: i64, digits: u32, out: *mut f64) -> DsStatus {
    guard(|| {
        let c = lib(dseries::dirichlet::residue_constant(ell, d, digits))?;
        *out.as_mut().ok_or_else(|| null("out"))? = c.value;
        Ok(())
    })
}

/// Whether the fundamental unit of `Q(sqrt ell)` has `ell`-free second coordinate.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ds_aac_holds(ell: u64, out: *mut bool) -> DsStatus {
    guard(|| {
        let v = lib(dseries::quadfield::aac_holds(ell))?;
        *out.as_mut().ok_or_else(|| null("out"))? = v;
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn ds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}
