//! C ABI over `quadlat`.
//!
//! Objects are opaque heap handles created by `ql_*_new` / producer calls and
//! released with the matching `ql_*_free`. Every fallible call returns a
//! `QlStatus`; on failure the message is kept per thread and can be read with
//! `ql_last_error_message`. Matrices cross the boundary column-major with
//! separate real and imaginary (or `a` and `b`) arrays.
//!
//! # Safety
//!
//! Every function taking pointers expects each one to be null or valid for the
//! stated number of elements, and handles to come from this library and not be
//! used after their `free`. Null is reported as `QL_STATUS_NULL_POINTER`.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use quadlat::cf::{computation_rate, Channel};
use quadlat::lattice::ComplexBasis;
use quadlat::reduction::{alll_reduce, gauss_reduce_basis, ReductionReport};
use quadlat::ring::{quantize, RingElem, RingSpec};
use quadlat::svp::shortest_vector;
use quadlat::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidRing = 3,
    Dimension = 4,
    DependentBasis = 5,
    Overflow = 6,
    NotConverged = 7,
    BufferTooSmall = 8,
    RankDeficient = 9,
    Panic = 99,
}

impl From<&Error> for QlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonPositiveD(_) | Error::NotSquareFree { .. } | Error::RingSyntax(_) | Error::RingMismatch(_) => {
                QlStatus::InvalidRing
            }
            Error::Overflow => QlStatus::Overflow,
            Error::Dimension(_) | Error::DimensionTooLarge { .. } => QlStatus::Dimension,
            Error::DependentBasis(_) | Error::ZeroVector(_) => QlStatus::DependentBasis,
            Error::IterationCap(_) | Error::BudgetExceeded { .. } => QlStatus::NotConverged,
            Error::RankDeficient(_) => QlStatus::RankDeficient,
            _ => QlStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: QlStatus, msg: impl Into<String>) -> QlStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), QlStatus>) -> QlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QlStatus::Panic, "panic inside quadlat"),
    }
}

fn lib<T>(r: quadlat::Result<T>) -> Result<T, QlStatus> {
    r.map_err(|e| fail(QlStatus::from(&e), e.to_string()))
}

fn nonnull<'a, T>(p: *const T, what: &str) -> Result<&'a T, QlStatus> {
    // SAFETY: callers pass either null or a pointer obtained from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail(QlStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<*mut T, QlStatus> {
    if p.is_null() {
        Err(fail(QlStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(p)
    }
}

/// Reads `len` values from `p`, which may be null only when `len == 0`.
fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], QlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(QlStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: the caller guarantees `len` readable elements.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], QlStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(fail(QlStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: the caller guarantees `len` writable elements.
    Ok(unsafe { std::slice::from_raw_parts_mut(p, len) })
}

fn need(len: usize, want: usize, what: &str) -> Result<(), QlStatus> {
    if len < want {
        Err(fail(QlStatus::BufferTooSmall, format!("{what} needs {want} elements, got {len}")))
    } else {
        Ok(())
    }
}

fn emit<T>(out: *mut *mut T, value: T) {
    // SAFETY: `out` was checked non-null by the caller.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

pub struct QlRing(RingSpec);
pub struct QlBasis(ComplexBasis);
pub struct QlReduction(ReductionReport);

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ql_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error of this thread into `buf` (always NUL-terminated when
/// `len > 0`) and returns the full message length, or 0 when there is none.
#[no_mangle]
pub unsafe extern "C" fn ql_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                // SAFETY: `len > 0` writable bytes.
                unsafe { *buf = 0 };
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len - 1);
            // SAFETY: `k + 1 <= len` bytes are writable.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, k);
                *buf.add(k) = 0;
            }
        }
        bytes.len()
    })
}

/// `Z[ξ]` for square-free `d > 0`.
#[no_mangle]
pub unsafe extern "C" fn ql_ring_new(d: i64, out: *mut *mut QlRing) -> QlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let r = lib(RingSpec::new(d))?;
        emit(out, QlRing(r));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ql_ring_free(ring: *mut QlRing) {
    if !ring.is_null() {
        // SAFETY: produced by `ql_ring_new`.
        drop(unsafe { Box::from_raw(ring) });
    }
}

/// `d` of the ring, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ql_ring_d(ring: *const QlRing) -> i64 {
    // SAFETY: null or a live handle.
    unsafe { ring.as_ref() }.map_or(0, |r| r.0.d())
}

/// Covering radius, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ql_ring_covering_radius(ring: *const QlRing) -> f64 {
    // SAFETY: null or a live handle.
    unsafe { ring.as_ref() }.map_or(f64::NAN, |r| r.0.covering_radius())
}

#[no_mangle]
pub unsafe extern "C" fn ql_ring_is_euclidean(ring: *const QlRing) -> bool {
    // SAFETY: null or a live handle.
    unsafe { ring.as_ref() }.is_some_and(|r| r.0.is_euclidean())
}

/// Nearest ring element `a + bξ` to `re + i·im`.
#[no_mangle]
pub unsafe extern "C" fn ql_quantize(
    ring: *const QlRing,
    re: f64,
    im: f64,
    out_a: *mut i64,
    out_b: *mut i64,
) -> QlStatus {
    guard(|| {
        let r = nonnull(ring, "ring")?;
        let (oa, ob) = (out_ptr(out_a, "out_a")?, out_ptr(out_b, "out_b")?);
        let q = lib(quantize(Complex64::new(re, im), &r.0))?;
        // SAFETY: both checked non-null.
        unsafe {
            *oa = q.a;
            *ob = q.b;
        }
        Ok(())
    })
}

/// Basis from `n·n` column-major real and imaginary parts.
#[no_mangle]
pub unsafe extern "C" fn ql_basis_new(
    ring: *const QlRing,
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QlBasis,
) -> QlStatus {
    guard(|| {
        let r = nonnull(ring, "ring")?;
        let out = out_ptr(out, "out")?;
        if n == 0 {
            return Err(fail(QlStatus::Dimension, "n must be positive"));
        }
        let len = n.checked_mul(n).ok_or_else(|| fail(QlStatus::Dimension, "n·n overflows"))?;
        let (re, im) = (slice(re, len, "re")?, slice(im, len, "im")?);
        let m = quadlat::lattice::CMatrix::from_fn(n, n, |i, j| Complex64::new(re[j * n + i], im[j * n + i]));
        let b = lib(ComplexBasis::new(r.0, m))?;
        emit(out, QlBasis(b));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ql_basis_free(basis: *mut QlBasis) {
    if !basis.is_null() {
        // SAFETY: produced by `ql_basis_new`.
        drop(unsafe { Box::from_raw(basis) });
    }
}

/// Dimension `n`, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ql_basis_dim(basis: *const QlBasis) -> usize {
    // SAFETY: null or a live handle.
    unsafe { basis.as_ref() }.map_or(0, |b| b.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn ql_alll_reduce(basis: *const QlBasis, delta: f64, out: *mut *mut QlReduction) -> QlStatus {
    guard(|| {
        let b = nonnull(basis, "basis")?;
        let out = out_ptr(out, "out")?;
        let rep = lib(alll_reduce(&b.0, delta))?;
        emit(out, QlReduction(rep));
        Ok(())
    })
}

/// Gauss reduction; the basis must be 2×2.
#[no_mangle]
pub unsafe extern "C" fn ql_gauss_reduce(basis: *const QlBasis, out: *mut *mut QlReduction) -> QlStatus {
    guard(|| {
        let b = nonnull(basis, "basis")?;
        let out = out_ptr(out, "out")?;
        let rep = lib(gauss_reduce_basis(&b.0))?;
        emit(out, QlReduction(rep));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ql_reduction_free(red: *mut QlReduction) {
    if !red.is_null() {
        // SAFETY: produced by a reduction call.
        drop(unsafe { Box::from_raw(red) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn ql_reduction_dim(red: *const QlReduction) -> usize {
    // SAFETY: null or a live handle.
    unsafe { red.as_ref() }.map_or(0, |r| r.0.reduced_basis.n())
}

#[no_mangle]
pub unsafe extern "C" fn ql_reduction_swaps(red: *const QlReduction) -> usize {
    // SAFETY: null or a live handle.
    unsafe { red.as_ref() }.map_or(0, |r| r.0.swaps)
}

/// Whether every recorded quality bound holds. False for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ql_reduction_bounds_hold(red: *const QlReduction) -> bool {
    // SAFETY: null or a live handle.
    unsafe { red.as_ref() }.is_some_and(|r| r.0.bounds_hold())
}

#[no_mangle]
pub unsafe extern "C" fn ql_reduction_non_euclidean(red: *const QlReduction) -> bool {
    // SAFETY: null or a live handle.
    unsafe { red.as_ref() }.is_some_and(|r| r.0.non_euclidean)
}

/// Squared column norms of the reduced basis into `out[0..n]`.
#[no_mangle]
pub unsafe extern "C" fn ql_reduction_squared_norms(red: *const QlReduction, out: *mut f64, len: usize) -> QlStatus {
    guard(|| {
        let r = nonnull(red, "reduction")?;
        let norms = &r.0.squared_norms;
        need(len, norms.len(), "out")?;
        slice_mut(out, len, "out")?[..norms.len()].copy_from_slice(norms);
        Ok(())
    })
}

/// Reduced basis, column-major, into `re[0..n·n]` and `im[0..n·n]`.
#[no_mangle]
pub unsafe extern "C" fn ql_reduction_basis(
    red: *const QlReduction,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QlStatus {
    guard(|| {
        let r = nonnull(red, "reduction")?;
        let m = r.0.reduced_basis.matrix();
        need(len, m.len(), "re/im")?;
        let (re, im) = (slice_mut(re, len, "re")?, slice_mut(im, len, "im")?);
        for (k, z) in m.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// Unimodular transform `U`, column-major, as `a[k] + b[k]·ξ`.
#[no_mangle]
pub unsafe extern "C" fn ql_reduction_transform(
    red: *const QlReduction,
    a: *mut i64,
    b: *mut i64,
    len: usize,
) -> QlStatus {
    guard(|| {
        let r = nonnull(red, "reduction")?;
        let u = &r.0.transform;
        let n = u.ncols();
        need(len, n * n, "a/b")?;
        let (a, b) = (slice_mut(a, len, "a")?, slice_mut(b, len, "b")?);
        for j in 0..n {
            for i in 0..n {
                let x = u.get(i, j);
                a[j * n + i] = x.a;
                b[j * n + i] = x.b;
            }
        }
        Ok(())
    })
}

/// Shortest nonzero vector: coefficients into `a[0..n]`, `b[0..n]` and its norm.
#[no_mangle]
pub unsafe extern "C" fn ql_svp(
    basis: *const QlBasis,
    a: *mut i64,
    b: *mut i64,
    len: usize,
    norm: *mut f64,
) -> QlStatus {
    guard(|| {
        let bs = nonnull(basis, "basis")?;
        let norm = out_ptr(norm, "norm")?;
        need(len, bs.0.n(), "a/b")?;
        let res = lib(shortest_vector(&bs.0))?;
        let (a, b) = (slice_mut(a, len, "a")?, slice_mut(b, len, "b")?);
        for (k, x) in res.coefficient.iter().enumerate() {
            a[k] = x.a;
            b[k] = x.b;
        }
        // SAFETY: checked non-null.
        unsafe { *norm = res.norm };
        Ok(())
    })
}

/// Computation rate (bits) of coefficient vector `a + bξ` over channel `h` at `snr_db`.
#[no_mangle]
pub unsafe extern "C" fn ql_computation_rate(
    ring: *const QlRing,
    n: usize,
    h_re: *const f64,
    h_im: *const f64,
    snr_db: f64,
    a: *const i64,
    b: *const i64,
    out_rate: *mut f64,
) -> QlStatus {
    guard(|| {
        let r = nonnull(ring, "ring")?;
        let out_rate = out_ptr(out_rate, "out_rate")?;
        let (hr, hi) = (slice(h_re, n, "h_re")?, slice(h_im, n, "h_im")?);
        let (aa, ab) = (slice(a, n, "a")?, slice(b, n, "b")?);
        let h = hr.iter().zip(hi).map(|(&x, &y)| Complex64::new(x, y)).collect();
        let coeff: Vec<RingElem> = aa.iter().zip(ab).map(|(&x, &y)| RingElem::new(x, y)).collect();
        let ch = lib(Channel::from_db(h, snr_db))?;
        let rate = lib(computation_rate(&ch, &coeff, r.0))?;
        // SAFETY: checked non-null.
        unsafe { *out_rate = rate };
        Ok(())
    })
}
