//! C ABI over the gapline library.
//!
//! Matrices and bound curves are opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`GaplineStatus`]; the message of the last failure on the calling thread is
//! available from [`gapline_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use gapline::bounds::proj::K2Variant;
use gapline::bounds::{bound_curve, BoundContext, BoundCurve, Family};
use gapline::projector::{decay_profile, first_below, spectral_projector, truncation_bandwidth, DecaySource};
use gapline::spectrum::{distinct_magnitudes_in, DEFAULT_TOL_CLUSTER};
use gapline::{generate, io, BandedHermitian, Error, SeededRng, SpectrumSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaplineStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Io = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque banded symmetric matrix.
pub struct GaplineMatrix {
    inner: BandedHermitian,
}

/// Opaque bound curve over `k = 0..=kmax`.
pub struct GaplineBoundCurve {
    inner: BoundCurve,
}

/// Spectral inclusion `[-b1, -a] ∪ [a, b2]` plus evaluation settings.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GaplineBoundSpec {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub m: usize,
    pub kmax: usize,
    /// Quadrature tolerance; 0 selects the library default.
    pub tol: f64,
    /// 0 for the derived K2 constant, 1 for the printed one.
    pub k2_printed: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GaplineStatus {
    match e {
        Error::Io { .. } => GaplineStatus::Io,
        e if e.is_numerical() => GaplineStatus::Numerical,
        _ => GaplineStatus::InvalidArgument,
    }
}

fn fail(status: GaplineStatus, msg: impl Into<String>) -> GaplineStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), GaplineStatus>) -> GaplineStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GaplineStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(GaplineStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn lib<T>(r: gapline::Result<T>) -> Result<T, GaplineStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], GaplineStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(GaplineStatus::NullArgument, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, need: usize, what: &str) -> Result<&'a mut [T], GaplineStatus> {
    if len < need {
        return Err(fail(
            GaplineStatus::BufferTooSmall,
            format!("{what} holds {len} values, {need} needed"),
        ));
    }
    if p.is_null() {
        return Err(fail(GaplineStatus::NullArgument, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, GaplineStatus> {
    p.as_ref().ok_or_else(|| fail(GaplineStatus::NullArgument, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, GaplineStatus> {
    p.as_mut().ok_or_else(|| fail(GaplineStatus::NullArgument, format!("{what} is null")))
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, GaplineStatus> {
    if p.is_null() {
        return Err(fail(GaplineStatus::NullArgument, "path is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(GaplineStatus::InvalidArgument, "path is not valid UTF-8"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gapline_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gapline_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds an `m`-banded matrix with the `n` given eigenvalues from `seed`.
///
/// # Safety
/// `eigenvalues` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gapline_matrix_generate(
    eigenvalues: *const f64,
    n: usize,
    m: usize,
    seed: u64,
    out: *mut *mut GaplineMatrix,
) -> GaplineStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let lambda = slice(eigenvalues, n, "eigenvalues")?;
        let h = lib(generate(lambda, m, &mut SeededRng::new(seed)))?;
        *out = Box::into_raw(Box::new(GaplineMatrix { inner: h }));
        Ok(())
    })
}

/// Reads a matrix file and its companions when present.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gapline_matrix_load(path: *const c_char, out: *mut *mut GaplineMatrix) -> GaplineStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let h = lib(io::read_matrix(path_arg(path)?))?;
        *out = Box::into_raw(Box::new(GaplineMatrix { inner: h }));
        Ok(())
    })
}

/// Writes the matrix file and, for generated matrices, its companions.
///
/// # Safety
/// `matrix` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gapline_matrix_save(matrix: *const GaplineMatrix, path: *const c_char) -> GaplineStatus {
    guard(|| {
        let h = reference(matrix, "matrix")?;
        lib(io::write_matrix(path_arg(path)?, &h.inner))?;
        Ok(())
    })
}

/// # Safety
/// `matrix` must be NULL or come from this library, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gapline_matrix_free(matrix: *mut GaplineMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Order of the matrix, 0 for NULL.
///
/// # Safety
/// `matrix` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn gapline_matrix_dim(matrix: *const GaplineMatrix) -> usize {
    matrix.as_ref().map_or(0, |h| h.inner.n())
}

/// Declared bandwidth, 0 for NULL.
///
/// # Safety
/// `matrix` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn gapline_matrix_bandwidth(matrix: *const GaplineMatrix) -> usize {
    matrix.as_ref().map_or(0, |h| h.inner.bandwidth())
}

/// Copies the entries in row-major order into `buf` (at least `n * n` values).
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gapline_matrix_copy_entries(
    matrix: *const GaplineMatrix,
    buf: *mut f64,
    len: usize,
) -> GaplineStatus {
    guard(|| {
        let h = &reference(matrix, "matrix")?.inner;
        let n = h.n();
        let dst = slice_mut(buf, len, n * n, "buf")?;
        let a = h.matrix();
        for i in 0..n {
            for j in 0..n {
                dst[i * n + j] = a[(i, j)];
            }
        }
        Ok(())
    })
}

/// Decay profile `D(k)`, `k = 0..n-1`, of the projector onto eigenvalues below `mu`.
///
/// # Safety
/// `buf` must point to `len >= n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gapline_projector_decay(
    matrix: *const GaplineMatrix,
    mu: f64,
    buf: *mut f64,
    len: usize,
) -> GaplineStatus {
    guard(|| {
        let h = &reference(matrix, "matrix")?.inner;
        let dst = slice_mut(buf, len, h.n(), "buf")?;
        let p = lib(spectral_projector(h, mu))?;
        dst.copy_from_slice(&decay_profile(&p.p, DecaySource::Projector).curve);
        Ok(())
    })
}

/// Evaluates one bound family (`"b1"`, `"b2"`, `"b3"`, `"quad"`, `"sl"`,
/// `"hasson"`, `"fuchs"`, `"demko"`, `"frommer"`, `"refined"`) for
/// `k = 0..=spec.kmax`. `eigenvalues` (normalized, may be NULL when
/// `n_eigs == 0`) is required by the spectrum-aware and inverse families.
///
/// # Safety
/// `family` must be NUL-terminated; `eigenvalues` must point to `n_eigs`
/// doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gapline_bound_curve(
    spec: *const GaplineBoundSpec,
    family: *const c_char,
    eigenvalues: *const f64,
    n_eigs: usize,
    out: *mut *mut GaplineBoundCurve,
) -> GaplineStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let s = *reference(spec, "spec")?;
        if family.is_null() {
            return Err(fail(GaplineStatus::NullArgument, "family is null"));
        }
        let fam: Family = CStr::from_ptr(family)
            .to_str()
            .map_err(|_| fail(GaplineStatus::InvalidArgument, "family is not valid UTF-8"))
            .and_then(|f| lib(f.parse()))?;
        let eigs = slice(eigenvalues, n_eigs, "eigenvalues")?;
        let geometry = lib(SpectrumSpec::asymmetric(s.a, s.b1, s.b2))?;
        let mut ctx = BoundContext::new(geometry, s.m);
        if s.tol > 0.0 {
            ctx.tol = s.tol;
        }
        ctx.k2 = if s.k2_printed != 0 {
            K2Variant::Printed
        } else {
            K2Variant::Proof
        };
        if !eigs.is_empty() {
            let mut sorted = eigs.to_vec();
            sorted.sort_by(f64::total_cmp);
            ctx.ladder = Some(if fam.is_inverse_bound() {
                lib(gapline::distinct_magnitudes(&sorted, DEFAULT_TOL_CLUSTER))?
            } else {
                lib(distinct_magnitudes_in(&sorted, DEFAULT_TOL_CLUSTER, &geometry))?
            });
            ctx.eigenvalues = Some(sorted);
        }
        let curve = lib(bound_curve(fam, &ctx, s.kmax))?;
        *out = Box::into_raw(Box::new(GaplineBoundCurve { inner: curve }));
        Ok(())
    })
}

/// Number of points, 0 for NULL.
///
/// # Safety
/// `curve` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn gapline_curve_len(curve: *const GaplineBoundCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.inner.points.len())
}

/// Copies the raw and capped values and the optimizer parameter (NaN where
/// none) into caller buffers of at least `gapline_curve_len` values. Any of
/// the three buffers may be NULL to skip it.
///
/// # Safety
/// Non-NULL buffers must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gapline_curve_values(
    curve: *const GaplineBoundCurve,
    raw: *mut f64,
    capped: *mut f64,
    param: *mut f64,
    len: usize,
) -> GaplineStatus {
    guard(|| {
        let c = &reference(curve, "curve")?.inner;
        let need = c.points.len();
        for (buf, pick) in [
            (raw, (|p| p.raw) as fn(&gapline::bounds::BoundPoint) -> f64),
            (capped, |p| p.capped),
            (param, |p| p.param.unwrap_or(f64::NAN)),
        ] {
            if buf.is_null() {
                continue;
            }
            let dst = slice_mut(buf, len, need, "buffer")?;
            for (d, p) in dst.iter_mut().zip(&c.points) {
                *d = pick(p);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `curve` must be NULL or come from this library, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gapline_curve_free(curve: *mut GaplineBoundCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Smallest `k` with `values[j] <= eps` for every `j >= k`.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gapline_first_below(
    values: *const f64,
    len: usize,
    eps: f64,
    out: *mut usize,
) -> GaplineStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = lib(first_below(slice(values, len, "values")?, eps))?;
        Ok(())
    })
}

/// Smallest bandwidth `w` with `values[k] <= eps` for every `k > w`.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gapline_truncation_bandwidth(
    values: *const f64,
    len: usize,
    eps: f64,
    out: *mut usize,
) -> GaplineStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = lib(truncation_bandwidth(slice(values, len, "values")?, eps))?;
        Ok(())
    })
}
