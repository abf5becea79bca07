//! C ABI for spinlab.
//!
//! Models live behind an opaque `SpinlabModel` handle created by one of the
//! `spinlab_model_new*` functions and released with `spinlab_model_free`.
//! Every fallible call returns a `SpinlabStatus`; on failure a description is
//! available from `spinlab_last_error` on the same thread until the next call.
//! Strings returned by the library must be released with `spinlab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spinlab::analysis::{critical_temperature, figure_preset_by_name, run_sweep};
use spinlab::entangle::model_concurrence;
use spinlab::gibbs::Diagonalized;
use spinlab::model::{Boundary, DeltaSign, ModelKind, ModelSpec};
use spinlab::Error;

/// Opaque model handle.
pub struct SpinlabModel {
    spec: ModelSpec,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinlabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Invalid argument or model.
    Contract = 2,
    /// Numerical failure.
    Numeric = 3,
    /// Requested Hilbert space exceeds the dimension cap.
    Dimension = 4,
    /// Malformed text input.
    Parse = 5,
    /// Caller-supplied buffer is too small; the required length was written.
    BufferTooSmall = 6,
    /// Internal panic caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinlabKind {
    XxzDm = 0,
    IsingDm = 1,
    IsingDmField = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinlabBoundary {
    Open = 0,
    Periodic = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinlabDeltaSign {
    Plus = 0,
    Minus = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SpinlabStatus {
    match e {
        Error::Contract(_) => SpinlabStatus::Contract,
        Error::Numeric(_) => SpinlabStatus::Numeric,
        Error::Dimension { .. } => SpinlabStatus::Dimension,
        Error::Parse(_) => SpinlabStatus::Parse,
        Error::AtPoint { source, .. } => status_of(source),
    }
}

struct Fail(SpinlabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SpinlabStatus::NullPointer, format!("{what} is null"))
}

fn bad_code(what: &str, code: u32) -> Fail {
    Fail(SpinlabStatus::Contract, format!("unknown {what} code {code}"))
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SpinlabStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpinlabStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("internal panic: {msg}"));
            SpinlabStatus::Panic
        }
    }
}

unsafe fn model_ref<'a>(model: *const SpinlabModel) -> Result<&'a SpinlabModel, Fail> {
    model.as_ref().ok_or_else(|| null("model"))
}

unsafe fn model_mut<'a>(model: *mut SpinlabModel) -> Result<&'a mut SpinlabModel, Fail> {
    model.as_mut().ok_or_else(|| null("model"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(SpinlabStatus::Parse, format!("{what} is not UTF-8")))
}

fn publish(spec: ModelSpec, out: &mut *mut SpinlabModel) -> Result<(), Fail> {
    spec.validate()?;
    *out = Box::into_raw(Box::new(SpinlabModel { spec }));
    Ok(())
}

/// Create a 3-site open chain. `kind` is a `SpinlabKind` value. Unused
/// parameters must be 0: `delta` for the Ising kinds, `h` for all but
/// `IsingDmField`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn spinlab_model_new(
    kind: u32,
    j: f64,
    delta: f64,
    d: f64,
    h: f64,
    out: *mut *mut SpinlabModel,
) -> SpinlabStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let spec = ModelSpec {
            kind: match kind {
                k if k == SpinlabKind::XxzDm as u32 => ModelKind::XxzDm,
                k if k == SpinlabKind::IsingDm as u32 => ModelKind::IsingDm,
                k if k == SpinlabKind::IsingDmField as u32 => ModelKind::IsingDmField,
                k => return Err(bad_code("kind", k)),
            },
            j,
            delta,
            d,
            h,
            ..ModelSpec::default()
        };
        publish(spec, out)
    })
}

/// Create a model from `key=value` lines (`#` comments) over the defaults.
///
/// # Safety
/// `config` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_model_from_config(
    config: *const c_char,
    out: *mut *mut SpinlabModel,
) -> SpinlabStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let mut spec = ModelSpec::default();
        spec.merge_kv_text(text(config, "config")?)?;
        publish(spec, out)
    })
}

/// Change the geometry of an existing model. `boundary` and `delta_sign`
/// take `SpinlabBoundary` and `SpinlabDeltaSign` values. On error the model
/// is unchanged.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spinlab_model_set_geometry(
    model: *mut SpinlabModel,
    n: usize,
    boundary: u32,
    delta_sign: u32,
) -> SpinlabStatus {
    guard(|| {
        let m = model_mut(model)?;
        let spec = m
            .spec
            .clone()
            .with_n(n)
            .with_boundary(match boundary {
                b if b == SpinlabBoundary::Open as u32 => Boundary::Open,
                b if b == SpinlabBoundary::Periodic as u32 => Boundary::Periodic,
                b => return Err(bad_code("boundary", b)),
            })
            .with_delta_sign(match delta_sign {
                s if s == SpinlabDeltaSign::Plus as u32 => DeltaSign::Plus,
                s if s == SpinlabDeltaSign::Minus as u32 => DeltaSign::Minus,
                s => return Err(bad_code("delta_sign", s)),
            });
        spec.validate()?;
        m.spec = spec;
        Ok(())
    })
}

/// Number of sites of the model, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spinlab_model_sites(model: *const SpinlabModel) -> usize {
    model.as_ref().map_or(0, |m| m.spec.n)
}

/// Release a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spinlab_model_free(model: *mut SpinlabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Concurrence of sites `i`, `j` (1-based) at temperature `t` (0: ground manifold).
/// If `lambdas` is non-null, the four square-root eigenvalues of `R` are
/// written there in descending order.
///
/// # Safety
/// `model` must be a live handle, `value` writable, `lambdas` null or
/// writable for 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn spinlab_concurrence(
    model: *const SpinlabModel,
    t: f64,
    i: usize,
    j: usize,
    value: *mut f64,
    lambdas: *mut f64,
) -> SpinlabStatus {
    guard(|| {
        let m = model_ref(model)?;
        let value = out_ref(value, "value")?;
        let r = model_concurrence(&m.spec, t, i, j)?;
        *value = r.value;
        if !lambdas.is_null() {
            std::slice::from_raw_parts_mut(lambdas, 4).copy_from_slice(&r.lambdas);
        }
        Ok(())
    })
}

/// Energy levels in ascending order. `*len` is set to the number of levels;
/// if `capacity` is smaller nothing is written to `energies` and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `model` must be a live handle, `len` writable, `energies` writable for
/// `capacity` doubles (may be null when `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn spinlab_spectrum(
    model: *const SpinlabModel,
    energies: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> SpinlabStatus {
    guard(|| {
        let m = model_ref(model)?;
        let len = out_ref(len, "len")?;
        let diag = Diagonalized::from_model(&m.spec)?;
        let e = diag.energies();
        *len = e.len();
        if capacity < e.len() {
            return Err(Fail(
                SpinlabStatus::BufferTooSmall,
                format!("{} levels do not fit in {capacity}", e.len()),
            ));
        }
        if energies.is_null() {
            return Err(null("energies"));
        }
        std::slice::from_raw_parts_mut(energies, e.len()).copy_from_slice(e);
        Ok(())
    })
}

/// Natural log of the partition function at `t > 0`.
///
/// # Safety
/// `model` must be a live handle and `ln_z` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_log_partition_function(
    model: *const SpinlabModel,
    t: f64,
    ln_z: *mut f64,
) -> SpinlabStatus {
    guard(|| {
        let m = model_ref(model)?;
        let out = out_ref(ln_z, "ln_z")?;
        *out = Diagonalized::from_model(&m.spec)?.partition_function(t)?.ln();
        Ok(())
    })
}

/// Temperature above which the concurrence of `(i, j)` vanishes. `*found`
/// is false (and `*tc` untouched) when the pair is never entangled.
///
/// # Safety
/// `model` must be a live handle; `tc` and `found` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_critical_temperature(
    model: *const SpinlabModel,
    i: usize,
    j: usize,
    t_hi: f64,
    tc: *mut f64,
    found: *mut bool,
) -> SpinlabStatus {
    guard(|| {
        let m = model_ref(model)?;
        let tc = out_ref(tc, "tc")?;
        let found = out_ref(found, "found")?;
        match critical_temperature(&m.spec, (i, j), t_hi)? {
            Some(x) => {
                *tc = x;
                *found = true;
            }
            None => *found = false,
        }
        Ok(())
    })
}

/// CSV data for a preset figure (e.g. "fig1"). The string must be released
/// with `spinlab_string_free`.
///
/// # Safety
/// `id` must be a NUL-terminated string and `csv` writable.
#[no_mangle]
pub unsafe extern "C" fn spinlab_figure_csv(id: *const c_char, csv: *mut *mut c_char) -> SpinlabStatus {
    guard(|| {
        let out = out_ref(csv, "csv")?;
        let grid = figure_preset_by_name(text(id, "id")?)?;
        let table = run_sweep(&grid)?;
        let s = CString::new(table.to_csv(None)).expect("CSV has no NUL bytes");
        *out = s.into_raw();
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spinlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or "" after a
/// success. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn spinlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spinlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

