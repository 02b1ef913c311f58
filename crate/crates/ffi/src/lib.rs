//! C ABI over the pathgain library.
//!
//! Every function returns a [`PgStatus`]; on failure the message is kept
//! per thread and read with [`pg_last_error_message`]. Handles are opaque
//! and released with their `_free` function. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pathgain::config::{EnvironmentConfig, PathModel};
use pathgain::data_fit::{
    fit_slope_intercept, read_csv, rmse_against_model, MeasurementDataset, MeasurementRecord,
    ModelFn,
};
use pathgain::oracles::{run_all, ToleranceProfile, VerifyOptions};
use pathgain::units::to_db;
use pathgain::{Error, Regime};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParameter = 3,
    Config = 4,
    MissingFields = 5,
    Io = 6,
    Csv = 7,
    Numerical = 8,
    Geometry = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// A configured morphology or reference model.
pub struct PgModel(PathModel);

/// A measurement dataset.
pub struct PgDataset(MeasurementDataset);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("NUL removed"));
}

fn status_of(e: &Error) -> PgStatus {
    match e {
        Error::InvalidParameter { .. }
        | Error::Domain(_)
        | Error::Unsupported(_)
        | Error::Empty(_) => PgStatus::InvalidParameter,
        Error::Geometry(_) => PgStatus::Geometry,
        Error::NonConvergence { .. } | Error::Cancelled(_) | Error::Degenerate(_) => {
            PgStatus::Numerical
        }
        Error::Config(_) => PgStatus::Config,
        Error::MissingFields { .. } => PgStatus::MissingFields,
        Error::Csv { .. } => PgStatus::Csv,
        Error::Io { .. } => PgStatus::Io,
        Error::ModelEvaluation { source, .. } => status_of(source),
    }
}

fn fail(status: PgStatus, msg: impl Into<String>) -> PgStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), PgStatus>) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PgStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(PgStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lib<T>(r: pathgain::Result<T>) -> Result<T, PgStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, PgStatus> {
    if p.is_null() {
        return Err(fail(PgStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(PgStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, PgStatus> {
    p.as_mut()
        .ok_or_else(|| fail(PgStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, PgStatus> {
    p.as_ref()
        .ok_or_else(|| fail(PgStatus::NullPointer, format!("`{name}` is null")))
}

/// Copies `s` with a terminating NUL into `buf` of `len` bytes. `needed`
/// receives the full size including the NUL.
unsafe fn copy_out(
    s: &str,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> Result<(), PgStatus> {
    let bytes = s.as_bytes();
    if let Some(n) = needed.as_mut() {
        *n = bytes.len() + 1;
    }
    if buf.is_null() || len < bytes.len() + 1 {
        return Err(fail(
            PgStatus::BufferTooSmall,
            format!("buffer of {len} bytes, need {}", bytes.len() + 1),
        ));
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message; empty after a
/// successful call.
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null; `needed` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn pg_last_error_message(
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PgStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().to_string_lossy().into_owned());
    match copy_out(&msg, buf, len, needed) {
        Ok(()) => PgStatus::Ok,
        Err(s) => s,
    }
}

/// Builds a model from TOML text and a morphology or reference model name.
///
/// # Safety
/// `toml` and `model` must be NUL-terminated strings; `out_model` must be
/// writable. On success `*out_model` owns a handle to release with
/// [`pg_model_free`].
#[no_mangle]
pub unsafe extern "C" fn pg_model_from_toml(
    toml: *const c_char,
    model: *const c_char,
    out_model: *mut *mut PgModel,
) -> PgStatus {
    guard(|| {
        let dst = out(out_model, "out_model")?;
        *dst = ptr::null_mut();
        let cfg = lib(EnvironmentConfig::from_toml_str(text(toml, "toml")?))?;
        let m = lib(PathModel::new(&cfg, text(model, "model")?))?;
        *dst = Box::into_raw(Box::new(PgModel(m)));
        Ok(())
    })
}

/// As [`pg_model_from_toml`] with the config read from a file.
///
/// # Safety
/// As [`pg_model_from_toml`], with `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pg_model_from_file(
    path: *const c_char,
    model: *const c_char,
    out_model: *mut *mut PgModel,
) -> PgStatus {
    guard(|| {
        let dst = out(out_model, "out_model")?;
        *dst = ptr::null_mut();
        let cfg = lib(EnvironmentConfig::load(Path::new(text(path, "path")?)))?;
        let m = lib(PathModel::new(&cfg, text(model, "model")?))?;
        *dst = Box::into_raw(Box::new(PgModel(m)));
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a `pg_model_from_*` call and not be used after.
#[no_mangle]
pub unsafe extern "C" fn pg_model_free(model: *mut PgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of per-component gains the model reports.
///
/// # Safety
/// `model` must be a live handle; `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_model_component_count(
    model: *const PgModel,
    out_count: *mut usize,
) -> PgStatus {
    guard(|| {
        let m = handle(model, "model")?;
        *out(out_count, "out_count")? = m.0.components().len();
        Ok(())
    })
}

/// Name of component `index`, NUL-terminated into `buf`.
///
/// # Safety
/// `model` must be a live handle; `buf` must point to `len` writable bytes;
/// `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pg_model_component_name(
    model: *const PgModel,
    index: usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PgStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let name = m.0.components().get(index).ok_or_else(|| {
            fail(
                PgStatus::InvalidParameter,
                format!("component index {index} out of range"),
            )
        })?;
        copy_out(name, buf, len, needed)
    })
}

/// Path gain in dB at horizontal distance `range_m`, with its regime flags.
///
/// # Safety
/// `model` must be a live handle; `out_gain_db` writable; `out_flags` null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn pg_model_predict(
    model: *const PgModel,
    range_m: f64,
    out_gain_db: *mut f64,
    out_flags: *mut u32,
) -> PgStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let dst = out(out_gain_db, "out_gain_db")?;
        let p = lib(m.0.predict(range_m))?;
        *dst = to_db(p.total);
        if let Some(f) = out_flags.as_mut() {
            *f = p.flags.bits();
        }
        Ok(())
    })
}

/// Component gains in dB at `range_m`, written to `out_db[0..len]`; `len`
/// must equal the component count.
///
/// # Safety
/// `model` must be a live handle; `out_db` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pg_model_predict_components(
    model: *const PgModel,
    range_m: f64,
    out_db: *mut f64,
    len: usize,
) -> PgStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let n = m.0.components().len();
        if len != n {
            return Err(fail(
                PgStatus::BufferTooSmall,
                format!("model has {n} components, got {len}"),
            ));
        }
        if n == 0 {
            return Ok(());
        }
        if out_db.is_null() {
            return Err(fail(PgStatus::NullPointer, "`out_db` is null"));
        }
        let p = lib(m.0.predict(range_m))?;
        let dst = std::slice::from_raw_parts_mut(out_db, n);
        for (d, c) in dst.iter_mut().zip(&p.components) {
            *d = to_db(*c);
        }
        Ok(())
    })
}

/// Flag bits as `|`-joined names.
///
/// # Safety
/// `buf` must point to `len` writable bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pg_flag_names(
    flags: u32,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PgStatus {
    guard(|| copy_out(&Regime::from_bits_truncate(flags).names(), buf, len, needed))
}

/// Reads a measurement CSV (`range_m,path_gain_db[,street,flag]`).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out_dataset` writable. Release
/// the handle with [`pg_dataset_free`].
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_read_csv(
    path: *const c_char,
    frequency_hz: f64,
    out_dataset: *mut *mut PgDataset,
) -> PgStatus {
    guard(|| {
        let dst = out(out_dataset, "out_dataset")?;
        *dst = ptr::null_mut();
        let ds = lib(read_csv(Path::new(text(path, "path")?), frequency_hz))?;
        *dst = Box::into_raw(Box::new(PgDataset(ds)));
        Ok(())
    })
}

/// Builds a dataset from parallel range and gain arrays.
///
/// # Safety
/// `range_m` and `gain_db` must point to `n` doubles; `out_dataset`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_from_arrays(
    range_m: *const f64,
    gain_db: *const f64,
    n: usize,
    frequency_hz: f64,
    out_dataset: *mut *mut PgDataset,
) -> PgStatus {
    guard(|| {
        let dst = out(out_dataset, "out_dataset")?;
        *dst = ptr::null_mut();
        if n > 0 && (range_m.is_null() || gain_db.is_null()) {
            return Err(fail(PgStatus::NullPointer, "array is null"));
        }
        let (r, g) = if n == 0 {
            (&[][..], &[][..])
        } else {
            (
                std::slice::from_raw_parts(range_m, n),
                std::slice::from_raw_parts(gain_db, n),
            )
        };
        let records = lib(r
            .iter()
            .zip(g)
            .map(|(&r, &g)| MeasurementRecord::new(r, g))
            .collect::<pathgain::Result<Vec<_>>>())?;
        let ds = lib(MeasurementDataset::new(records, frequency_hz))?;
        *dst = Box::into_raw(Box::new(PgDataset(ds)));
        Ok(())
    })
}

/// Releases a dataset. Null is ignored.
///
/// # Safety
/// `dataset` must come from a `pg_dataset_*` constructor and not be used
/// after.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_free(dataset: *mut PgDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// # Safety
/// `dataset` must be a live handle; `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_len(
    dataset: *const PgDataset,
    out_len: *mut usize,
) -> PgStatus {
    guard(|| {
        *out(out_len, "out_len")? = handle(dataset, "dataset")?.0.len();
        Ok(())
    })
}

/// Least-squares `P_dB = intercept - 10 n log10(r)` fit.
///
/// # Safety
/// `dataset` must be a live handle; the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pg_fit(
    dataset: *const PgDataset,
    out_intercept_db: *mut f64,
    out_exponent: *mut f64,
    out_rmse_db: *mut f64,
) -> PgStatus {
    guard(|| {
        let ds = handle(dataset, "dataset")?;
        let (i, e, r) = (
            out(out_intercept_db, "out_intercept_db")?,
            out(out_exponent, "out_exponent")?,
            out(out_rmse_db, "out_rmse_db")?,
        );
        let f = lib(fit_slope_intercept(&ds.0))?;
        *i = f.model.intercept_db;
        *e = f.model.exponent;
        *r = f.rmse_db;
        Ok(())
    })
}

/// RMS of measured minus predicted gain, in dB.
///
/// # Safety
/// `dataset` and `model` must be live handles; `out_rmse_db` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_rmse(
    dataset: *const PgDataset,
    model: *const PgModel,
    out_rmse_db: *mut f64,
) -> PgStatus {
    guard(|| {
        let ds = handle(dataset, "dataset")?;
        let m = handle(model, "model")?;
        let dst = out(out_rmse_db, "out_rmse_db")?;
        *dst = lib(rmse_against_model(
            &ds.0,
            &ModelFn(|r: &MeasurementRecord| m.0.gain_db(r.range_m)),
        ))?;
        Ok(())
    })
}

/// Runs every oracle suite; `strict` nonzero selects the strict numerical
/// profile.
///
/// # Safety
/// `out_checks` and `out_failed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_verify_all(
    strict: i32,
    out_checks: *mut usize,
    out_failed: *mut usize,
) -> PgStatus {
    guard(|| {
        let (c, f) = (
            out(out_checks, "out_checks")?,
            out(out_failed, "out_failed")?,
        );
        let opts = VerifyOptions {
            profile: if strict != 0 {
                ToleranceProfile::Strict
            } else {
                ToleranceProfile::Default
            },
            ..VerifyOptions::default()
        };
        let reports = lib(run_all(&opts))?;
        *c = reports.len();
        *f = reports.iter().filter(|r| !r.passed).count();
        Ok(())
    })
}
