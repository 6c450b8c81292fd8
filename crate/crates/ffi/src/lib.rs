//! C ABI for the simulator: opaque handles, status codes, and a
//! thread-local last-error message.
//!
//! Every function returns a [`CoStatus`]; on anything but `CO_STATUS_OK`
//! the caller can fetch a human-readable message via [`co_last_error`].
//! Handles are created and released exclusively through this interface.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use libc::{c_char, c_int, size_t};

use compressed_opt::compressors::{
    compress, contraction_parameter, CompressionBound, CompressorKind,
};
use compressed_opt::harness::{self, RunConfig};
use compressed_opt::streams::{Channel, SeedPlan};
use compressed_opt::vector::Vector;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    NonFiniteInput = 4,
    RuntimeError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: CoStatus, message: &str) -> CoStatus {
    set_error(message);
    status
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn co_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Opaque compressor handle: a validated operator bound to a dimension.
pub struct CoCompressor {
    kind: CompressorKind,
    dim: usize,
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, CoStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(CoStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        CoStatus::InvalidUtf8
    })
}

/// Build a compressor from its JSON spec (e.g. `{"kind":"topk","k":10}`)
/// for vectors of dimension `dim`. On success `*out` owns the handle;
/// release it with [`co_compressor_free`].
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string and `out` a valid
/// pointer to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn co_compressor_new(
    spec_json: *const c_char,
    dim: size_t,
    out: *mut *mut CoCompressor,
) -> CoStatus {
    if out.is_null() {
        return fail(CoStatus::NullPointer, "null output handle");
    }
    *out = ptr::null_mut();
    let spec = match utf8_arg(spec_json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let kind: CompressorKind = match serde_json::from_str(spec) {
        Ok(k) => k,
        Err(e) => return fail(CoStatus::InvalidArgument, &format!("bad compressor spec: {e}")),
    };
    if let Err(e) = kind.validate(dim) {
        return fail(CoStatus::InvalidArgument, &e.to_string());
    }
    *out = Box::into_raw(Box::new(CoCompressor { kind, dim }));
    CoStatus::Ok
}

/// Release a handle created by [`co_compressor_new`]. A null pointer is a
/// no-op.
///
/// # Safety
/// `handle` must be a pointer returned by [`co_compressor_new`] that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn co_compressor_free(handle: *mut CoCompressor) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Compress `input` (length = the handle's dimension) into `output`
/// (same length), drawing any randomness from a stream seeded by `seed`.
/// Transmission costs are written to the optional out-parameters.
///
/// # Safety
/// `input` and `output` must point to `dim` readable/writable doubles;
/// cost pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn co_compressor_compress(
    handle: *const CoCompressor,
    input: *const f64,
    len: size_t,
    seed: u64,
    output: *mut f64,
    out_scalars: *mut u64,
    out_indices: *mut u64,
    out_messages: *mut u64,
) -> CoStatus {
    if handle.is_null() || input.is_null() || output.is_null() {
        return fail(CoStatus::NullPointer, "null handle or buffer");
    }
    let handle = &*handle;
    if len != handle.dim {
        return fail(
            CoStatus::InvalidArgument,
            &format!("buffer length {len} does not match dimension {}", handle.dim),
        );
    }
    let x = Vector::from_vec(std::slice::from_raw_parts(input, len).to_vec());
    let mut rng = SeedPlan::new(seed).rng(0, 0, Channel::Compressor);
    match compress(&handle.kind, &x, &mut rng) {
        Ok(res) => {
            std::slice::from_raw_parts_mut(output, len).copy_from_slice(res.output.as_slice());
            if !out_scalars.is_null() {
                *out_scalars = res.transmitted_scalars;
            }
            if !out_indices.is_null() {
                *out_indices = res.transmitted_indices;
            }
            if !out_messages.is_null() {
                *out_messages = res.transmitted_messages;
            }
            CoStatus::Ok
        }
        Err(compressed_opt::compressors::CompressError::NonFiniteInput) => {
            fail(CoStatus::NonFiniteInput, "input vector has NaN or Inf entries")
        }
        Err(e) => fail(CoStatus::InvalidArgument, &e.to_string()),
    }
}

/// Declared error bound of the handle's compressor: writes the contraction
/// parameter `delta` (and `*is_absolute = 0`), or the absolute bound `Delta`
/// (and `*is_absolute = 1`).
///
/// # Safety
/// `value` and `is_absolute` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn co_compressor_bound(
    handle: *const CoCompressor,
    value: *mut f64,
    is_absolute: *mut c_int,
) -> CoStatus {
    if handle.is_null() || value.is_null() || is_absolute.is_null() {
        return fail(CoStatus::NullPointer, "null handle or out-parameter");
    }
    let handle = &*handle;
    match contraction_parameter(&handle.kind, handle.dim) {
        Ok(CompressionBound::Contractive { delta }) => {
            *value = delta;
            *is_absolute = 0;
            CoStatus::Ok
        }
        Ok(CompressionBound::Absolute { delta_abs }) => {
            *value = delta_abs;
            *is_absolute = 1;
            CoStatus::Ok
        }
        Err(e) => fail(CoStatus::InvalidArgument, &e.to_string()),
    }
}

/// Run a full experiment config (same JSON schema as the CLI) and write all
/// artifacts under `out_dir`.
///
/// # Safety
/// Both arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn co_run_experiment(
    config_json: *const c_char,
    out_dir: *const c_char,
) -> CoStatus {
    let config_text = match utf8_arg(config_json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let out = match utf8_arg(out_dir) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let config = match RunConfig::from_json(config_text) {
        Ok(c) => c,
        Err(e) => return fail(CoStatus::InvalidArgument, &e),
    };
    match harness::run_experiment(&config, Path::new(out)) {
        Ok(_) => CoStatus::Ok,
        Err(e) => fail(CoStatus::RuntimeError, &e.to_string()),
    }
}

/// Grid search over the config's grid; writes artifacts under `out_dir` and
/// stores the selected value in `*selected`.
///
/// # Safety
/// String arguments must be valid NUL-terminated strings and `selected`
/// a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn co_grid_search(
    config_json: *const c_char,
    out_dir: *const c_char,
    selected: *mut f64,
) -> CoStatus {
    if selected.is_null() {
        return fail(CoStatus::NullPointer, "null selected out-parameter");
    }
    let config_text = match utf8_arg(config_json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let out = match utf8_arg(out_dir) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let config = match RunConfig::from_json(config_text) {
        Ok(c) => c,
        Err(e) => return fail(CoStatus::InvalidArgument, &e),
    };
    match harness::grid_search(&config, Path::new(out)) {
        Ok(outcome) => {
            *selected = outcome.selected;
            CoStatus::Ok
        }
        Err(e) => fail(CoStatus::RuntimeError, &e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn compressor_round_trip_through_the_abi() {
        let spec = cstr(r#"{"kind":"topk","k":2}"#);
        let mut handle: *mut CoCompressor = ptr::null_mut();
        let status = unsafe { co_compressor_new(spec.as_ptr(), 3, &mut handle) };
        assert_eq!(status, CoStatus::Ok);
        assert!(!handle.is_null());

        let input = [3.0f64, -1.0, 2.0];
        let mut output = [0.0f64; 3];
        let (mut scalars, mut indices, mut messages) = (0u64, 0u64, 0u64);
        let status = unsafe {
            co_compressor_compress(
                handle,
                input.as_ptr(),
                3,
                7,
                output.as_mut_ptr(),
                &mut scalars,
                &mut indices,
                &mut messages,
            )
        };
        assert_eq!(status, CoStatus::Ok);
        assert_eq!(output, [3.0, 0.0, 2.0]);
        assert_eq!((scalars, indices, messages), (2, 2, 1));

        let mut value = 0.0f64;
        let mut is_absolute = -1;
        let status = unsafe { co_compressor_bound(handle, &mut value, &mut is_absolute) };
        assert_eq!(status, CoStatus::Ok);
        assert_eq!(is_absolute, 0);
        assert!((value - 2.0 / 3.0).abs() < 1e-15);

        unsafe { co_compressor_free(handle) };
    }

    #[test]
    fn bad_spec_reports_invalid_argument_with_message() {
        let spec = cstr(r#"{"kind":"topk","k":0}"#);
        let mut handle: *mut CoCompressor = ptr::null_mut();
        let status = unsafe { co_compressor_new(spec.as_ptr(), 3, &mut handle) };
        assert_eq!(status, CoStatus::InvalidArgument);
        assert!(handle.is_null());
        let msg = unsafe { CStr::from_ptr(co_last_error()) }.to_str().unwrap();
        assert!(msg.contains("k"), "message was: {msg}");
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let spec = cstr(r#"{"kind":"identity"}"#);
        let mut handle: *mut CoCompressor = ptr::null_mut();
        unsafe { co_compressor_new(spec.as_ptr(), 4, &mut handle) };
        let input = [1.0f64; 2];
        let mut output = [0.0f64; 2];
        let status = unsafe {
            co_compressor_compress(
                handle,
                input.as_ptr(),
                2,
                0,
                output.as_mut_ptr(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
            )
        };
        assert_eq!(status, CoStatus::InvalidArgument);
        unsafe { co_compressor_free(handle) };
    }

    #[test]
    fn non_finite_input_has_its_own_status() {
        let spec = cstr(r#"{"kind":"identity"}"#);
        let mut handle: *mut CoCompressor = ptr::null_mut();
        unsafe { co_compressor_new(spec.as_ptr(), 1, &mut handle) };
        let input = [f64::NAN];
        let mut output = [0.0f64];
        let status = unsafe {
            co_compressor_compress(
                handle,
                input.as_ptr(),
                1,
                0,
                output.as_mut_ptr(),
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
            )
        };
        assert_eq!(status, CoStatus::NonFiniteInput);
        unsafe { co_compressor_free(handle) };
    }

    #[test]
    fn experiment_runs_through_the_abi() {
        let dir = tempfile::tempdir().unwrap();
        let config = cstr(
            r#"{
                "problem": {"kind": "logistic", "n_clients": 2, "d": 5,
                            "samples_per_client": 8, "sigma2": 0.0, "seed": 3},
                "method": {"name": "adef"},
                "compressor": {"kind": "topk", "k": 1},
                "schedule": {"kind": "experiment_gamma", "gamma": 0.01},
                "rounds": 20,
                "seeds": [1]
            }"#,
        );
        let out = cstr(dir.path().to_str().unwrap());
        let status = unsafe { co_run_experiment(config.as_ptr(), out.as_ptr()) };
        assert_eq!(status, CoStatus::Ok);
        assert!(dir.path().join("summary.json").exists());
        assert!(dir.path().join("metrics/seed_1.csv").exists());
    }

    #[test]
    fn generated_header_exists_with_expected_symbols() {
        let header = std::fs::read_to_string(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/compressed_opt.h"),
        )
        .expect("header generated at build time");
        for symbol in [
            "co_compressor_new",
            "co_compressor_compress",
            "co_compressor_bound",
            "co_compressor_free",
            "co_run_experiment",
            "co_grid_search",
            "co_last_error",
            "CoStatus",
        ] {
            assert!(header.contains(symbol), "header missing {symbol}");
        }
    }
}
