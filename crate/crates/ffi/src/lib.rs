//! C ABI over the harnack toolkit.
//!
//! Matrices cross the boundary as opaque [`HkMatrix`] handles; structured
//! reports cross as NUL-terminated JSON strings owned by the library and
//! released with [`hk_string_free`]. Every entry point returns an
//! [`HkStatus`]; on failure [`hk_last_error_message`] describes the cause on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use harnack::conjectures::{j_conjecture_slack, search, SearchConfig};
use harnack::harnack::{bound_report, harnack_quotient};
use harnack::linalg::{general_eigenvalues, singular_values};
use harnack::{Complex, ComplexMatrix, Error, IndexSet, Settings};

/// Result codes shared by every function in this library.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Singular = 3,
    NotHermitian = 4,
    NotUnitary = 5,
    NotContractive = 6,
    NoConvergence = 7,
    Parse = 8,
    Domain = 9,
    Dimension = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

impl From<&Error> for HkStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::SingularMatrix { .. } => HkStatus::Singular,
            Error::NotHermitian { .. } => HkStatus::NotHermitian,
            Error::NotUnitary { .. } => HkStatus::NotUnitary,
            Error::NotContractive { .. } => HkStatus::NotContractive,
            Error::ConvergenceFailure { .. } => HkStatus::NoConvergence,
            Error::InvalidIndexSet(_) | Error::InvalidSpec(_) | Error::NonFinite { .. } => {
                HkStatus::InvalidArgument
            }
            Error::DomainViolation(_) => HkStatus::Domain,
            Error::DimensionMismatch { .. } => HkStatus::Dimension,
            Error::Parse(_) => HkStatus::Parse,
        }
    }
}

/// Square complex matrix owned by the library.
pub struct HkMatrix {
    inner: ComplexMatrix,
}

/// Inequality tolerance and strict-contraction margin. Pass NULL wherever a
/// `const HkSettings *` is accepted to use the defaults (1e-9 and 1e-6).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HkSettings {
    pub tol: f64,
    pub margin: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

struct Failure(HkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(HkStatus::from(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn fail<T>(status: HkStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn guard(body: impl FnOnce() -> Outcome) -> HkStatus {
    let result = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        fail(HkStatus::Panic, format!("internal panic: {msg}"))
    });
    match result {
        Ok(()) => {
            set_last_error("");
            HkStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

unsafe fn matrix_ref<'a>(m: *const HkMatrix) -> Result<&'a ComplexMatrix, Failure> {
    match m.as_ref() {
        Some(h) => Ok(&h.inner),
        None => fail(HkStatus::NullPointer, "matrix handle is NULL"),
    }
}

unsafe fn out_ptr<'a, T>(out: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    match out.as_mut() {
        Some(o) => Ok(o),
        None => fail(HkStatus::NullPointer, format!("{what} is NULL")),
    }
}

unsafe fn settings_from(s: *const HkSettings) -> Settings {
    match s.as_ref() {
        Some(s) => Settings::new(s.tol, s.margin),
        None => Settings::default(),
    }
}

unsafe fn input_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return fail(HkStatus::NullPointer, format!("{what} is NULL"));
    }
    CStr::from_ptr(text)
        .to_str()
        .or_else(|_| fail(HkStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn write_buffer(values: &[f64], out: *mut f64, len: usize, what: &str) -> Outcome {
    if out.is_null() {
        return fail(HkStatus::NullPointer, format!("{what} is NULL"));
    }
    if len < values.len() {
        return fail(
            HkStatus::BufferTooSmall,
            format!("{what} holds {len} values, {} needed", values.len()),
        );
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

unsafe fn write_string(text: String, out: *mut *mut c_char) -> Outcome {
    let slot = out_ptr(out, "output string pointer")?;
    match CString::new(text) {
        Ok(c) => {
            *slot = c.into_raw();
            Ok(())
        }
        Err(_) => fail(HkStatus::Parse, "output contains an interior NUL"),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).or_else(|e| fail(HkStatus::Parse, e.to_string()))
}

unsafe fn write_matrix(m: ComplexMatrix, out: *mut *mut HkMatrix) -> Outcome {
    let slot = out_ptr(out, "output matrix pointer")?;
    *slot = Box::into_raw(Box::new(HkMatrix { inner: m }));
    Ok(())
}

/// Static description of a status code. Never NULL; do not free.
#[no_mangle]
pub extern "C" fn hk_status_message(status: HkStatus) -> *const c_char {
    let text: &'static CStr = match status {
        HkStatus::Ok => c"ok",
        HkStatus::NullPointer => c"null pointer argument",
        HkStatus::InvalidArgument => c"invalid argument",
        HkStatus::Singular => c"matrix is singular",
        HkStatus::NotHermitian => c"matrix is not Hermitian",
        HkStatus::NotUnitary => c"matrix is not unitary",
        HkStatus::NotContractive => c"matrix is not a strict contraction",
        HkStatus::NoConvergence => c"iteration did not converge",
        HkStatus::Parse => c"parse error",
        HkStatus::Domain => c"input outside the domain of the check",
        HkStatus::Dimension => c"dimension mismatch",
        HkStatus::BufferTooSmall => c"output buffer too small",
        HkStatus::Panic => c"internal panic",
    };
    text.as_ptr()
}

/// Message for the most recent call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds an `n`×`n` matrix from row-major real parts and optional
/// (nullable) imaginary parts, each of length `n*n`.
///
/// # Safety
/// `re` (and `im` when non-NULL) must point to `n*n` readable doubles;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hk_matrix_new(
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut HkMatrix,
) -> HkStatus {
    guard(|| {
        if n == 0 {
            return fail(HkStatus::InvalidArgument, "dimension must be positive");
        }
        if re.is_null() {
            return fail(HkStatus::NullPointer, "real parts are NULL");
        }
        let len = n
            .checked_mul(n)
            .ok_or_else(|| Failure(HkStatus::InvalidArgument, "dimension overflows".into()))?;
        let re = std::slice::from_raw_parts(re, len);
        let im = (!im.is_null()).then(|| std::slice::from_raw_parts(im, len));
        let data = (0..len)
            .map(|k| Complex::new(re[k], im.map_or(0.0, |v| v[k])))
            .collect();
        write_matrix(ComplexMatrix::from_row_major(n, data)?, out)
    })
}

/// Parses the JSON matrix format `{"n":…, "re":[[…]], "im":[[…]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hk_matrix_from_json(json: *const c_char, out: *mut *mut HkMatrix) -> HkStatus {
    guard(|| write_matrix(ComplexMatrix::from_json(input_str(json, "json")?)?, out))
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hk_matrix_free(m: *mut HkMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the matrix, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hk_matrix_dim(m: *const HkMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.inner.n())
}

/// Copies entries row-major into `re` and, when non-NULL, `im`; both hold
/// `len` doubles.
///
/// # Safety
/// Buffers must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hk_matrix_entries(
    m: *const HkMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> HkStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        let entries = a.as_slice();
        let real: Vec<f64> = entries.iter().map(|z| z.re).collect();
        write_buffer(&real, re, len, "real buffer")?;
        if !im.is_null() {
            let imag: Vec<f64> = entries.iter().map(|z| z.im).collect();
            write_buffer(&imag, im, len, "imaginary buffer")?;
        }
        Ok(())
    })
}

/// Singular values in descending order into `out` (`len ≥ n`).
///
/// # Safety
/// `out` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hk_singular_values(m: *const HkMatrix, out: *mut f64, len: usize) -> HkStatus {
    guard(|| write_buffer(&singular_values(matrix_ref(m)?), out, len, "output buffer"))
}

/// Eigenvalues ordered by modulus, then real part, then imaginary part, all
/// descending.
///
/// # Safety
/// `re` and `im` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hk_eigenvalues(
    m: *const HkMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> HkStatus {
    guard(|| {
        let eig = general_eigenvalues(matrix_ref(m)?)?;
        let real: Vec<f64> = eig.iter().map(|z| z.re).collect();
        let imag: Vec<f64> = eig.iter().map(|z| z.im).collect();
        write_buffer(&real, re, len, "real buffer")?;
        write_buffer(&imag, im, len, "imaginary buffer")
    })
}

/// The Hermitian quotient `(I−A*)⁻¹(I−A*A)(I−A)⁻¹` as a new handle.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hk_harnack_quotient(m: *const HkMatrix, out: *mut *mut HkMatrix) -> HkStatus {
    guard(|| write_matrix(harnack_quotient(matrix_ref(m)?)?, out))
}

/// Upper and lower bounds on the product of the eigenvalues of the quotient
/// at the 1-based, strictly increasing `indices`, as JSON.
///
/// # Safety
/// `indices` must hold `k` readable values; `out` must be writable. Free the
/// result with `hk_string_free`.
#[no_mangle]
pub unsafe extern "C" fn hk_bound_report_json(
    m: *const HkMatrix,
    indices: *const usize,
    k: usize,
    settings: *const HkSettings,
    out: *mut *mut c_char,
) -> HkStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if indices.is_null() {
            return fail(HkStatus::NullPointer, "indices are NULL");
        }
        let set = IndexSet::new(a.n(), std::slice::from_raw_parts(indices, k).to_vec())?;
        let report = bound_report(a, &set, &settings_from(settings), "ffi")?;
        write_string(to_json(&report)?, out)
    })
}

/// Per-index slacks of the conjectured resolvent lower bound, as JSON.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hk_conjecture_slack_json(
    m: *const HkMatrix,
    settings: *const HkSettings,
    out: *mut *mut c_char,
) -> HkStatus {
    guard(|| {
        let record = j_conjecture_slack(matrix_ref(m)?, &settings_from(settings))?;
        write_string(to_json(&record)?, out)
    })
}

/// Runs a seeded counterexample search from a JSON configuration and writes
/// the JSON summary. A found violation is reported inside the summary
/// (`violation_found`), not as a status.
///
/// # Safety
/// `config_json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hk_search_json(config_json: *const c_char, out: *mut *mut c_char) -> HkStatus {
    guard(|| {
        let config: SearchConfig = serde_json::from_str(input_str(config_json, "config")?)
            .or_else(|e| fail(HkStatus::Parse, e.to_string()))?;
        let outcome = search(&config)?;
        write_string(to_json(&outcome.summary)?, out)
    })
}

/// Re-evaluates the built-in worked examples; writes the JSON run report.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hk_repro_paper_json(out: *mut *mut c_char) -> HkStatus {
    guard(|| {
        let report = harnack::cli::cmd_repro_paper(vec!["harnack".into(), "repro-paper".into()]);
        write_string(to_json(&report)?, out)
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
