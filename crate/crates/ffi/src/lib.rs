//! C interface to `ehrlimit`.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `_free` function. Every fallible call returns an
//! [`EhrStatus`]; on failure [`ehr_last_error_message`] describes the error
//! on the calling thread. Strings returned through out-parameters are owned
//! by the caller and released with [`ehr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ehrlimit::algebra::IntPolynomial;
use ehrlimit::error::Error;
use ehrlimit::fpp;
use ehrlimit::limits::{self, Family};
use ehrlimit::simplex::{self, FamilySpec, LatticeSimplex};
use num_traits::ToPrimitive;

/// Result of a call. Values 1 to 5 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EhrStatus {
    Ok = 0,
    CheckFailed = 1,
    InvalidArgument = 2,
    UnsupportedForm = 3,
    NotStable = 4,
    BudgetExceeded = 5,
    NullPointer = 10,
    Overflow = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EhrLimitMode {
    Certified = 0,
    Empirical = 1,
}

/// Opaque lattice simplex.
pub struct EhrSimplex(LatticeSimplex);

/// Opaque integer polynomial.
pub struct EhrPolynomial(IntPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Failure(EhrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.code() {
            1 => EhrStatus::CheckFailed,
            3 => EhrStatus::UnsupportedForm,
            5 => EhrStatus::BudgetExceeded,
            _ => EhrStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EhrStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<EhrStatus, Failure>) -> EhrStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            EhrStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        Failure(
            EhrStatus::InvalidArgument,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<EhrStatus, Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(EhrStatus::Ok)
}

unsafe fn write_string(out: *mut *mut c_char, value: String) -> Result<EhrStatus, Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(value)
        .map_err(|_| Failure(EhrStatus::InvalidArgument, "string contains nul".into()))?;
    *out = c.into_raw();
    Ok(EhrStatus::Ok)
}

/// Builds a simplex from `n_vertices` points of `ambient_dim` coordinates,
/// stored row after row in `coords`. Passing `ambient_dim` points makes the
/// origin an implicit extra vertex.
///
/// # Safety
/// `coords` must point to `n_vertices * ambient_dim` readable values and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_simplex_from_vertices(
    coords: *const i64,
    n_vertices: usize,
    ambient_dim: usize,
    out: *mut *mut EhrSimplex,
) -> EhrStatus {
    guard(|| {
        if coords.is_null() && n_vertices * ambient_dim > 0 {
            return Err(null("coords"));
        }
        let flat = if n_vertices * ambient_dim == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(coords, n_vertices * ambient_dim)
        };
        let mut vertices: Vec<Vec<i64>> = flat
            .chunks(ambient_dim.max(1))
            .map(<[i64]>::to_vec)
            .collect();
        if n_vertices == ambient_dim {
            vertices.insert(0, vec![0; ambient_dim]);
        }
        let s = LatticeSimplex::from_i64_vertices(&vertices)?;
        write_out(out, EhrSimplex(s))
    })
}

/// Builds a named simplex from JSON such as `{"kind":"bidiagonal","m":2,"d":14}`.
///
/// Kinds: `standard_reflexive {d}`, `weighted {q}`, `q_of_n {n}`,
/// `bidiagonal {m, d}`, `multidiagonal {a, d}`.
///
/// # Safety
/// `spec_json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_simplex_from_family(
    spec_json: *const c_char,
    out: *mut *mut EhrSimplex,
) -> EhrStatus {
    guard(|| {
        let text = read_str(spec_json, "spec_json")?;
        let spec: FamilySpec = serde_json::from_str(text)
            .map_err(|e| Failure(EhrStatus::InvalidArgument, e.to_string()))?;
        write_out(out, EhrSimplex(spec.build()?))
    })
}

/// Parses a simplex file body: JSON `{"vertices": ...}` or a whitespace
/// matrix whose columns are vertices.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_simplex_parse(
    text: *const c_char,
    out: *mut *mut EhrSimplex,
) -> EhrStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        write_out(out, EhrSimplex(simplex::parse_simplex(text)?))
    })
}

/// Dimension of the simplex, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ehr_simplex_dim(s: *const EhrSimplex) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// Normalized volume as a decimal string.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_simplex_volume(
    s: *const EhrSimplex,
    out: *mut *mut c_char,
) -> EhrStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("simplex"))?;
        write_string(out, s.0.normalized_volume().to_string())
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ehr_simplex_free(s: *mut EhrSimplex) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// h*-polynomial of the simplex.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_hstar(
    s: *const EhrSimplex,
    out: *mut *mut EhrPolynomial,
) -> EhrStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("simplex"))?;
        write_out(out, EhrPolynomial(fpp::hstar(&s.0)?))
    })
}

/// Number of stored coefficients (degree plus one; 0 for the zero polynomial).
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ehr_polynomial_len(p: *const EhrPolynomial) -> usize {
    p.as_ref().map_or(0, |p| p.0.coeffs().len())
}

/// Coefficient of `z^index`; fails with `Overflow` if it does not fit.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_polynomial_coeff_u64(
    p: *const EhrPolynomial,
    index: usize,
    out: *mut u64,
) -> EhrStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("polynomial"))?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        let c = p.0.coeff(index);
        *out = c.to_u64().ok_or_else(|| {
            Failure(
                EhrStatus::Overflow,
                format!("coefficient {c} does not fit in 64 bits"),
            )
        })?;
        Ok(EhrStatus::Ok)
    })
}

/// Coefficient of `z^index` as a decimal string.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_polynomial_coeff_string(
    p: *const EhrPolynomial,
    index: usize,
    out: *mut *mut c_char,
) -> EhrStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("polynomial"))?;
        write_string(out, p.0.coeff(index).to_string())
    })
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ehr_polynomial_free(p: *mut EhrPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Limit prefix through degree `degree` for a family given as JSON, e.g.
/// `{"kind":"bidiagonal","m":2}`; writes the report JSON to `out`.
///
/// `window` and `d_max` apply to empirical mode. A report that did not
/// stabilize is still written and the call returns `NotStable`.
///
/// # Safety
/// `family_json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ehr_limit(
    family_json: *const c_char,
    degree: usize,
    mode: EhrLimitMode,
    window: usize,
    d_max: usize,
    budget: u64,
    out: *mut *mut c_char,
) -> EhrStatus {
    guard(|| {
        let text = read_str(family_json, "family_json")?;
        let family: Family = serde_json::from_str(text)
            .map_err(|e| Failure(EhrStatus::InvalidArgument, e.to_string()))?;
        let report = match mode {
            EhrLimitMode::Certified => limits::limit_prefix_certified(&family, degree, budget)?,
            EhrLimitMode::Empirical => {
                limits::stabilize_empirical(&family, degree, window, d_max, budget)?
            }
        };
        write_string(out, report.to_json())?;
        if report.is_stable() {
            Ok(EhrStatus::Ok)
        } else {
            set_last_error(&format!("unstable coefficients {:?}", report.unstable()));
            Ok(EhrStatus::NotStable)
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ehr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failed call on this thread, or null.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn ehr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
