//! C ABI for `ldata`.
//!
//! Every fallible function returns an [`LdStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`ld_last_error`] on the same thread. Data handles are opaque and must be
//! released with [`ld_datum_free`]. Panics never cross the boundary; they
//! surface as `LD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;

use ldata::classify::{degree_gate, vanishing_order_gate, Category};
use ldata::coefficients::exp_transform;
use ldata::datum::LDatum;
use ldata::explicit::{verify_with, EfOptions};
use ldata::instances::{build_dirichlet, build_zeta, build_zeta_with_zeros};
use ldata::spec_doc::DatumSpecDocument;
use ldata::special::{digamma, log_gamma};
use ldata::test_function::make_bump;
use ldata::twists::{s_sum, twist_sum, TwistSpec, TwistValue};
use ldata::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    InvalidArgument = 10,
    Domain = 11,
    GammaPole = 12,
    Geometry = 13,
    StripExceeded = 14,
    NonConvergence = 15,
    Normalization = 16,
    NonPrimitive = 17,
    CharacterIndex = 18,
    Parse = 19,
    Coverage = 20,
    LowerHalfPlane = 21,
    TwistSpec = 22,
    Resonance = 23,
    IllConditioned = 24,
    DegreeRange = 25,
    Spec = 26,
    Io = 27,
}

fn status_of(e: &Error) -> LdStatus {
    match e {
        Error::GammaPole(_) => LdStatus::GammaPole,
        Error::Domain(_) => LdStatus::Domain,
        Error::Geometry { .. } => LdStatus::Geometry,
        Error::StripExceeded { .. } => LdStatus::StripExceeded,
        Error::NonConvergence { .. } => LdStatus::NonConvergence,
        Error::Normalization(_) => LdStatus::Normalization,
        Error::NonPrimitive { .. } => LdStatus::NonPrimitive,
        Error::CharacterIndex { .. } => LdStatus::CharacterIndex,
        Error::Parse { .. } => LdStatus::Parse,
        Error::Coverage(_) => LdStatus::Coverage,
        Error::LowerHalfPlane(_) => LdStatus::LowerHalfPlane,
        Error::TwistSpec(_) => LdStatus::TwistSpec,
        Error::Resonance { .. } => LdStatus::Resonance,
        Error::IllConditioned(_) => LdStatus::IllConditioned,
        Error::DegreeRange(_) => LdStatus::DegreeRange,
        Error::InvalidArgument(_) => LdStatus::InvalidArgument,
        Error::Spec(_) => LdStatus::Spec,
        Error::Io { .. } => LdStatus::Io,
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for LdComplex {
    fn from(z: Complex64) -> Self {
        LdComplex { re: z.re, im: z.im }
    }
}

impl From<LdComplex> for Complex64 {
    fn from(z: LdComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Opaque L-datum handle.
pub struct LdDatum(LDatum);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdEfReport {
    pub zero_side: f64,
    pub zero_side_imag: f64,
    pub arithmetic_side: f64,
    pub residual: f64,
    pub zero_truncation_estimate: f64,
    pub prime_truncation_estimate: f64,
    pub quadrature_estimate: f64,
    pub composite_estimate: f64,
    pub t_max: f64,
    pub zero_entries: u64,
    pub prime_terms: u64,
    pub pass: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdTwistValue {
    pub value: LdComplex,
    pub terms: u64,
    pub tail_bound: f64,
}

impl From<TwistValue> for LdTwistValue {
    fn from(v: TwistValue) -> Self {
        LdTwistValue { value: v.value.into(), terms: v.terms, tail_bound: v.tail_bound }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdCategory {
    Trivial = 0,
    ImpossibleBelowOne = 1,
    Dirichlet = 2,
    ImpossibleBelowTwo = 3,
    Unknown = 4,
}

impl From<Category> for LdCategory {
    fn from(c: Category) -> Self {
        match c {
            Category::Trivial => LdCategory::Trivial,
            Category::ImpossibleBelowOne => LdCategory::ImpossibleBelowOne,
            Category::Dirichlet => LdCategory::Dirichlet,
            Category::ImpossibleBelowTwo => LdCategory::ImpossibleBelowTwo,
            Category::Unknown => LdCategory::Unknown,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(LdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> LdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            LdStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("panic: {msg}"));
            LdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(LdStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn datum<'a>(d: *const LdDatum) -> Result<&'a LDatum, Failure> {
    d.as_ref().map(|d| &d.0).ok_or_else(|| null("datum"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output"));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(LdStatus::InvalidUtf8, e.to_string()))
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null("array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn emit(out: *mut *mut LdDatum, d: LDatum) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(LdDatum(d))))
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ld_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn ld_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// ζ with its pole entries only.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_zeta(out: *mut *mut LdDatum) -> LdStatus {
    guard(|| emit(out, build_zeta()))
}

/// ζ with the bundled zero table; `limit < 0` keeps every zero.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_zeta_with_zeros(limit: i64, out: *mut *mut LdDatum) -> LdStatus {
    guard(|| emit(out, build_zeta_with_zeros(usize::try_from(limit).ok())?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_dirichlet(modulus: u64, index: u64, out: *mut *mut LdDatum) -> LdStatus {
    guard(|| emit(out, build_dirichlet(modulus, index)?))
}

/// Builds a datum from a spec document; relative file names resolve against
/// the working directory.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_from_spec_json(json: *const c_char, out: *mut *mut LdDatum) -> LdStatus {
    guard(|| emit(out, DatumSpecDocument::parse(text(json)?)?.build()?))
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_from_spec_file(path: *const c_char, out: *mut *mut LdDatum) -> LdStatus {
    guard(|| emit(out, DatumSpecDocument::read(text(path)?)?.build()?))
}

/// Σ weights[i]·data[i]. The inputs stay owned by the caller.
///
/// # Safety
/// `weights` and `data` must point to `len` elements; each handle must be live.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_combine(
    weights: *const f64,
    data: *const *const LdDatum,
    len: usize,
    out: *mut *mut LdDatum,
) -> LdStatus {
    guard(|| {
        let weights = slice(weights, len)?;
        let data = slice(data, len)?;
        let terms = weights
            .iter()
            .zip(data)
            .map(|(&w, &d)| Ok((w, datum(d)?)))
            .collect::<Result<Vec<_>, Failure>>()?;
        emit(out, LDatum::combine(&terms)?)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `d` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_free(d: *mut LdDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_degree(d: *const LdDatum, out: *mut f64) -> LdStatus {
    guard(|| write(out, datum(d)?.degree()?))
}

/// # Safety
/// `d` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_datum_conductor(d: *const LdDatum, out: *mut f64) -> LdStatus {
    guard(|| write(out, datum(d)?.conductor()))
}

/// Explicit-formula check with the bump on [center − width, center + width]
/// inside [0, support].
///
/// # Safety
/// `d` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_verify(
    d: *const LdDatum,
    support: f64,
    center: f64,
    width: f64,
    tolerance: f64,
    out: *mut LdEfReport,
) -> LdStatus {
    guard(|| {
        let tf = make_bump(support, center, width)?;
        let r = verify_with(datum(d)?, &tf, &EfOptions { tolerance, ..EfOptions::default() })?;
        write(
            out,
            LdEfReport {
                zero_side: r.zero_side,
                zero_side_imag: r.zero_side_imag,
                arithmetic_side: r.arithmetic_side,
                residual: r.residual,
                zero_truncation_estimate: r.zero_truncation_estimate,
                prime_truncation_estimate: r.prime_truncation_estimate,
                quadrature_estimate: r.quadrature_estimate,
                composite_estimate: r.composite_estimate,
                t_max: r.t_max,
                zero_entries: r.zero_entries as u64,
                prime_terms: r.prime_terms,
                pass: r.pass,
            },
        )
    })
}

/// Writes a(1), …, a(n_max) of L_F to `out`.
///
/// # Safety
/// `d` must be live and `out` valid for `n_max` writes.
#[no_mangle]
pub unsafe extern "C" fn ld_exp_transform(d: *const LdDatum, n_max: u64, out: *mut LdComplex) -> LdStatus {
    guard(|| {
        let a = exp_transform(datum(d)?.f(), n_max)?;
        if n_max > 0 && out.is_null() {
            return Err(null("output"));
        }
        for n in 1..=n_max {
            out.add((n - 1) as usize).write(a.get(n).into());
        }
        Ok(())
    })
}

/// # Safety
/// `d` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_s_sum(d: *const LdDatum, z: LdComplex, n_cap: u64, out: *mut LdTwistValue) -> LdStatus {
    guard(|| write(out, s_sum(datum(d)?, z.into(), n_cap)?.into()))
}

/// # Safety
/// `alphas` and `cs` must point to `len` elements; `d` must be live and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_twist_sum(
    d: *const LdDatum,
    z: LdComplex,
    alphas: *const f64,
    cs: *const f64,
    len: usize,
    n_cap: u64,
    out: *mut LdTwistValue,
) -> LdStatus {
    guard(|| {
        let spec = TwistSpec::new(slice(alphas, len)?.to_vec(), slice(cs, len)?.to_vec())?;
        write(out, twist_sum(datum(d)?, z.into(), &spec, n_cap)?.into())
    })
}

/// Principal branch of log Γ(s).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_log_gamma(s: LdComplex, out: *mut LdComplex) -> LdStatus {
    guard(|| write(out, log_gamma(s.into())?.into()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_digamma(s: LdComplex, out: *mut LdComplex) -> LdStatus {
    guard(|| write(out, digamma(s.into())?.into()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ld_degree_gate(degree: f64, out: *mut LdCategory) -> LdStatus {
    guard(|| write(out, degree_gate(degree)?.category.into()))
}

#[no_mangle]
pub extern "C" fn ld_vanishing_order_gate(n: u64, k: u64) -> bool {
    vanishing_order_gate(n, k).holds
}
