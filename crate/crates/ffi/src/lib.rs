//! C interface.
//!
//! Series live behind opaque handles created by `is_*` constructors and
//! released with the matching `*_free`. Every fallible call returns an
//! [`IsStatus`]; on failure the message is available from
//! [`is_last_error_message`] on the same thread until the next failing call.
//! Strings handed out by the library are released with [`is_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use implicit_series::analytic::{self, AnalyticProblem};
use implicit_series::implicit::{self, ImplicitProblem, SolveOptions, Variant};
use implicit_series::lagrange::{self, RevertibleSeries};
use implicit_series::universal::{self, ForestType};
use implicit_series::{cli, expr, reproduce, Error, MultiIndex, Vars, WSeries, ZWSeries};
use num_complex::Complex64;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    UnknownIdentifier = 4,
    Domain = 5,
    Condition = 6,
    Singular = 7,
    Range = 8,
    Structural = 9,
    Resource = 10,
    Convergence = 11,
    NumericalSingularity = 12,
    Precondition = 13,
    Format = 14,
    Invariant = 15,
    Usage = 16,
    Panic = 17,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsVariant {
    Finite = 0,
    Integer = 1,
    Contraction = 2,
    Recurrence = 3,
}

impl From<IsVariant> for Variant {
    fn from(v: IsVariant) -> Variant {
        match v {
            IsVariant::Finite => Variant::Finite,
            IsVariant::Integer => Variant::Integer,
            IsVariant::Contraction => Variant::Contraction,
            IsVariant::Recurrence => Variant::Recurrence,
        }
    }
}

/// A series in `z` and the w-variables.
pub struct IsSeries(ZWSeries);

/// A series in the w-variables alone.
pub struct IsWSeries(WSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn status_of(e: &Error) -> IsStatus {
    match e.root() {
        Error::Structural { .. } => IsStatus::Structural,
        Error::Range(_) => IsStatus::Range,
        Error::Domain(_) => IsStatus::Domain,
        Error::Condition(_) => IsStatus::Condition,
        Error::Singular(_) => IsStatus::Singular,
        Error::Syntax { .. } => IsStatus::Syntax,
        Error::UnknownIdentifier { .. } => IsStatus::UnknownIdentifier,
        Error::InExpression { .. } => unreachable!("root strips wrappers"),
        Error::Resource(_) => IsStatus::Resource,
        Error::Convergence { .. } => IsStatus::Convergence,
        Error::NumericalSingularity(_) => IsStatus::NumericalSingularity,
        Error::Precondition(_) => IsStatus::Precondition,
        Error::Usage(_) => IsStatus::Usage,
        Error::Format(_) => IsStatus::Format,
        Error::Invariant(_) => IsStatus::Invariant,
    }
}

fn set_error(status: IsStatus, msg: String) -> IsStatus {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
    status
}

struct Fail(IsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type FfiResult<T> = Result<T, Fail>;

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> IsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IsStatus::Ok,
        Ok(Err(Fail(s, msg))) => set_error(s, msg),
        Err(_) => set_error(IsStatus::Panic, "internal panic".into()),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Fail(IsStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(IsStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Fail(IsStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn out_arg<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Fail(IsStatus::NullPointer, "output pointer is NULL".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(Fail(IsStatus::NullPointer, "output pointer is NULL".into()));
    }
    *out = CString::new(s).expect("library strings contain no NUL").into_raw();
    Ok(())
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> FfiResult<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail(IsStatus::NullPointer, format!("{name} is NULL")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message of the last failing call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn is_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Stable short name of a status, e.g. `"domain"`. Never NULL.
#[no_mangle]
pub extern "C" fn is_status_name(status: IsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        IsStatus::Ok => c"ok",
        IsStatus::NullPointer => c"null-pointer",
        IsStatus::InvalidUtf8 => c"invalid-utf8",
        IsStatus::Syntax => c"syntax",
        IsStatus::UnknownIdentifier => c"unknown-identifier",
        IsStatus::Domain => c"domain",
        IsStatus::Condition => c"condition",
        IsStatus::Singular => c"singular",
        IsStatus::Range => c"range",
        IsStatus::Structural => c"structural",
        IsStatus::Resource => c"resource",
        IsStatus::Convergence => c"convergence",
        IsStatus::NumericalSingularity => c"numerical-singularity",
        IsStatus::Precondition => c"precondition",
        IsStatus::Format => c"format",
        IsStatus::Invariant => c"invariant",
        IsStatus::Usage => c"usage",
        IsStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn is_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` as a series in `z` and the comma-separated variables
/// `vars` (NULL means `"w"`), truncated at `(z_order, w_order)`.
///
/// # Safety
/// `text` and `vars` must be NUL-terminated strings or NULL; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn is_series_parse(
    text: *const c_char,
    vars: *const c_char,
    z_order: u32,
    w_order: u32,
    out: *mut *mut IsSeries,
) -> IsStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let vars = if vars.is_null() { "w" } else { str_arg(vars, "vars")? };
        let names: Vec<&str> = vars.split(',').map(str::trim).collect();
        if names.iter().any(|n| n.is_empty() || *n == "z") {
            return Err(Fail(IsStatus::Usage, format!("invalid variable list {vars:?}")));
        }
        let s = expr::series(text, &Vars::new(names), z_order, w_order)?;
        out_arg(out, IsSeries(s))
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn is_series_free(s: *mut IsSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn is_wseries_free(s: *mut IsWSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Solves `z = G(z, w)` to the w-order of `g`. With a non-NULL `h` the
/// result is `H(φ(w), w)` instead of `φ`.
///
/// # Safety
/// `g` must be a valid handle, `h` a valid handle or NULL, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn is_solve(
    g: *const IsSeries,
    variant: IsVariant,
    normalize: bool,
    h: *const IsSeries,
    out: *mut *mut IsWSeries,
) -> IsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let p = ImplicitProblem::new(g.0.clone())?;
        let opts = SolveOptions {
            variant: variant.into(),
            normalize,
            h: h.as_ref().map(|h| h.0.clone()),
            ..SolveOptions::default()
        };
        let report = implicit::solve(&p, &opts)?;
        out_arg(out, IsWSeries(report.h.unwrap_or(report.phi)))
    })
}

/// `f^{-1}(w)` to `order` for a series `f` in `z` alone.
///
/// # Safety
/// `f` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn is_invert(f: *const IsSeries, order: u32, out: *mut *mut IsWSeries) -> IsStatus {
    guard(|| {
        let f = RevertibleSeries::new(&ref_arg(f, "f")?.0)?;
        out_arg(out, IsWSeries(lagrange::revert(&f, order)))
    })
}

/// `−1 − x₀(w)` for the lattice-gas root, to `order`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn is_sokal_x0(order: u32, out: *mut *mut IsWSeries) -> IsStatus {
    guard(|| out_arg(out, IsWSeries(reproduce::sokal_x0(order)?)))
}

/// Number of w-variables of a series.
///
/// # Safety
/// `s` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn is_wseries_nvars(s: *const IsWSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.vars().len())
}

/// Truncation order of a series.
///
/// # Safety
/// `s` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn is_wseries_order(s: *const IsWSeries) -> u32 {
    s.as_ref().map_or(0, |s| s.0.order())
}

/// The coefficient of `w^alpha` as `"num/den"`.
///
/// # Safety
/// `s` must be a valid handle, `alpha` must point to `len` exponents, and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn is_wseries_coeff(
    s: *const IsWSeries,
    alpha: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> IsStatus {
    guard(|| {
        let s = ref_arg(s, "series")?;
        let alpha = slice_arg(alpha, len, "alpha")?;
        if alpha.len() != s.0.vars().len() {
            return Err(Fail(
                IsStatus::Range,
                format!("multi-index has {} entries for {} variables", alpha.len(), s.0.vars().len()),
            ));
        }
        let c = s.0.coeff(&MultiIndex::from(alpha.to_vec()))?;
        out_string(out, format!("{}/{}", c.numer(), c.denom()))
    })
}

/// The coefficient of `w^alpha` rounded to a double.
///
/// # Safety
/// As for [`is_wseries_coeff`], with `out` pointing to a double.
#[no_mangle]
pub unsafe extern "C" fn is_wseries_coeff_f64(
    s: *const IsWSeries,
    alpha: *const u32,
    len: usize,
    out: *mut f64,
) -> IsStatus {
    guard(|| {
        let s = ref_arg(s, "series")?;
        let alpha = slice_arg(alpha, len, "alpha")?;
        if alpha.len() != s.0.vars().len() || out.is_null() {
            return Err(Fail(IsStatus::Range, "bad multi-index or output pointer".into()));
        }
        *out = s.0.coeff(&MultiIndex::from(alpha.to_vec()))?.to_f64();
        Ok(())
    })
}

/// Canonical text form, one `w^[α] z^0 : num/den` line per nonzero term.
///
/// # Safety
/// `s` must be a valid handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn is_wseries_to_text(s: *const IsWSeries, out: *mut *mut c_char) -> IsStatus {
    guard(|| {
        let s = ref_arg(s, "series")?;
        out_string(out, cli::render_w(&s.0, cli::Format::Text))
    })
}

/// Number of plane forests with `ell` trees and `k[n]` vertices of
/// out-degree `n`, as a decimal string ("0" for inadmissible types).
///
/// # Safety
/// `k` must point to `len` counts and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn is_universal_coeff(
    ell: u32,
    k: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> IsStatus {
    guard(|| {
        let k = slice_arg(k, len, "k")?;
        let t = ForestType::new(ell, k.to_vec());
        let c = if t.is_admissible() { universal::universal_coeff(&t).to_string() } else { "0".into() };
        out_string(out, c)
    })
}

/// Iterates `z ← G(z, w)` from 0 at the point `w = w_re + i·w_im`
/// (one entry per w-variable), after checking the contraction condition on
/// an automatically chosen circle.
///
/// # Safety
/// `g` must be a valid handle, `w_re`/`w_im` must point to `n` doubles and
/// `out_re`/`out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn is_analytic_fixed_point(
    g: *const IsSeries,
    w_re: *const f64,
    w_im: *const f64,
    n: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> IsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let re = slice_arg(w_re, n, "w_re")?;
        let im = slice_arg(w_im, n, "w_im")?;
        if out_re.is_null() || out_im.is_null() {
            return Err(Fail(IsStatus::NullPointer, "output pointer is NULL".into()));
        }
        let w: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let p = AnalyticProblem::with_auto_radius(&g.0, w, analytic::DEFAULT_QPOINTS, analytic::DEFAULT_ITER_TOL)?;
        let fp = analytic::fixed_point_iterate(&p, Complex64::new(0.0, 0.0))?;
        *out_re = fp.value.re;
        *out_im = fp.value.im;
        Ok(())
    })
}
