//! C ABI for the exact bounds, the profile solver and the numeric constants.
//!
//! Every function returns a [`CbStatus`]; results go through out-pointers.
//! Objects are opaque handles released with their `_free` function. The
//! message of the last failure on the calling thread is available from
//! [`cb_last_error`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conformal_bounds::bounds::{assemble, threshold_report, verify_all, BoundAssembly, BoundsError, Case, Target};
use conformal_bounds::numint::{compute_c_numeric, NumericOptions, NumintError};
use conformal_bounds::pde::{sandwich_check, solve_profile, GridSpec, HalfPlaneField, PdeError, ProfileTag};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Dimension outside the supported range, or a pole.
    Domain = 3,
    NotConverged = 4,
    CheckFailed = 5,
    BufferTooSmall = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbTarget {
    C1Lower = 0,
    C1Upper = 1,
    C2Lower = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbCase {
    Nonumbilic = 0,
    Umbilic = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbTag {
    V = 0,
    Lambda = 1,
    U1 = 2,
    U2 = 3,
    V1 = 4,
    V2 = 5,
    W1 = 6,
    W2 = 7,
}

/// Opaque exact bound assembly.
pub struct CbAssembly(BoundAssembly);

/// Opaque solved profile field.
pub struct CbField(HalfPlaneField);

/// Result of a numeric constant computation, in units of
/// `omega_(n-2) * B((n-1)/2, (n+1)/2)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CbConstant {
    pub value: f64,
    pub error: f64,
    pub lower_bound: f64,
    /// NaN when no upper bound exists.
    pub upper_bound: f64,
    pub contained: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(CbStatus, String);

impl From<BoundsError> for Failure {
    fn from(e: BoundsError) -> Self {
        let status = match e {
            BoundsError::Exact(_) => CbStatus::Domain,
            BoundsError::Unbounded | BoundsError::BudgetExhausted(_) => CbStatus::NotConverged,
            BoundsError::Infeasible(_) | BoundsError::IdentityFailure { .. } => CbStatus::CheckFailed,
            _ => CbStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<PdeError> for Failure {
    fn from(e: PdeError) -> Self {
        let status = match e {
            PdeError::Domain { .. } => CbStatus::Domain,
            PdeError::NotConverged { .. } => CbStatus::NotConverged,
            _ => CbStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<NumintError> for Failure {
    fn from(e: NumintError) -> Self {
        match e {
            NumintError::Pde(e) => e.into(),
            NumintError::Bounds(e) => e.into(),
            NumintError::ToleranceNotReached { .. }
            | NumintError::DivergentTail { .. }
            | NumintError::NonFinite { .. } => Failure(CbStatus::NotConverged, e.to_string()),
            _ => Failure(CbStatus::Domain, e.to_string()),
        }
    }
}

impl From<conformal_bounds::exactfn::ExactError> for Failure {
    fn from(e: conformal_bounds::exactfn::ExactError) -> Self {
        Failure(CbStatus::Domain, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CbStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records failures and converts panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CbStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic in conformal-bounds".into());
            CbStatus::Internal
        }
    }
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn target(t: CbTarget) -> Target {
    match t {
        CbTarget::C1Lower => Target::C1Lower,
        CbTarget::C1Upper => Target::C1Upper,
        CbTarget::C2Lower => Target::C2Lower,
    }
}

fn case(c: CbCase) -> Case {
    match c {
        CbCase::Nonumbilic => Case::Nonumbilic,
        CbCase::Umbilic => Case::Umbilic,
    }
}

fn tag(t: CbTag) -> ProfileTag {
    match t {
        CbTag::V => ProfileTag::V,
        CbTag::Lambda => ProfileTag::Lambda,
        CbTag::U1 => ProfileTag::U1,
        CbTag::U2 => ProfileTag::U2,
        CbTag::V1 => ProfileTag::V1,
        CbTag::V2 => ProfileTag::V2,
        CbTag::W1 => ProfileTag::W1,
        CbTag::W2 => ProfileTag::W2,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cb_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let k = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, k);
            buf.add(k).write(0);
        }
        msg.len()
    })
}

/// Builds the exact assembly of `t`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cb_assembly_new(t: CbTarget, out: *mut *mut CbAssembly) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = assemble(target(t))?;
        write(out, Box::into_raw(Box::new(CbAssembly(a))), "out")
    })
}

/// # Safety
/// `h` must be null or a handle from `cb_assembly_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cb_assembly_free(h: *mut CbAssembly) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Total of the assembly at dimension `n`, in Beta units.
///
/// # Safety
/// `h` must be a live handle; `value` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cb_assembly_total(h: *const CbAssembly, n: i64, value: *mut f64) -> CbStatus {
    guard(|| {
        let a = h.as_ref().ok_or_else(|| null("handle"))?;
        let v = a.0.total.coeff.eval_f64(n)?;
        write(value, v, "value")
    })
}

/// Whether the assembly total equals its closed form exactly.
///
/// # Safety
/// `h` must be a live handle; `holds` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cb_assembly_identity_holds(h: *const CbAssembly, holds: *mut bool) -> CbStatus {
    guard(|| {
        let a = h.as_ref().ok_or_else(|| null("handle"))?;
        write(holds, a.0.verify().is_ok(), "holds")
    })
}

/// Canonical text of the total as a rational function of `n`, written as in
/// [`cb_last_error`]. `needed` receives the full length excluding the NUL;
/// `BufferTooSmall` is returned when it does not fit.
///
/// # Safety
/// `h` must be a live handle; `buf` valid for `len` bytes or null;
/// `needed` valid for a write or null.
#[no_mangle]
pub unsafe extern "C" fn cb_assembly_total_text(
    h: *const CbAssembly,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CbStatus {
    guard(|| {
        let a = h.as_ref().ok_or_else(|| null("handle"))?;
        let text = a.0.total.coeff.to_string();
        if !needed.is_null() {
            needed.write(text.len());
        }
        if buf.is_null() || len <= text.len() {
            return Err(Failure(CbStatus::BufferTooSmall, format!("need {} bytes", text.len() + 1)));
        }
        ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
        buf.add(text.len()).write(0);
        Ok(())
    })
}

/// Smallest dimension at which the exact total of `t` is positive.
///
/// # Safety
/// `n` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cb_first_positive(t: CbTarget, n: *mut i64) -> CbStatus {
    guard(|| {
        let a = assemble(target(t))?;
        let report = threshold_report(std::slice::from_ref(&a));
        let first = report.entry(a.target).and_then(|e| e.first_positive);
        let first = first.ok_or_else(|| Failure(CbStatus::CheckFailed, "no positive value found".into()))?;
        write(n, first, "n")
    })
}

/// Runs every exact identity check (both cases when `all_cases` is true).
/// Returns `CheckFailed` when any check fails.
///
/// # Safety
/// `passed` and `total` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cb_verify_identities(
    c: CbCase,
    all_cases: bool,
    passed: *mut usize,
    total: *mut usize,
) -> CbStatus {
    guard(|| {
        let checks = verify_all((!all_cases).then(|| case(c)), None)?;
        let ok = checks.iter().filter(|c| c.ok).count();
        write(passed, ok, "passed")?;
        write(total, checks.len(), "total")?;
        if ok == checks.len() {
            Ok(())
        } else {
            Err(Failure(CbStatus::CheckFailed, format!("{} of {} identities failed", checks.len() - ok, checks.len())))
        }
    })
}

/// Solves the tagged profile at dimension `n` on a square grid of `nodes`
/// per direction with the default radius and stretching.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cb_field_solve(t: CbTag, n: i64, nodes: usize, out: *mut *mut CbField) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let field = solve_profile(tag(t), n, GridSpec::square(nodes))?;
        write(out, Box::into_raw(Box::new(CbField(field))), "out")
    })
}

/// # Safety
/// `h` must be null or a handle from `cb_field_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cb_field_free(h: *mut CbField) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `n_r`, `n_s` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cb_field_dims(h: *const CbField, n_r: *mut usize, n_s: *mut usize) -> CbStatus {
    guard(|| {
        let f = h.as_ref().ok_or_else(|| null("handle"))?;
        write(n_r, f.0.grid().n_r(), "n_r")?;
        write(n_s, f.0.grid().n_s(), "n_s")
    })
}

/// Node coordinates and value at `(i, j)`.
///
/// # Safety
/// `h` must be a live handle; `r`, `s`, `value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cb_field_node(
    h: *const CbField,
    i: usize,
    j: usize,
    r: *mut f64,
    s: *mut f64,
    value: *mut f64,
) -> CbStatus {
    guard(|| {
        let f = h.as_ref().ok_or_else(|| null("handle"))?;
        let g = f.0.grid();
        if i >= g.n_r() || j >= g.n_s() {
            return Err(Failure(CbStatus::InvalidArgument, format!("node ({i}, {j}) outside {}x{}", g.n_r(), g.n_s())));
        }
        write(r, g.r()[i], "r")?;
        write(s, g.s()[j], "s")?;
        write(value, f.0.value(i, j), "value")
    })
}

/// Bilinear interpolation of the field at `(r, s)` inside the box.
///
/// # Safety
/// `h` must be a live handle; `value` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cb_field_interpolate(h: *const CbField, r: f64, s: f64, value: *mut f64) -> CbStatus {
    guard(|| {
        let f = h.as_ref().ok_or_else(|| null("handle"))?;
        let v = f
            .0
            .interpolate(r, s)
            .ok_or_else(|| Failure(CbStatus::InvalidArgument, format!("({r}, {s}) outside the computational box")))?;
        write(value, v, "value")
    })
}

/// Checks the sub/supersolution bounds of the field at `tolerance`.
/// `pass` receives the verdict; the status is `Ok` either way.
///
/// # Safety
/// `h` must be a live handle; `pass` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cb_field_sandwich(h: *const CbField, tolerance: f64, pass: *mut bool) -> CbStatus {
    guard(|| {
        let f = h.as_ref().ok_or_else(|| null("handle"))?;
        if !(tolerance >= 0.0) {
            return Err(Failure(CbStatus::InvalidArgument, format!("tolerance {tolerance} must be >= 0")));
        }
        let report = sandwich_check(&f.0, tolerance)?;
        write(pass, report.pass, "pass")
    })
}

/// Numeric value of the constant of case `c` at dimension `n` with the
/// default grid.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cb_compute_constant(c: CbCase, n: i64, out: *mut CbConstant) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let rec = compute_c_numeric(case(c), n, NumericOptions::default())?;
        write(
            out,
            CbConstant {
                value: rec.value,
                error: rec.error,
                lower_bound: rec.lower_bound_exact,
                upper_bound: rec.upper_bound_exact.unwrap_or(f64::NAN),
                contained: rec.contained,
            },
            "out",
        )
    })
}
