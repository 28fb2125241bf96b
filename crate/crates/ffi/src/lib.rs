//! C ABI for frack.
//!
//! Conventions:
//! - every function returns a [`FrackStatus`]; results go through out-pointers
//!   that are written only on success;
//! - objects are opaque handles created by `frack_*_new`/producers and released
//!   with the matching `frack_*_free`, which accepts NULL;
//! - after a failure, `frack_last_error` describes it until the next call on
//!   the same thread;
//! - panics never cross the boundary; they become `FRACK_STATUS_PANIC`.

use frack::diffusion::{self, DiffusionQuery};
use frack::fractional::SampledFunction;
use frack::kinetic::{self, ForcingTerm, KineticProblem};
use frack::special::{mittag_leffler, MLParams};
use frack::table::SolutionTable;
use frack::FrackError;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Outcome of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrackStatus {
    Ok = 0,
    InvalidParameter = 1,
    NonConvergence = 2,
    DivergentParameters = 3,
    DegeneratePoles = 4,
    ContourFailure = 5,
    NoCancellablePair = 6,
    GridTooCoarse = 7,
    QuadratureFailure = 8,
    InversionUnstable = 9,
    OutOfAsymptoticRegime = 10,
    Ingestion = 11,
    NullPointer = 12,
    IndexOutOfRange = 13,
    Panic = 14,
}

impl From<&FrackError> for FrackStatus {
    fn from(e: &FrackError) -> Self {
        match e {
            FrackError::InvalidParameter(_) => FrackStatus::InvalidParameter,
            FrackError::NonConvergence { .. } => FrackStatus::NonConvergence,
            FrackError::DivergentParameters(_) => FrackStatus::DivergentParameters,
            FrackError::DegeneratePoles(_) => FrackStatus::DegeneratePoles,
            FrackError::ContourFailure(_) => FrackStatus::ContourFailure,
            FrackError::NoCancellablePair => FrackStatus::NoCancellablePair,
            FrackError::GridTooCoarse { .. } => FrackStatus::GridTooCoarse,
            FrackError::QuadratureFailure(_) => FrackStatus::QuadratureFailure,
            FrackError::InversionUnstable(_) => FrackStatus::InversionUnstable,
            FrackError::OutOfAsymptoticRegime(_) => FrackStatus::OutOfAsymptoticRegime,
            FrackError::Ingestion(_) => FrackStatus::Ingestion,
        }
    }
}

/// Forcing families that need no sampled data.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrackForcing {
    /// f = 1; both parameters ignored
    Constant = 0,
    /// f = t^{ρ−1} with ρ = `p1`
    PowerLaw = 1,
    /// f = t^{μ−1} E^γ_{ν,μ}(−(ct)^ν) with μ = `p1`, γ = `p2`
    Prabhakar = 2,
}

/// Opaque kinetic problem.
pub struct FrackKinetic(KineticProblem);

/// Opaque result table.
pub struct FrackTable(SolutionTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    // interior NULs would truncate the message; replace them
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (FrackStatus, String)>) -> FrackStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FrackStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {what}"));
            FrackStatus::Panic
        }
    }
}

fn lift<T>(r: frack::Result<T>) -> Result<T, (FrackStatus, String)> {
    r.map_err(|e| (FrackStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (FrackStatus, String) {
    (FrackStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` must be NULL or valid for reads of `len` elements.
unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], (FrackStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `out` must be NULL or valid for a write.
unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (FrackStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next frack call on the same thread.
#[no_mangle]
pub extern "C" fn frack_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, human-readable name of a status code.
#[no_mangle]
pub extern "C" fn frack_status_name(status: FrackStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        FrackStatus::Ok => b"ok\0",
        FrackStatus::InvalidParameter => b"invalid parameter\0",
        FrackStatus::NonConvergence => b"non-convergence\0",
        FrackStatus::DivergentParameters => b"divergent parameters\0",
        FrackStatus::DegeneratePoles => b"degenerate poles\0",
        FrackStatus::ContourFailure => b"contour failure\0",
        FrackStatus::NoCancellablePair => b"no cancellable pair\0",
        FrackStatus::GridTooCoarse => b"grid too coarse\0",
        FrackStatus::QuadratureFailure => b"quadrature failure\0",
        FrackStatus::InversionUnstable => b"inversion unstable\0",
        FrackStatus::OutOfAsymptoticRegime => b"out of asymptotic regime\0",
        FrackStatus::Ingestion => b"ingestion error\0",
        FrackStatus::NullPointer => b"null pointer\0",
        FrackStatus::IndexOutOfRange => b"index out of range\0",
        FrackStatus::Panic => b"internal panic\0",
    };
    name.as_ptr().cast()
}

/// E^γ_{α,β}(z).
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_mittag_leffler(alpha: f64, beta: f64, gamma: f64, z: f64, out: *mut f64) -> FrackStatus {
    guard(|| {
        let v = lift(MLParams::new(alpha, beta, gamma).and_then(|p| mittag_leffler(p, z)))?;
        write(out, v, "out")
    })
}

/// Green's function of the space-time fractional diffusion equation, with
/// `c_pow_nu` the diffusion constant c^ν.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_green_function(nu: f64, c_pow_nu: f64, x: f64, t: f64, out: *mut f64) -> FrackStatus {
    guard(|| {
        let v = lift(DiffusionQuery::new(nu, c_pow_nu, x, t).and_then(|q| diffusion::green_function(&q)))?;
        write(out, v, "out")
    })
}

/// Spatial Fourier mode of the Green's function.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_fourier_mode(nu: f64, c_pow_nu: f64, k: f64, t: f64, out: *mut f64) -> FrackStatus {
    guard(|| write(out, lift(diffusion::fourier_mode(nu, c_pow_nu, k, t))?, "out"))
}

/// Kinetic problem with an analytic forcing family.
///
/// # Safety
/// `out` must be valid for a write; on success it receives a handle owned
/// by the caller.
#[no_mangle]
pub unsafe extern "C" fn frack_kinetic_new(
    nu: f64,
    c: f64,
    n0: f64,
    forcing: FrackForcing,
    p1: f64,
    p2: f64,
    out: *mut *mut FrackKinetic,
) -> FrackStatus {
    guard(|| {
        let forcing = match forcing {
            FrackForcing::Constant => ForcingTerm::Constant,
            FrackForcing::PowerLaw => ForcingTerm::PowerLaw { rho: p1 },
            FrackForcing::Prabhakar => ForcingTerm::PrabhakarML { mu: p1, gamma: p2 },
        };
        let problem = lift(KineticProblem::new(nu, c, n0, forcing))?;
        write(out, Box::into_raw(Box::new(FrackKinetic(problem))), "out")
    })
}

/// Kinetic problem with forcing sampled at `len` strictly increasing times.
///
/// # Safety
/// `t` and `f` must be valid for reads of `len` elements and `out` for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_kinetic_new_sampled(
    nu: f64,
    c: f64,
    n0: f64,
    t: *const f64,
    f: *const f64,
    len: usize,
    out: *mut *mut FrackKinetic,
) -> FrackStatus {
    guard(|| {
        let (t, f) = (slice(t, len, "t")?, slice(f, len, "f")?);
        let sampled = lift(SampledFunction::new(t.to_vec(), f.to_vec(), 0.0))?;
        let problem = lift(KineticProblem::new(nu, c, n0, ForcingTerm::Sampled(sampled)))?;
        write(out, Box::into_raw(Box::new(FrackKinetic(problem))), "out")
    })
}

/// # Safety
/// `problem` must be NULL or a handle from `frack_kinetic_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frack_kinetic_free(problem: *mut FrackKinetic) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Closed-form solution N(t). Sampled forcing has none and yields
/// `FRACK_STATUS_INVALID_PARAMETER`; use `frack_kinetic_solve` instead.
///
/// # Safety
/// `problem` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_kinetic_value(problem: *const FrackKinetic, t: f64, out: *mut f64) -> FrackStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        write(out, lift(kinetic::closed_form_value(&p.0, t))?, "out")
    })
}

/// Solution on a time grid, by the closed form or, when `use_oracle` is
/// nonzero, by the Volterra product-integration oracle (uniform grid from 0).
///
/// # Safety
/// `problem` must be a live handle, `t` valid for reads of `len` elements and
/// `out` valid for a write; on success `*out` is a table owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn frack_kinetic_solve(
    problem: *const FrackKinetic,
    t: *const f64,
    len: usize,
    use_oracle: i32,
    out: *mut *mut FrackTable,
) -> FrackStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        let grid = slice(t, len, "t")?;
        let table = lift(if use_oracle != 0 {
            kinetic::solve_oracle(&p.0, grid)
        } else {
            kinetic::solve_closed_form(&p.0, grid)
        })?;
        write(out, Box::into_raw(Box::new(FrackTable(table))), "out")
    })
}

/// Green's function profile over `len` positions at time `t`.
///
/// # Safety
/// `x` must be valid for reads of `len` elements and `out` for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_green_profile(
    nu: f64,
    c_pow_nu: f64,
    t: f64,
    x: *const f64,
    len: usize,
    out: *mut *mut FrackTable,
) -> FrackStatus {
    guard(|| {
        let xs = slice(x, len, "x")?;
        let values = lift(diffusion::green_profile(nu, c_pow_nu, t, xs))?;
        let mut table = SolutionTable::new(["x"]);
        for (&xi, v) in xs.iter().zip(values) {
            lift(table.push(vec![xi], v))?;
        }
        write(out, Box::into_raw(Box::new(FrackTable(table))), "out")
    })
}

/// # Safety
/// `table` must be NULL or a table handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frack_table_free(table: *mut FrackTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of rows.
///
/// # Safety
/// `table` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_table_len(table: *const FrackTable, out: *mut usize) -> FrackStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        write(out, t.0.len(), "out")
    })
}

/// Row `row`: its first coordinate and its value.
///
/// # Safety
/// `table` must be a live handle; `coordinate` and `value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frack_table_row(
    table: *const FrackTable,
    row: usize,
    coordinate: *mut f64,
    value: *mut f64,
) -> FrackStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let r = t.0.rows.get(row).ok_or_else(|| {
            (FrackStatus::IndexOutOfRange, format!("row {row} of a table with {} rows", t.0.len()))
        })?;
        write(coordinate, r.coordinates[0], "coordinate")?;
        write(value, r.value, "value")
    })
}

/// Table serialized as CSV with 17 significant digits, NUL-terminated.
/// Release with `frack_string_free`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn frack_table_to_csv(table: *const FrackTable, out: *mut *mut c_char) -> FrackStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let csv = CString::new(t.0.to_csv_string()).map_err(|e| (FrackStatus::Panic, e.to_string()))?;
        write(out, csv.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frack_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
