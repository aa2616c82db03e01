//! C ABI over `sto-twocenter`.
//!
//! Every fallible function returns a [`StoStatus`] and writes its result
//! through an out pointer. On failure a message is kept per thread and can be
//! read with [`sto_last_error`]. Expansion tables are opaque handles owned by
//! the caller and released with [`sto_product_table_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use sto_twocenter::auxiliary::{aux_a, aux_b};
use sto_twocenter::error::Error;
use sto_twocenter::integrals::{analytic, IntegralKind, IntegralResult, IntegralSpec, Method, StoParams};
use sto_twocenter::legendre::{legendre_eval, legendre_oracle};
use sto_twocenter::oracle::{quad_integral, QuadratureConfig};
use sto_twocenter::product::{cached_expansion, eval_expansion, EllipsoidalPoint, ProductExpansionTable};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoStatus {
    Ok = 0,
    /// An argument is outside the domain of the requested quantity.
    DomainError = 1,
    /// Valid request the analytic path cannot serve (noninteger `n`).
    Unsupported = 2,
    /// Quadrature hit its refinement cap.
    NonConvergence = 3,
    NullPointer = 4,
    /// Output buffer too small.
    BufferTooSmall = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

pub const STO_KIND_OVERLAP: u32 = 0;
pub const STO_KIND_NUCLEAR_ATTRACTION_A: u32 = 1;
pub const STO_KIND_NUCLEAR_ATTRACTION_B: u32 = 2;

pub const STO_METHOD_ANALYTIC: u32 = 0;
pub const STO_METHOD_QUADRATURE: u32 = 1;

/// One Slater-type orbital. `n` may be noninteger on the quadrature path.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct StoOrbital {
    pub n: f64,
    pub l: u32,
    pub lambda: u32,
    pub zeta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct StoIntegralResult {
    pub value: f64,
    pub est_error: f64,
    /// `STO_METHOD_ANALYTIC` or `STO_METHOD_QUADRATURE`.
    pub method: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct StoProductTerm {
    pub k: u32,
    pub kp: u32,
    pub u: u32,
    pub s: u32,
    /// Nearest binary64 value of the exact coefficient.
    pub coeff: f64,
    pub pow_plus: i32,
    pub pow_minus: u32,
}

/// Opaque expansion table.
pub struct StoProductTable {
    inner: Arc<ProductExpansionTable>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: StoStatus, msg: impl Into<String>) -> StoStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> StoStatus {
    let status = match e {
        Error::Domain(_) => StoStatus::DomainError,
        Error::Unsupported(_) => StoStatus::Unsupported,
        Error::NonConvergence { .. } => StoStatus::NonConvergence,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> StoStatus) -> StoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(StoStatus::Internal, format!("internal error: {msg}"))
        }
    }
}

/// Message for the most recent failure on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sto_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sto_status_str(status: StoStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        StoStatus::Ok => b"ok\0",
        StoStatus::DomainError => b"domain error\0",
        StoStatus::Unsupported => b"unsupported on the analytic path\0",
        StoStatus::NonConvergence => b"quadrature did not converge\0",
        StoStatus::NullPointer => b"null pointer argument\0",
        StoStatus::BufferTooSmall => b"output buffer too small\0",
        StoStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// `P̄_lm(x)` from the closed form.
///
/// # Safety
/// `out` must be NULL or valid for one `double` write.
#[no_mangle]
pub unsafe extern "C" fn sto_legendre(l: u32, m: u32, x: f64, out: *mut f64) -> StoStatus {
    write_f64(out, || legendre_eval(l, m, x))
}

/// `P̄_lm(x)` from the three-term recurrence.
///
/// # Safety
/// `out` must be NULL or valid for one `double` write.
#[no_mangle]
pub unsafe extern "C" fn sto_legendre_recurrence(l: u32, m: u32, x: f64, out: *mut f64) -> StoStatus {
    write_f64(out, || legendre_oracle(l, m, x))
}

unsafe fn write_f64(out: *mut f64, f: impl FnOnce() -> sto_twocenter::error::Result<f64>) -> StoStatus {
    if out.is_null() {
        return fail(StoStatus::NullPointer, "out is NULL");
    }
    guard(|| match f() {
        Ok(v) => {
            // SAFETY: checked non-null; caller guarantees validity.
            unsafe { *out = v };
            StoStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Builds (or fetches from the shared cache) the table for `(l, λ, l')`.
///
/// # Safety
/// `out` must be NULL or valid for one pointer write. The handle written
/// there must be released with `sto_product_table_free`.
#[no_mangle]
pub unsafe extern "C" fn sto_product_table_new(
    l: u32,
    lambda: u32,
    lp: u32,
    out: *mut *mut StoProductTable,
) -> StoStatus {
    if out.is_null() {
        return fail(StoStatus::NullPointer, "out is NULL");
    }
    guard(|| match cached_expansion(l, lambda, lp) {
        Ok(inner) => {
            let handle = Box::into_raw(Box::new(StoProductTable { inner }));
            // SAFETY: checked non-null.
            unsafe { *out = handle };
            StoStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Releases a table. NULL is ignored.
///
/// # Safety
/// `table` must be NULL or a handle from `sto_product_table_new` that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn sto_product_table_free(table: *mut StoProductTable) {
    if !table.is_null() {
        // SAFETY: caller passes a live handle created by Box::into_raw.
        drop(unsafe { Box::from_raw(table) });
    }
}

/// Number of terms; 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sto_product_table_len(table: *const StoProductTable) -> usize {
    // SAFETY: caller guarantees a live handle when non-null.
    unsafe { table.as_ref() }.map_or(0, |t| t.inner.len())
}

/// Copies term `index` into `out`.
///
/// # Safety
/// `table` must be NULL or a live handle; `out` NULL or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sto_product_table_term(
    table: *const StoProductTable,
    index: usize,
    out: *mut StoProductTerm,
) -> StoStatus {
    // SAFETY: caller guarantees a live handle when non-null.
    let Some(t) = (unsafe { table.as_ref() }) else {
        return fail(StoStatus::NullPointer, "table is NULL");
    };
    if out.is_null() {
        return fail(StoStatus::NullPointer, "out is NULL");
    }
    let Some(term) = t.inner.terms().get(index) else {
        return fail(
            StoStatus::DomainError,
            format!("term index {index} out of range (len {})", t.inner.len()),
        );
    };
    // SAFETY: checked non-null.
    unsafe {
        *out = StoProductTerm {
            k: term.k,
            kp: term.kp,
            u: term.u,
            s: term.s,
            coeff: term.coeff_f64,
            pow_plus: term.pow_plus,
            pow_minus: term.pow_minus,
        }
    };
    StoStatus::Ok
}

/// Sums the expansion at `(mu, nu)`, `mu > 1`, `|nu| < 1`.
///
/// # Safety
/// `table` must be NULL or a live handle; `out` NULL or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sto_product_table_eval(
    table: *const StoProductTable,
    mu: f64,
    nu: f64,
    out: *mut f64,
) -> StoStatus {
    // SAFETY: caller guarantees a live handle when non-null.
    let Some(t) = (unsafe { table.as_ref() }) else {
        return fail(StoStatus::NullPointer, "table is NULL");
    };
    // SAFETY: forwarded caller guarantee on `out`.
    unsafe { write_f64(out, || Ok(eval_expansion(&t.inner, &EllipsoidalPoint::new(mu, nu)?))) }
}

fn integral_spec(a: &StoOrbital, b: &StoOrbital, r: f64, kind: u32) -> Result<IntegralSpec, StoStatus> {
    let kind = match kind {
        STO_KIND_OVERLAP => IntegralKind::Overlap,
        STO_KIND_NUCLEAR_ATTRACTION_A => IntegralKind::NuclearAttractionA,
        STO_KIND_NUCLEAR_ATTRACTION_B => IntegralKind::NuclearAttractionB,
        other => return Err(fail(StoStatus::DomainError, format!("unknown integral kind {other}"))),
    };
    let a = StoParams::new(a.n, a.l, a.lambda, a.zeta).map_err(from_error)?;
    let b = StoParams::new(b.n, b.l, b.lambda, b.zeta).map_err(from_error)?;
    IntegralSpec::new(a, b, r, kind).map_err(from_error)
}

unsafe fn integral_with(
    a: *const StoOrbital,
    b: *const StoOrbital,
    r: f64,
    kind: u32,
    out: *mut StoIntegralResult,
    eval: impl FnOnce(&IntegralSpec) -> sto_twocenter::error::Result<IntegralResult>,
) -> StoStatus {
    // SAFETY: caller guarantees validity when non-null.
    let (Some(a), Some(b)) = (unsafe { a.as_ref() }, unsafe { b.as_ref() }) else {
        return fail(StoStatus::NullPointer, "orbital is NULL");
    };
    if out.is_null() {
        return fail(StoStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let spec = match integral_spec(a, b, r, kind) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match eval(&spec) {
            Ok(res) => {
                let method = match res.method {
                    Method::Analytic => STO_METHOD_ANALYTIC,
                    Method::Quadrature => STO_METHOD_QUADRATURE,
                };
                // SAFETY: checked non-null.
                unsafe {
                    *out = StoIntegralResult {
                        value: res.value,
                        est_error: res.est_error,
                        method,
                    }
                };
                StoStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Analytic overlap or nuclear-attraction integral; `kind` is one of the
/// `STO_KIND_*` constants. Noninteger `n` gives `Unsupported`.
///
/// # Safety
/// `a`, `b` must be NULL or point to valid orbitals; `out` NULL or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sto_integral(
    a: *const StoOrbital,
    b: *const StoOrbital,
    r: f64,
    kind: u32,
    out: *mut StoIntegralResult,
) -> StoStatus {
    // SAFETY: forwarded caller guarantees.
    unsafe { integral_with(a, b, r, kind, out, analytic) }
}

/// The same integral by direct quadrature with default settings; accepts
/// noninteger `n`.
///
/// # Safety
/// As `sto_integral`.
#[no_mangle]
pub unsafe extern "C" fn sto_integral_quadrature(
    a: *const StoOrbital,
    b: *const StoOrbital,
    r: f64,
    kind: u32,
    out: *mut StoIntegralResult,
) -> StoStatus {
    // SAFETY: forwarded caller guarantees.
    unsafe { integral_with(a, b, r, kind, out, |s| quad_integral(s, &QuadratureConfig::default())) }
}

unsafe fn write_array(out: *mut f64, len: usize, values: sto_twocenter::error::Result<Vec<f64>>) -> StoStatus {
    if out.is_null() {
        return fail(StoStatus::NullPointer, "out is NULL");
    }
    match values {
        Ok(v) if v.len() > len => fail(
            StoStatus::BufferTooSmall,
            format!("need {} values, buffer holds {len}", v.len()),
        ),
        Ok(v) => {
            // SAFETY: caller guarantees `len` writable doubles at `out`.
            unsafe { ptr::copy_nonoverlapping(v.as_ptr(), out, v.len()) };
            StoStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Writes `A_0(p) ..= A_N(p)` into `out[0..=max_order]`.
///
/// # Safety
/// `out` must be NULL or valid for `len` double writes.
#[no_mangle]
pub unsafe extern "C" fn sto_aux_a(max_order: usize, p: f64, out: *mut f64, len: usize) -> StoStatus {
    // SAFETY: forwarded caller guarantee.
    guard(|| unsafe { write_array(out, len, aux_a(max_order, p)) })
}

/// Writes `B_0(q) ..= B_N(q)` into `out[0..=max_order]`.
///
/// # Safety
/// `out` must be NULL or valid for `len` double writes.
#[no_mangle]
pub unsafe extern "C" fn sto_aux_b(max_order: usize, q: f64, out: *mut f64, len: usize) -> StoStatus {
    // SAFETY: forwarded caller guarantee.
    guard(|| unsafe { write_array(out, len, Ok(aux_b(max_order, q))) })
}
