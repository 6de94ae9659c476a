//! C ABI for the `bcn-duality` library.
//!
//! Every entry point returns a [`BcnStatus`]; results are written through
//! caller-provided out-pointers. Model parameters, admissible triples and
//! trajectories are exposed as opaque heap handles which must be released
//! with the matching `*_free` function. After a non-`BCN_OK` status the
//! message of the failure can be fetched with [`bcn_last_error_message`]
//! (per thread).
//!
//! Complex vectors cross the boundary as two parallel `double` arrays
//! (real parts, imaginary parts) of length `n`.

// FFI functions perform null checks before dereferencing raw pointers.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::os::raw::c_int;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use bcn_duality::flows::{integrate_many_body, FlowKind, Trajectory};
use bcn_duality::hamiltonians::{h_hat_main, h_main};
use bcn_duality::reconstruct::hat_actions_from_zeta;
use bcn_duality::triples::{triple_from_zeta, verify_admissible, zeta_from_triple, Triple};
use bcn_duality::{Error, Params};
use num_complex::Complex64;

/// Status code returned by every function of the C API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcnStatus {
    /// Success.
    BcnOk = 0,
    /// A required pointer argument was null.
    BcnNullPointer = 1,
    /// An argument has the wrong length or an unsupported value.
    BcnInvalidArgument = 2,
    /// Model parameters violate an invariant.
    BcnInvalidParameters = 3,
    /// The input lies outside the domain of the operation.
    BcnDomainError = 4,
    /// A numerical procedure failed (singular matrix, no convergence, ...).
    BcnNumericalError = 5,
    /// An internal panic was caught at the boundary.
    BcnPanic = 6,
}

/// Which Hamiltonian drives [`bcn_flow_integrate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcnFlowKind {
    /// The hyperbolic many-body Hamiltonian on `(λ, θ)`.
    BcnFlowH = 0,
    /// The dual Hamiltonian on `(λ̂, θ̂)`.
    BcnFlowHhat = 1,
    /// `Σ cosh(2jλ_l)` on `(λ, θ)`; uses the `j` argument.
    BcnFlowActionM = 2,
    /// `Σ P_j(e^{λ̂_a})` on `(λ̂, θ̂)`; uses the `j` argument.
    BcnFlowActionHat = 3,
}

/// Opaque model parameters `(n, μ, u, v)`.
pub struct BcnParams {
    inner: Params,
}

/// Opaque admissible triple.
pub struct BcnTriple {
    inner: Triple,
}

/// Opaque sampled chart trajectory.
pub struct BcnTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BcnStatus {
    match e {
        Error::InvalidParameters(_) => BcnStatus::BcnInvalidParameters,
        Error::Domain(_)
        | Error::AngleUndefined(_)
        | Error::SectionUnavailable(_)
        | Error::PhaseUndefined(_)
        | Error::BoundaryPoint(_) => BcnStatus::BcnDomainError,
        _ => BcnStatus::BcnNumericalError,
    }
}

fn fail(status: BcnStatus, msg: impl Into<String>) -> BcnStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> BcnStatus {
    let s = status_of(&e);
    fail(s, e.to_string())
}

/// Run `f`, converting a panic into [`BcnStatus::BcnPanic`].
fn guard<F: FnOnce() -> BcnStatus>(f: F) -> BcnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(BcnStatus::BcnPanic, "internal panic"),
    }
}

/// Borrow a `double` array, rejecting null pointers (an empty array may be null).
unsafe fn reals<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], BcnStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(fail(BcnStatus::BcnNullPointer, format!("{what} is null")));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn reals_mut<'a>(ptr: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], BcnStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(fail(BcnStatus::BcnNullPointer, format!("{what} is null")));
    }
    Ok(slice::from_raw_parts_mut(ptr, len))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, BcnStatus> {
    ptr.as_ref().ok_or_else(|| fail(BcnStatus::BcnNullPointer, format!("{what} is null")))
}

fn check_len(len: usize, n: usize, what: &str) -> Result<(), BcnStatus> {
    if len == n {
        Ok(())
    } else {
        Err(fail(BcnStatus::BcnInvalidArgument, format!("{what} has length {len}, expected {n}")))
    }
}

unsafe fn complex_vec(re: *const f64, im: *const f64, len: usize) -> Result<Vec<Complex64>, BcnStatus> {
    let re = reals(re, len, "real parts")?;
    let im = reals(im, len, "imaginary parts")?;
    Ok(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! core {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bcn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len` bytes). Returns the length of the full message
/// without the terminator, or 0 if there is none.
#[no_mangle]
pub unsafe extern "C" fn bcn_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, k);
            *buf.add(k) = 0;
        }
        bytes.len()
    })
}

/// Create a parameter handle; fails with `BCN_INVALID_PARAMETERS` unless
/// `n ≥ 1`, `μ > 0` and `|u| ≠ |v|`.
#[no_mangle]
pub unsafe extern "C" fn bcn_params_new(n: usize, mu: f64, u: f64, v: f64, out: *mut *mut BcnParams) -> BcnStatus {
    guard(|| {
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        let p = core!(Params::new(n, mu, u, v));
        *out = Box::into_raw(Box::new(BcnParams { inner: p }));
        BcnStatus::BcnOk
    })
}

/// Release a parameter handle (null is ignored).
#[no_mangle]
pub unsafe extern "C" fn bcn_params_free(params: *mut BcnParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Particle number of a parameter handle (0 for null).
#[no_mangle]
pub unsafe extern "C" fn bcn_params_n(params: *const BcnParams) -> usize {
    params.as_ref().map_or(0, |p| p.inner.n)
}

/// Build the admissible triple of the global coordinates `ζ ∈ ℂⁿ`.
#[no_mangle]
pub unsafe extern "C" fn bcn_triple_from_zeta(
    params: *const BcnParams,
    zeta_re: *const f64,
    zeta_im: *const f64,
    len: usize,
    out: *mut *mut BcnTriple,
) -> BcnStatus {
    guard(|| {
        let p = &tri!(handle(params, "params")).inner;
        tri!(check_len(len, p.n, "zeta"));
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        let z = tri!(complex_vec(zeta_re, zeta_im, len));
        let t = core!(triple_from_zeta(&z, p));
        *out = Box::into_raw(Box::new(BcnTriple { inner: t }));
        BcnStatus::BcnOk
    })
}

/// Release a triple handle (null is ignored).
#[no_mangle]
pub unsafe extern "C" fn bcn_triple_free(triple: *mut BcnTriple) {
    if !triple.is_null() {
        drop(Box::from_raw(triple));
    }
}

/// Copy the positions `λ` of a triple into `out[0..len]`; `len` must equal `n`.
#[no_mangle]
pub unsafe extern "C" fn bcn_triple_lambda(triple: *const BcnTriple, out: *mut f64, len: usize) -> BcnStatus {
    guard(|| {
        let t = &tri!(handle(triple, "triple")).inner;
        tri!(check_len(len, t.lambda.len(), "out"));
        tri!(reals_mut(out, len, "out")).copy_from_slice(&t.lambda);
        BcnStatus::BcnOk
    })
}

/// Largest admissibility residual of a triple.
#[no_mangle]
pub unsafe extern "C" fn bcn_triple_residual(
    triple: *const BcnTriple,
    params: *const BcnParams,
    out: *mut f64,
) -> BcnStatus {
    guard(|| {
        let t = &tri!(handle(triple, "triple")).inner;
        let p = &tri!(handle(params, "params")).inner;
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        *out = verify_admissible(t, p).max();
        BcnStatus::BcnOk
    })
}

/// Recover the global coordinates `ζ` of a triple (gauge-fixed normal form).
#[no_mangle]
pub unsafe extern "C" fn bcn_triple_zeta(
    triple: *const BcnTriple,
    params: *const BcnParams,
    zeta_re: *mut f64,
    zeta_im: *mut f64,
    len: usize,
) -> BcnStatus {
    guard(|| {
        let t = &tri!(handle(triple, "triple")).inner;
        let p = &tri!(handle(params, "params")).inner;
        tri!(check_len(len, p.n, "zeta"));
        let z = core!(zeta_from_triple(t, p));
        let re = tri!(reals_mut(zeta_re, len, "zeta_re"));
        let im = tri!(reals_mut(zeta_im, len, "zeta_im"));
        for (k, c) in z.iter().enumerate() {
            re[k] = c.re;
            im[k] = c.im;
        }
        BcnStatus::BcnOk
    })
}

/// Dual actions `λ̂` (descending) of the point with coordinates `ζ`.
#[no_mangle]
pub unsafe extern "C" fn bcn_hat_actions(
    params: *const BcnParams,
    zeta_re: *const f64,
    zeta_im: *const f64,
    len: usize,
    out: *mut f64,
) -> BcnStatus {
    guard(|| {
        let p = &tri!(handle(params, "params")).inner;
        tri!(check_len(len, p.n, "zeta"));
        let z = tri!(complex_vec(zeta_re, zeta_im, len));
        let out = tri!(reals_mut(out, len, "out"));
        let hat = core!(hat_actions_from_zeta(&z, p));
        out.copy_from_slice(&hat.hat_lambda);
        BcnStatus::BcnOk
    })
}

/// The many-body Hamiltonian `H(λ, θ)`.
#[no_mangle]
pub unsafe extern "C" fn bcn_h_main(
    params: *const BcnParams,
    lambda: *const f64,
    theta: *const f64,
    len: usize,
    out: *mut f64,
) -> BcnStatus {
    guard(|| {
        let p = &tri!(handle(params, "params")).inner;
        tri!(check_len(len, p.n, "lambda"));
        let (l, t) = (tri!(reals(lambda, len, "lambda")), tri!(reals(theta, len, "theta")));
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        *out = core!(h_main(l, t, p));
        BcnStatus::BcnOk
    })
}

/// The dual Hamiltonian `Ĥ(λ̂, θ̂)`.
#[no_mangle]
pub unsafe extern "C" fn bcn_h_hat_main(
    params: *const BcnParams,
    hat_lambda: *const f64,
    theta_hat: *const f64,
    len: usize,
    out: *mut f64,
) -> BcnStatus {
    guard(|| {
        let p = &tri!(handle(params, "params")).inner;
        tri!(check_len(len, p.n, "hat_lambda"));
        let (l, t) = (tri!(reals(hat_lambda, len, "hat_lambda")), tri!(reals(theta_hat, len, "theta_hat")));
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        *out = core!(h_hat_main(l, t, p));
        BcnStatus::BcnOk
    })
}

/// Integrate a chart flow from `(pos, ang)` up to `t_end` with step `dt`.
/// A trajectory that reaches the chart boundary stops there; see
/// [`bcn_trajectory_boundary_time`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn bcn_flow_integrate(
    params: *const BcnParams,
    kind: BcnFlowKind,
    j: c_int,
    pos: *const f64,
    ang: *const f64,
    len: usize,
    t_end: f64,
    dt: f64,
    out: *mut *mut BcnTrajectory,
) -> BcnStatus {
    guard(|| {
        let p = &tri!(handle(params, "params")).inner;
        tri!(check_len(len, p.n, "pos"));
        let (x, y) = (tri!(reals(pos, len, "pos")), tri!(reals(ang, len, "ang")));
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        let needs_j = matches!(kind, BcnFlowKind::BcnFlowActionM | BcnFlowKind::BcnFlowActionHat);
        if needs_j && !(1..=p.n as c_int).contains(&j) {
            return fail(BcnStatus::BcnInvalidArgument, format!("j = {j} outside 1..={}", p.n));
        }
        let kind = match kind {
            BcnFlowKind::BcnFlowH => FlowKind::H,
            BcnFlowKind::BcnFlowHhat => FlowKind::Hhat,
            BcnFlowKind::BcnFlowActionM => FlowKind::ActionM(j as usize),
            BcnFlowKind::BcnFlowActionHat => FlowKind::ActionHat(j as usize),
        };
        let tr = core!(integrate_many_body(kind, (x, y), t_end, dt, p));
        *out = Box::into_raw(Box::new(BcnTrajectory { inner: tr }));
        BcnStatus::BcnOk
    })
}

/// Release a trajectory handle (null is ignored).
#[no_mangle]
pub unsafe extern "C" fn bcn_trajectory_free(traj: *mut BcnTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of samples of a trajectory (0 for null).
#[no_mangle]
pub unsafe extern "C" fn bcn_trajectory_len(traj: *const BcnTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.times.len())
}

/// Read sample `index`: time, energy and the `len = n` positions and angles.
/// Any of the out-pointers may be null to skip that field.
#[no_mangle]
pub unsafe extern "C" fn bcn_trajectory_sample(
    traj: *const BcnTrajectory,
    index: usize,
    time: *mut f64,
    energy: *mut f64,
    pos: *mut f64,
    ang: *mut f64,
    len: usize,
) -> BcnStatus {
    guard(|| {
        let t = &tri!(handle(traj, "trajectory")).inner;
        if index >= t.times.len() {
            return fail(BcnStatus::BcnInvalidArgument, format!("index {index} out of range ({})", t.times.len()));
        }
        if let Some(o) = time.as_mut() {
            *o = t.times[index];
        }
        if let Some(o) = energy.as_mut() {
            *o = t.energy[index];
        }
        for (dst, src) in [(pos, &t.positions[index]), (ang, &t.angles[index])] {
            if !dst.is_null() {
                tri!(check_len(len, src.len(), "sample buffer"));
                slice::from_raw_parts_mut(dst, len).copy_from_slice(src);
            }
        }
        BcnStatus::BcnOk
    })
}

/// Least-squares slope of the relative energy error against time.
#[no_mangle]
pub unsafe extern "C" fn bcn_trajectory_energy_drift(traj: *const BcnTrajectory, out: *mut f64) -> BcnStatus {
    guard(|| {
        let t = &tri!(handle(traj, "trajectory")).inner;
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        *out = t.summary().energy_drift_per_time;
        BcnStatus::BcnOk
    })
}

/// Time at which the trajectory reached the chart boundary; writes `-1` when
/// it stayed inside the chart.
#[no_mangle]
pub unsafe extern "C" fn bcn_trajectory_boundary_time(traj: *const BcnTrajectory, out: *mut f64) -> BcnStatus {
    guard(|| {
        let t = &tri!(handle(traj, "trajectory")).inner;
        if out.is_null() {
            return fail(BcnStatus::BcnNullPointer, "out is null");
        }
        *out = t.boundary_event.map_or(-1.0, |e| e.time);
        BcnStatus::BcnOk
    })
}
