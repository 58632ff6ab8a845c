//! C ABI for the coupler library.
//!
//! Every fallible call returns a [`CplStatus`]. On failure the message is kept
//! per thread and can be read with [`cpl_last_error_message`].
//! Handles ([`CplParams`], [`CplState`]) are opaque and must be released with
//! their `_free` function. Strings returned by the library are released with
//! [`cpl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use coupler::fock::{self, FockCutoffs, OperatorWord, StateVector};
use coupler::sweep::{csv_string, parse_config, run_sweep, SweepOptions};
use coupler::{analytic, evolution_coefficients, CoherentInput, CouplerParams, Error, Mode};

pub const CPL_MODE_A: u32 = 0;
pub const CPL_MODE_B1: u32 = 1;
pub const CPL_MODE_B2: u32 = 2;

/// Number of values written by [`cpl_tripartite`].
pub const CPL_TRIPARTITE_LEN: usize = 7;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CplStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidParams = 3,
    GuardBand = 4,
    InvalidOrder = 5,
    InvalidCutoffs = 6,
    CutoffTooTight = 7,
    StepTooCoarse = 8,
    WordTooLong = 9,
    Config = 10,
    Io = 11,
    Internal = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CplComplex {
    pub re: f64,
    pub im: f64,
}

impl From<CplComplex> for Complex64 {
    fn from(c: CplComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for CplComplex {
    fn from(c: Complex64) -> Self {
        CplComplex { re: c.re, im: c.im }
    }
}

/// Coherent amplitudes of the three input modes.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CplCoherentInput {
    pub alpha: CplComplex,
    pub beta: CplComplex,
    pub gamma: CplComplex,
}

impl From<&CplCoherentInput> for CoherentInput {
    fn from(c: &CplCoherentInput) -> Self {
        CoherentInput::new(c.alpha.into(), c.beta.into(), c.gamma.into())
    }
}

/// Evolution coefficients at length `z`; index `i` holds `f_{i+1}` and so on.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CplCoefficients {
    pub f: [CplComplex; 4],
    pub g: [CplComplex; 4],
    pub h: [CplComplex; 4],
    pub z: f64,
}

/// Opaque coupler parameters.
pub struct CplParams(CouplerParams);

/// Opaque truncated three-mode state.
pub struct CplState(StateVector);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> CplStatus {
    match err {
        Error::InvalidParams(_) => CplStatus::InvalidParams,
        Error::GuardBand { .. } => CplStatus::GuardBand,
        Error::InvalidOrder { .. } => CplStatus::InvalidOrder,
        Error::InvalidCutoffs(_) => CplStatus::InvalidCutoffs,
        Error::CutoffTooTight { .. } => CplStatus::CutoffTooTight,
        Error::StepTooCoarse { .. } => CplStatus::StepTooCoarse,
        Error::WordTooLong { .. } | Error::NotNormallyOrdered(_) => CplStatus::WordTooLong,
        Error::Config { .. } => CplStatus::Config,
        Error::Io(_) => CplStatus::Io,
        Error::AtPoint { source, .. } => status_of(source),
        _ => CplStatus::Internal,
    }
}

struct Fail(CplStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CplStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CplStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CplStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CplStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn mode(m: u32) -> Result<Mode, Fail> {
    match m {
        CPL_MODE_A => Ok(Mode::A),
        CPL_MODE_B1 => Ok(Mode::B1),
        CPL_MODE_B2 => Ok(Mode::B2),
        _ => Err(Fail(CplStatus::InvalidArgument, format!("unknown mode {m}"))),
    }
}

unsafe fn coefficients_at(params: *const CplParams, z: f64) -> Result<coupler::EvolutionCoefficients, Fail> {
    let p = deref(params, "params")?;
    Ok(evolution_coefficients(&p.0, z)?)
}

/// Message of the last failed call on this thread, or null.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cpl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpl_params_new(
    k: CplComplex,
    gamma_nl: CplComplex,
    delta_k: f64,
    out: *mut *mut CplParams,
) -> CplStatus {
    guard(|| {
        let p = CouplerParams::new(k.into(), gamma_nl.into(), delta_k)?;
        write(out, Box::into_raw(Box::new(CplParams(p))), "out")
    })
}

/// # Safety
/// `params` must come from [`cpl_params_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cpl_params_free(params: *mut CplParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// # Safety
/// `params` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpl_coefficients(
    params: *const CplParams,
    z: f64,
    out: *mut CplCoefficients,
) -> CplStatus {
    guard(|| {
        let co = coefficients_at(params, z)?;
        let c = CplCoefficients {
            f: [co.f1, co.f2, co.f3, co.f4].map(Into::into),
            g: [co.g1, co.g2, co.g3, co.g4].map(Into::into),
            h: [co.h1, co.h2, co.h3, co.h4].map(Into::into),
            z: co.z,
        };
        write(out, c, "out")
    })
}

/// Mean photon numbers of `a`, `b1`, `b2` at length `z`, written to `out[0..3]`.
///
/// # Safety
/// `params` must be a live handle, `input` readable and `out` valid for 3 writes.
#[no_mangle]
pub unsafe extern "C" fn cpl_mean_photon_numbers(
    params: *const CplParams,
    input: *const CplCoherentInput,
    z: f64,
    out: *mut f64,
) -> CplStatus {
    guard(|| {
        let co = coefficients_at(params, z)?;
        let input = deref(input, "input")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (na, nb1, nb2) = analytic::mean_photon_numbers(&co, &input.into());
        for (i, v) in [na, nb1, nb2].into_iter().enumerate() {
            out.add(i).write(v);
        }
        Ok(())
    })
}

/// Amplitude-squared squeezing of one mode.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpl_amp_sq(
    params: *const CplParams,
    input: *const CplCoherentInput,
    z: f64,
    mode_index: u32,
    out_y1: *mut f64,
    out_y2: *mut f64,
) -> CplStatus {
    guard(|| {
        let co = coefficients_at(params, z)?;
        let input = deref(input, "input")?;
        let (y1, y2) = analytic::amp_squared_squeezing(&co, &input.into(), mode(mode_index)?);
        write(out_y1, y1.value, "out_y1")?;
        write(out_y2, y2.value, "out_y2")
    })
}

/// Higher-order antibunching of order `n >= 2`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpl_hoa(
    params: *const CplParams,
    input: *const CplCoherentInput,
    z: f64,
    mode_index: u32,
    n: u32,
    out: *mut f64,
) -> CplStatus {
    guard(|| {
        let co = coefficients_at(params, z)?;
        let input = deref(input, "input")?;
        let w = analytic::hoa(&co, &input.into(), mode(mode_index)?, n)?;
        write(out, w.value, "out")
    })
}

/// HZ pair for modes `a` and `b1`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpl_hz(
    params: *const CplParams,
    input: *const CplCoherentInput,
    z: f64,
    m: u32,
    n: u32,
    out_e: *mut f64,
    out_e_prime: *mut f64,
) -> CplStatus {
    guard(|| {
        let co = coefficients_at(params, z)?;
        let input = deref(input, "input")?;
        let (e, ep) = analytic::hz_pair(&co, &input.into(), m, n)?;
        write(out_e, e.value, "out_e")?;
        write(out_e_prime, ep.value, "out_e_prime")
    })
}

/// Tripartite values: `E`, `E'` for the splits `b2|ab1`, `a|b1b2`, `b1|ab2`,
/// then the full-separability test. `out` holds [`CPL_TRIPARTITE_LEN`] values.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpl_tripartite(
    params: *const CplParams,
    input: *const CplCoherentInput,
    z: f64,
    out: *mut f64,
) -> CplStatus {
    guard(|| {
        let co = coefficients_at(params, z)?;
        let input = deref(input, "input")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let values = analytic::tripartite(&co, &input.into());
        for (i, w) in values.iter().take(CPL_TRIPARTITE_LEN).enumerate() {
            out.add(i).write(w.value);
        }
        Ok(())
    })
}

/// Coherent product state truncated at the given photon-number cutoffs.
///
/// # Safety
/// `input` must be readable and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpl_state_coherent(
    input: *const CplCoherentInput,
    n_a_max: usize,
    n_b1_max: usize,
    n_b2_max: usize,
    out: *mut *mut CplState,
) -> CplStatus {
    guard(|| {
        let input = deref(input, "input")?;
        let cut = FockCutoffs::new(n_a_max, n_b1_max, n_b2_max)?;
        let psi = fock::coherent_product_state(&input.into(), cut)?;
        write(out, Box::into_raw(Box::new(CplState(psi))), "out")
    })
}

/// Propagates the state in place over length `z`. `out_norm_drift` may be null.
///
/// # Safety
/// `state` and `params` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cpl_state_evolve(
    state: *mut CplState,
    params: *const CplParams,
    z: f64,
    out_norm_drift: *mut f64,
) -> CplStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let s = state.as_mut().ok_or_else(|| null("state"))?;
        let ev = fock::Integrator::new(p.0)
            .without_error_estimate()
            .evolve(&s.0, 0.0, z)?;
        s.0 = ev.state;
        if !out_norm_drift.is_null() {
            out_norm_drift.write(ev.norm_drift);
        }
        Ok(())
    })
}

/// Normally ordered moment `⟨a†^ca b1†^cb1 b2†^cb2 a^na b1^nb1 b2^nb2⟩`.
/// `create` and `annihilate` each point to three counts.
///
/// # Safety
/// `state` must be a live handle, `create` and `annihilate` readable for 3 values.
#[no_mangle]
pub unsafe extern "C" fn cpl_state_moment(
    state: *const CplState,
    create: *const u32,
    annihilate: *const u32,
    out: *mut CplComplex,
) -> CplStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if create.is_null() || annihilate.is_null() {
            return Err(null("counts"));
        }
        let mut w = OperatorWord::IDENTITY;
        for (i, m) in Mode::ALL.into_iter().enumerate() {
            w = w.create(m, *create.add(i)).annihilate(m, *annihilate.add(i));
        }
        let v = fock::moment(&s.0, &w)?;
        write(out, v.into(), "out")
    })
}

/// Hilbert-space dimension of the state, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cpl_state_dim(state: *const CplState) -> usize {
    state.as_ref().map_or(0, |s| s.0.cutoffs().dim())
}

/// # Safety
/// `state` must come from [`cpl_state_coherent`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cpl_state_free(state: *mut CplState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Runs a sweep described by config text and returns the CSV as a new string.
/// Output paths named in the config are ignored.
///
/// # Safety
/// `config` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cpl_sweep_csv(config: *const c_char, out: *mut *mut c_char) -> CplStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        let text = CStr::from_ptr(config)
            .to_str()
            .map_err(|e| Fail(CplStatus::InvalidArgument, format!("config is not UTF-8: {e}")))?;
        let cfg = parse_config(text)?;
        let result = run_sweep(&cfg, SweepOptions::default())?;
        let csv = CString::new(csv_string(&result)).map_err(|e| Fail(CplStatus::Internal, e.to_string()))?;
        write(out, csv.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cpl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
