//! C ABI over `pvi_e6`.
//!
//! Every entry point returns a [`PviStatus`]; on failure a message is kept
//! per thread and can be fetched with [`pvi_last_error_message`]. Strings
//! returned by this library must be released with [`pvi_string_free`],
//! handles with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pvi_e6::backlund::{apply_word, BacklundOptions, TransformedState};
use pvi_e6::flow::{integrate, IntegratorConfig, Trajectory};
use pvi_e6::hamiltonian::{coupled_h, vector_field, PhasePoint};
use pvi_e6::io::{parse_state, StateJson};
use pvi_e6::verify::{run_claim, TrialConfig};
use pvi_e6::weyl::{cartan_matrix, ParameterVector, WeylWord, RANK};
use pvi_e6::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PviStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Singular = 4,
    Integrator = 5,
    ClaimFailed = 6,
    Panic = 7,
}

/// Phase point, independent variable and parameters in binary64.
pub struct PviState {
    inner: TransformedState<f64>,
}

pub struct PviTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PviStatus {
    match e {
        Error::Parse(_) => PviStatus::Parse,
        Error::SingularTransformation { .. } | Error::SingularIndependentVariable(_) => {
            PviStatus::Singular
        }
        Error::StepUnderflow { .. } | Error::MaxStepsExceeded(_) | Error::NonFinite(_) => {
            PviStatus::Integrator
        }
        _ => PviStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> PviStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

fn guard(f: impl FnOnce() -> PviStatus) -> PviStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            PviStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(format!("{} is null", stringify!($p)));
            return PviStatus::NullPointer;
        })+
    };
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, PviStatus> {
    // SAFETY: callers pass a valid NUL-terminated string.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|e| {
        set_error(format!("string is not UTF-8: {e}"));
        PviStatus::Parse
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or null. Free with
/// [`pvi_string_free`].
#[no_mangle]
pub extern "C" fn pvi_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pvi_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Writes the 7x7 generalized Cartan matrix row-major into `out`.
///
/// # Safety
/// `out` must point to 49 writable `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn pvi_cartan_matrix(out: *mut i64) -> PviStatus {
    non_null!(out);
    guard(|| {
        let a = cartan_matrix();
        for i in 0..RANK {
            for j in 0..RANK {
                // SAFETY: caller provides RANK * RANK slots.
                unsafe { *out.add(i * RANK + j) = a.entry(i, j) };
            }
        }
        PviStatus::Ok
    })
}

/// Creates a state from `q[3]`, `p[3]`, `s` and `alpha[7]`.
///
/// # Safety
/// Array arguments must point to the stated number of doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_state_new(
    q: *const f64,
    p: *const f64,
    s: f64,
    alpha: *const f64,
    out: *mut *mut PviState,
) -> PviStatus {
    non_null!(q, p, alpha, out);
    guard(|| {
        // SAFETY: lengths guaranteed by the caller.
        let (q, p, a) = unsafe {
            (
                std::slice::from_raw_parts(q, 3),
                std::slice::from_raw_parts(p, 3),
                std::slice::from_raw_parts(alpha, RANK),
            )
        };
        let inner = TransformedState::new(
            PhasePoint::new([q[0], q[1], q[2]], [p[0], p[1], p[2]], s),
            ParameterVector(std::array::from_fn(|k| a[k])),
        );
        // SAFETY: out checked non-null.
        unsafe { *out = Box::into_raw(Box::new(PviState { inner })) };
        PviStatus::Ok
    })
}

/// Parses `{"q": [...], "p": [...], "s": ..., "alpha": [...]}`; entries may be
/// numbers or `"num/den"` strings.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_state_from_json(
    json: *const c_char,
    out: *mut *mut PviState,
) -> PviStatus {
    non_null!(json, out);
    guard(|| {
        let text = match unsafe { read_str(json) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_state(text).and_then(|s| s.to_f64()) {
            Ok(inner) => {
                // SAFETY: out checked non-null.
                unsafe { *out = Box::into_raw(Box::new(PviState { inner })) };
                PviStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `state` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pvi_state_free(state: *mut PviState) {
    if !state.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Copies the state out. Any output pointer may be null to skip it.
///
/// # Safety
/// Non-null outputs must hold 3, 3, 1 and 7 doubles respectively.
#[no_mangle]
pub unsafe extern "C" fn pvi_state_get(
    state: *const PviState,
    q: *mut f64,
    p: *mut f64,
    s: *mut f64,
    alpha: *mut f64,
) -> PviStatus {
    non_null!(state);
    guard(|| {
        // SAFETY: state checked non-null; outputs sized by the caller.
        unsafe {
            let st = &(*state).inner;
            if !q.is_null() {
                ptr::copy_nonoverlapping(st.point.q.as_ptr(), q, 3);
            }
            if !p.is_null() {
                ptr::copy_nonoverlapping(st.point.p.as_ptr(), p, 3);
            }
            if !s.is_null() {
                *s = st.point.s;
            }
            if !alpha.is_null() {
                ptr::copy_nonoverlapping(st.params.0.as_ptr(), alpha, RANK);
            }
        }
        PviStatus::Ok
    })
}

/// JSON form of the state with numeric entries. Free with [`pvi_string_free`].
///
/// # Safety
/// `state` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_state_to_json(
    state: *const PviState,
    out: *mut *mut c_char,
) -> PviStatus {
    non_null!(state, out);
    guard(|| {
        let json = serde_json::to_string(&StateJson::from_f64(unsafe { &(*state).inner }))
            .expect("serializes");
        // SAFETY: out checked non-null.
        unsafe { *out = into_c_string(json) };
        PviStatus::Ok
    })
}

/// Applies a comma-separated word (e.g. `"r1,pi2"`) in place. On a singular
/// step the state is left unchanged and the message names the step.
///
/// # Safety
/// `state` must be a valid handle and `word` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pvi_state_apply_word(
    state: *mut PviState,
    word: *const c_char,
    threshold: f64,
) -> PviStatus {
    non_null!(state, word);
    guard(|| {
        let w: WeylWord = match unsafe { read_str(word) }.map(str::parse) {
            Ok(Ok(w)) => w,
            Ok(Err(e)) => return fail(e),
            Err(s) => return s,
        };
        // SAFETY: state checked non-null.
        let st = unsafe { &mut (*state).inner };
        match apply_word(&w, st, &BacklundOptions { threshold }) {
            Ok(next) => {
                *st = next;
                PviStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact-rational transform of a JSON state; the result uses `"num/den"`
/// strings. Free `out_json` with [`pvi_string_free`].
///
/// # Safety
/// `word` and `state_json` must be NUL-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_transform_exact_json(
    word: *const c_char,
    state_json: *const c_char,
    out_json: *mut *mut c_char,
) -> PviStatus {
    non_null!(word, state_json, out_json);
    guard(|| {
        let (w, text) = match unsafe { (read_str(word), read_str(state_json)) } {
            (Ok(w), Ok(t)) => (w, t),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let res = w.parse::<WeylWord>().and_then(|w| {
            let st = parse_state(text)?.to_exact()?;
            apply_word(&w, &st, &BacklundOptions::default())
        });
        match res {
            Ok(st) => {
                let json = serde_json::to_string(&StateJson::from_exact(&st)).expect("serializes");
                // SAFETY: out_json checked non-null.
                unsafe { *out_json = into_c_string(json) };
                PviStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Value of the coupled Hamiltonian at the state.
///
/// # Safety
/// `state` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_hamiltonian(state: *const PviState, out: *mut f64) -> PviStatus {
    non_null!(state, out);
    guard(|| {
        let st = unsafe { &(*state).inner };
        // SAFETY: out checked non-null.
        unsafe { *out = coupled_h(&st.point, &st.params) };
        PviStatus::Ok
    })
}

/// `d/ds` of `(q1, p1, q2, p2, q3, p3)`.
///
/// # Safety
/// `state` must be a valid handle; `out` must hold 6 doubles.
#[no_mangle]
pub unsafe extern "C" fn pvi_vector_field(state: *const PviState, out: *mut f64) -> PviStatus {
    non_null!(state, out);
    guard(|| {
        let st = unsafe { &(*state).inner };
        match vector_field(&st.point, &st.params) {
            Ok(v) => {
                // SAFETY: caller provides 6 slots.
                unsafe { ptr::copy_nonoverlapping(v.as_ptr(), out, 6) };
                PviStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Integrates from the state to `s_end`. `max_steps == 0` selects the default.
///
/// # Safety
/// `state` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_integrate(
    state: *const PviState,
    s_end: f64,
    rtol: f64,
    atol: f64,
    max_steps: usize,
    out: *mut *mut PviTrajectory,
) -> PviStatus {
    non_null!(state, out);
    guard(|| {
        let st = unsafe { &(*state).inner };
        let defaults = IntegratorConfig::default();
        let cfg = IntegratorConfig {
            rtol,
            atol,
            max_steps: if max_steps == 0 {
                defaults.max_steps
            } else {
                max_steps
            },
            ..defaults
        };
        match integrate(&st.point, &st.params, s_end, &cfg) {
            Ok(inner) => {
                // SAFETY: out checked non-null.
                unsafe { *out = Box::into_raw(Box::new(PviTrajectory { inner })) };
                PviStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `traj` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn pvi_trajectory_len(traj: *const PviTrajectory) -> usize {
    if traj.is_null() {
        0
    } else {
        unsafe { (*traj).inner.samples.len() }
    }
}

/// Copies sample `index` into `s` and `y[6]`.
///
/// # Safety
/// `traj` must be a valid handle; `s` and `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_trajectory_sample(
    traj: *const PviTrajectory,
    index: usize,
    s: *mut f64,
    y: *mut f64,
) -> PviStatus {
    non_null!(traj, s, y);
    guard(|| {
        let samples = unsafe { &(*traj).inner.samples };
        let Some(smp) = samples.get(index) else {
            set_error(format!(
                "sample index {index} out of range (len {})",
                samples.len()
            ));
            return PviStatus::InvalidArgument;
        };
        // SAFETY: outputs checked non-null; y holds 6 slots.
        unsafe {
            *s = smp.s;
            ptr::copy_nonoverlapping(smp.y.as_ptr(), y, 6);
        }
        PviStatus::Ok
    })
}

/// CSV text with header `s,q1,p1,q2,p2,q3,p3`. Free with [`pvi_string_free`].
///
/// # Safety
/// `traj` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_trajectory_to_csv(
    traj: *const PviTrajectory,
    out: *mut *mut c_char,
) -> PviStatus {
    non_null!(traj, out);
    guard(|| {
        let csv = unsafe { (*traj).inner.to_csv() };
        unsafe { *out = into_c_string(csv) };
        PviStatus::Ok
    })
}

/// # Safety
/// `traj` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pvi_trajectory_free(traj: *mut PviTrajectory) {
    if !traj.is_null() {
        drop(unsafe { Box::from_raw(traj) });
    }
}

/// Runs a verification claim with exact arithmetic. The JSON report is
/// written to `out_json` whenever the claim ran; the status is
/// `PVI_STATUS_CLAIM_FAILED` when it did not pass.
///
/// # Safety
/// `claim` must be NUL-terminated; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pvi_verify(
    claim: *const c_char,
    trials: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> PviStatus {
    non_null!(claim, out_json);
    guard(|| {
        let name = match unsafe { read_str(claim) } {
            Ok(n) => n,
            Err(s) => return s,
        };
        let cfg = TrialConfig {
            trials,
            seed,
            ..TrialConfig::default()
        };
        match cfg.validate().and_then(|_| run_claim(name, &cfg)) {
            Ok(report) => {
                unsafe { *out_json = into_c_string(report.to_json()) };
                if report.pass {
                    PviStatus::Ok
                } else {
                    set_error(format!("claim {name} failed"));
                    PviStatus::ClaimFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}
