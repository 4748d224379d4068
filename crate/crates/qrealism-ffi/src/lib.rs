//! C ABI over the qrealism library.
//!
//! Conventions: every function returns a [`QrStatus`] code and writes its
//! results through out-pointers; handles are opaque and must be released
//! with [`qr_state_free`]. No function panics across the boundary. The
//! header `include/qrealism.h` is generated by cbindgen at build time.

use qrealism::interferometer::{
    detection_probability, realism_inside, stage_state, visibility, CircuitKind, CircuitParams,
    Stage, WaveParticleBasis,
};
use qrealism::pulse::{compile, equivalent_up_to_phase, parse_sequence, SequenceParams};
use qrealism::qmath::von_neumann_entropy;
use qrealism::realism::realism_of;
use qrealism::tomography::{monte_carlo_realism, NoiseModel};
use qrealism::DensityOperator;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or otherwise invalid.
    InvalidArgument = 2,
    /// A pulse-sequence file failed to parse.
    ParseError = 3,
    /// A string argument was not valid UTF-8.
    Utf8Error = 4,
    /// Unexpected internal failure.
    Internal = 5,
}

/// Which interferometer circuit to simulate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrCircuit {
    /// Quantum delayed-choice arrangement (controlled final device).
    Qdce = 0,
    /// Quantum-controlled reality arrangement (controlled first device).
    Qcre = 1,
}

impl From<QrCircuit> for CircuitKind {
    fn from(value: QrCircuit) -> Self {
        match value {
            QrCircuit::Qdce => CircuitKind::Qdce,
            QrCircuit::Qcre => CircuitKind::Qcre,
        }
    }
}

/// Circuit stage selector for state constructors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStage {
    Input = 0,
    Inside = 1,
    Output = 2,
}

impl From<QrStage> for Stage {
    fn from(value: QrStage) -> Self {
        match value {
            QrStage::Input => Stage::Input,
            QrStage::Inside => Stage::Inside,
            QrStage::Output => Stage::Output,
        }
    }
}

/// Opaque handle to a density operator.
pub struct QrState {
    inner: DensityOperator,
}

/// Realism quantifiers of one circuit point (all in bits except visibility).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrRealismReport {
    pub wave_realism: f64,
    pub particle_realism: f64,
    pub visibility: f64,
    pub bound_rhs: f64,
    pub discord: f64,
    pub mutual_information: f64,
}

/// Mean and standard deviation of one Monte Carlo quantity.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrStatistic {
    pub mean: f64,
    pub std: f64,
}

/// Monte Carlo error report for one circuit point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrMonteCarlo {
    pub wave_realism: QrStatistic,
    pub particle_realism: QrStatistic,
    pub visibility: QrStatistic,
    pub detection_probability: QrStatistic,
    pub samples: usize,
}

/// Result of checking a pulse sequence against an ideal circuit unitary.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrPulseCheck {
    pub equal: bool,
    pub phase: f64,
    pub max_deviation: f64,
    pub duration_seconds: f64,
    pub rotation_count: usize,
}

fn status_of(error: &qrealism::Error) -> QrStatus {
    match error {
        qrealism::Error::SequenceParse { .. } => QrStatus::ParseError,
        _ => QrStatus::InvalidArgument,
    }
}

/// Runs a closure, translating panics into `QrStatus::Internal`.
fn guarded(body: impl FnOnce() -> QrStatus) -> QrStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(QrStatus::Internal)
}

fn make_params(alpha: f64, theta: f64) -> Result<CircuitParams, QrStatus> {
    CircuitParams::new(alpha, theta).map_err(|e| status_of(&e))
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static human-readable description of a status code.
#[no_mangle]
pub extern "C" fn qr_status_message(status: QrStatus) -> *const c_char {
    let message: &'static str = match status {
        QrStatus::Ok => "ok\0",
        QrStatus::NullPointer => "required pointer argument was null\0",
        QrStatus::InvalidArgument => "argument out of range or invalid\0",
        QrStatus::ParseError => "pulse sequence failed to parse\0",
        QrStatus::Utf8Error => "string argument was not valid UTF-8\0",
        QrStatus::Internal => "internal error\0",
    };
    message.as_ptr() as *const c_char
}

/// Builds the joint (path, controller) state of a circuit at a stage.
/// On success writes a heap-allocated handle to `out`; release it with
/// [`qr_state_free`].
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_stage_state_new(
    circuit: QrCircuit,
    stage: QrStage,
    alpha: f64,
    theta: f64,
    out: *mut *mut QrState,
) -> QrStatus {
    if out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        let params = match make_params(alpha, theta) {
            Ok(params) => params,
            Err(status) => return status,
        };
        let state = stage_state(circuit.into(), params, stage.into());
        let handle = Box::new(QrState { inner: state.state });
        unsafe { *out = Box::into_raw(handle) };
        QrStatus::Ok
    })
}

/// Releases a handle returned by a constructor. Null is ignored.
///
/// # Safety
/// `state` must be null or a pointer previously returned by this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_state_free(state: *mut QrState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Hilbert-space dimension of the handle's state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_state_dim(state: *const QrState, out: *mut usize) -> QrStatus {
    if state.is_null() || out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        unsafe { *out = (*state).inner.dim() };
        QrStatus::Ok
    })
}

/// Von Neumann entropy of the handle's state, in bits.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_state_entropy(state: *const QrState, out: *mut f64) -> QrStatus {
    if state.is_null() || out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        unsafe { *out = von_neumann_entropy(&(*state).inner) };
        QrStatus::Ok
    })
}

/// Purity Tr(rho^2) of the handle's state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_state_purity(state: *const QrState, out: *mut f64) -> QrStatus {
    if state.is_null() || out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        unsafe { *out = (*state).inner.purity() };
        QrStatus::Ok
    })
}

/// One matrix element of the handle's state, split into real and imaginary
/// parts.
///
/// # Safety
/// `state` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_state_element(
    state: *const QrState,
    row: usize,
    col: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QrStatus {
    if state.is_null() || out_re.is_null() || out_im.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        let inner = unsafe { &(*state).inner };
        if row >= inner.dim() || col >= inner.dim() {
            return QrStatus::InvalidArgument;
        }
        let value = inner.matrix()[(row, col)];
        unsafe {
            *out_re = value.re;
            *out_im = value.im;
        }
        QrStatus::Ok
    })
}

/// Wave and particle realism of the path qubit of a handle's state, using
/// the theta-matched wave/particle bases. The state must carry the
/// (path, ctrl) factor layout produced by [`qr_stage_state_new`].
///
/// # Safety
/// `state` must be a live handle; `out_wave` and `out_particle` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qr_state_path_realism(
    state: *const QrState,
    theta: f64,
    out_wave: *mut f64,
    out_particle: *mut f64,
) -> QrStatus {
    if state.is_null() || out_wave.is_null() || out_particle.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        let inner = unsafe { &(*state).inner };
        let basis = WaveParticleBasis::new(theta);
        let wave = match realism_of(inner, &basis.wave) {
            Ok(value) => value,
            Err(error) => return status_of(&error),
        };
        let particle = match realism_of(inner, &basis.particle) {
            Ok(value) => value,
            Err(error) => return status_of(&error),
        };
        unsafe {
            *out_wave = wave;
            *out_particle = particle;
        }
        QrStatus::Ok
    })
}

/// Full realism report of the inside stage at (alpha, theta).
///
/// # Safety
/// `out` must be a valid pointer to a writable [`QrRealismReport`].
#[no_mangle]
pub unsafe extern "C" fn qr_realism_inside(
    circuit: QrCircuit,
    alpha: f64,
    theta: f64,
    out: *mut QrRealismReport,
) -> QrStatus {
    if out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        let params = match make_params(alpha, theta) {
            Ok(params) => params,
            Err(status) => return status,
        };
        match realism_inside(circuit.into(), params) {
            Ok(report) => {
                unsafe {
                    *out = QrRealismReport {
                        wave_realism: report.wave_realism,
                        particle_realism: report.particle_realism,
                        visibility: report.visibility,
                        bound_rhs: report.bound_rhs,
                        discord: report.discord,
                        mutual_information: report.mutual_information,
                    };
                }
                QrStatus::Ok
            }
            Err(error) => status_of(&error),
        }
    })
}

/// Probability of firing detector D0 at the circuit output.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_detection_probability(
    circuit: QrCircuit,
    alpha: f64,
    theta: f64,
    out: *mut f64,
) -> QrStatus {
    if out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        let params = match make_params(alpha, theta) {
            Ok(params) => params,
            Err(status) => return status,
        };
        unsafe { *out = detection_probability(circuit.into(), params) };
        QrStatus::Ok
    })
}

/// Interference visibility from a theta sweep at the given resolution
/// (at least 360 points).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_visibility(
    circuit: QrCircuit,
    alpha: f64,
    resolution: usize,
    out: *mut f64,
) -> QrStatus {
    if out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| match visibility(circuit.into(), alpha, resolution) {
        Ok(value) => {
            unsafe { *out = value };
            QrStatus::Ok
        }
        Err(error) => status_of(&error),
    })
}

/// Right-hand side of the controlled-reality complementarity bound at a
/// visibility in [0, 1].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_qcre_bound(visibility: f64, out: *mut f64) -> QrStatus {
    if out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| match qrealism::realism::qcre_bound(visibility) {
        Ok(value) => {
            unsafe { *out = value };
            QrStatus::Ok
        }
        Err(error) => status_of(&error),
    })
}

/// Binary entropy h(u) in bits for u in [0, 1].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_binary_entropy(u: f64, out: *mut f64) -> QrStatus {
    if out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| match qrealism::qmath::binary_entropy(u) {
        Ok(value) => {
            unsafe { *out = value };
            QrStatus::Ok
        }
        Err(error) => status_of(&error),
    })
}

/// Monte Carlo propagation of tomography noise into the realism
/// quantifiers; deterministic for fixed (sigma, samples, seed).
///
/// # Safety
/// `out` must be a valid pointer to a writable [`QrMonteCarlo`].
#[no_mangle]
pub unsafe extern "C" fn qr_monte_carlo(
    circuit: QrCircuit,
    alpha: f64,
    theta: f64,
    sigma: f64,
    samples: usize,
    seed: u64,
    out: *mut QrMonteCarlo,
) -> QrStatus {
    if out.is_null() {
        return QrStatus::NullPointer;
    }
    guarded(|| {
        let params = match make_params(alpha, theta) {
            Ok(params) => params,
            Err(status) => return status,
        };
        let noise = NoiseModel {
            sigma,
            samples,
            seed,
        };
        match monte_carlo_realism(circuit.into(), params, &noise) {
            Ok(report) => {
                let stat = |s: qrealism::tomography::QuantityStats| QrStatistic {
                    mean: s.mean,
                    std: s.std,
                };
                unsafe {
                    *out = QrMonteCarlo {
                        wave_realism: stat(report.wave_realism),
                        particle_realism: stat(report.particle_realism),
                        visibility: stat(report.visibility),
                        detection_probability: stat(report.detection_probability),
                        samples: report.samples,
                    };
                }
                QrStatus::Ok
            }
            Err(error) => status_of(&error),
        }
    })
}

/// Parses a pulse-sequence source text (with `alpha`/`theta` bound to the
/// given angles), compiles it, and checks equivalence up to a global phase
/// against the ideal full-protocol unitary of the chosen circuit.
///
/// # Safety
/// `sequence` must be a NUL-terminated string; `out` must be a valid
/// pointer to a writable [`QrPulseCheck`].
#[no_mangle]
pub unsafe extern "C" fn qr_pulse_check(
    sequence: *const c_char,
    circuit: QrCircuit,
    alpha: f64,
    theta: f64,
    tolerance: f64,
    out: *mut QrPulseCheck,
) -> QrStatus {
    if sequence.is_null() || out.is_null() {
        return QrStatus::NullPointer;
    }
    let text = match unsafe { CStr::from_ptr(sequence) }.to_str() {
        Ok(text) => text.to_owned(),
        Err(_) => return QrStatus::Utf8Error,
    };
    guarded(move || {
        let params = match make_params(alpha, theta) {
            Ok(params) => params,
            Err(status) => return status,
        };
        let parsed = match parse_sequence(
            &text,
            &SequenceParams {
                alpha: Some(alpha),
                theta: Some(theta),
            },
        ) {
            Ok(parsed) => parsed,
            Err(error) => return status_of(&error),
        };
        let compiled = match compile(&parsed) {
            Ok(compiled) => compiled,
            Err(error) => return status_of(&error),
        };
        let ideal =
            qrealism::interferometer::circuit_unitary(circuit.into(), params, Stage::Output);
        match equivalent_up_to_phase(&compiled.unitary, &ideal, tolerance) {
            Ok(check) => {
                unsafe {
                    *out = QrPulseCheck {
                        equal: check.equal,
                        phase: check.phase,
                        max_deviation: check.max_deviation,
                        duration_seconds: compiled.budget.total_duration,
                        rotation_count: compiled.budget.rotation_count,
                    };
                }
                QrStatus::Ok
            }
            Err(error) => status_of(&error),
        }
    })
}
