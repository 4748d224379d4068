//! The two quantum-controlled interferometer circuits, their stage states,
//! detection statistics, visibility, and the detector measurement model.
//!
//! Both circuits act on a path qubit and a controller qubit. In the
//! delayed-choice arrangement the *second* superposition device is quantum
//! controlled; in the controlled-reality arrangement it is the *first*.
//! The two produce identical detection statistics, but the joint state while
//! the qubit travels inside the interferometer differs sharply, and with it
//! the wave/particle realism of the path qubit.
//!
//! States are built by applying gate unitaries to the input state; the
//! closed-form kets ([`analytic_inside_ket`], [`analytic_output_ket`]) serve
//! as oracles for tests and the verification suite.

use crate::qmath::{
    partial_trace, tensor_product, ComplexMatrix, DensityOperator, Factor, ProjectiveObservable,
};
use crate::realism::{self, mutual_information, qcre_bound, realism_of};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Factor label of the interfering path qubit.
pub const PATH: &str = "path";
/// Factor label of the quantum controller.
pub const CONTROLLER: &str = "ctrl";
/// Factor labels of the two detector qubits in the measurement model.
pub const DETECTORS: [&str; 2] = ["d0", "d1"];

/// Default number of grid points for visibility sweeps.
pub const VISIBILITY_RESOLUTION: usize = 720;
/// Minimum accepted sweep resolution.
pub const MIN_VISIBILITY_RESOLUTION: usize = 360;

/// Which of the two circuits is being simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitKind {
    /// Quantum delayed-choice circuit: the final device is controlled.
    Qdce,
    /// Quantum-controlled reality circuit: the first device is controlled.
    Qcre,
}

impl CircuitKind {
    pub fn name(self) -> &'static str {
        match self {
            CircuitKind::Qdce => "qdce",
            CircuitKind::Qcre => "qcre",
        }
    }
}

impl std::str::FromStr for CircuitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qdce" => Ok(CircuitKind::Qdce),
            "qcre" => Ok(CircuitKind::Qcre),
            _ => Err(Error::InvalidObservable(format!(
                "unknown circuit kind {s:?} (expected qdce or qcre)"
            ))),
        }
    }
}

/// Controller angle and phase-shifter angle selecting one circuit point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    pub alpha: f64,
    pub theta: f64,
}

impl CircuitParams {
    /// Requires alpha in [0, pi] and theta in [0, 2 pi).
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&alpha) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "[0, pi]",
            });
        }
        if !(0.0..2.0 * PI).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                range: "[0, 2 pi)",
            });
        }
        Ok(Self { alpha, theta })
    }
}

/// Point of the circuit a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Input,
    /// After the phase shifter, before the final device.
    Inside,
    Output,
}

/// A joint (path, controller) state at a labelled stage.
#[derive(Debug, Clone)]
pub struct StageState {
    pub stage: Stage,
    pub state: DensityOperator,
}

/// Particle and wave observables on the path qubit, phase-matched to the
/// interferometer setting: P eigenstates {|0>, |1>}, W eigenstates
/// (e^{i theta}|0> ± |1>)/sqrt(2).
#[derive(Debug, Clone)]
pub struct WaveParticleBasis {
    pub theta: f64,
    pub particle: ProjectiveObservable,
    pub wave: ProjectiveObservable,
}

impl WaveParticleBasis {
    pub fn new(theta: f64) -> Self {
        Self::for_subsystem(PATH, theta)
    }

    pub fn for_subsystem(subsystem: &str, theta: f64) -> Self {
        let particle = ProjectiveObservable::from_basis(
            subsystem,
            &[ComplexMatrix::basis_ket(2, 0), ComplexMatrix::basis_ket(2, 1)],
            vec!["P+".into(), "P-".into()],
        )
        .expect("computational basis is valid");
        let phase = Complex64::from_polar(FRAC_1_SQRT_2, theta);
        let wave = ProjectiveObservable::from_basis(
            subsystem,
            &[
                ComplexMatrix::ket(&[phase, Complex64::new(FRAC_1_SQRT_2, 0.0)]),
                ComplexMatrix::ket(&[phase, Complex64::new(-FRAC_1_SQRT_2, 0.0)]),
            ],
            vec!["W+".into(), "W-".into()],
        )
        .expect("wave basis is orthonormal");
        Self {
            theta,
            particle,
            wave,
        }
    }
}

/// The single-qubit devices the circuits are assembled from. The
/// superposition device can be overridden, which the verification suite uses
/// to prove the stage oracles would catch a wrong convention.
#[derive(Debug, Clone)]
pub struct GateSet {
    superposition: ComplexMatrix,
}

impl Default for GateSet {
    fn default() -> Self {
        Self {
            superposition: hadamard(),
        }
    }
}

impl GateSet {
    pub fn with_superposition(device: ComplexMatrix) -> Result<Self> {
        let defect = device.unitarity_defect();
        if device.rows() != 2 || device.cols() != 2 || defect > 1e-9 {
            return Err(Error::NotUnitary {
                defect,
                tolerance: 1e-9,
            });
        }
        Ok(Self {
            superposition: device,
        })
    }

    pub fn superposition(&self) -> &ComplexMatrix {
        &self.superposition
    }
}

/// The beam-splitter analogue: (1/sqrt 2) [[1, 1], [1, -1]].
pub fn hadamard() -> ComplexMatrix {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::from_rows(&[&[h, h], &[h, -h]])
}

/// Phase shifter diag(e^{i theta}, 1) on the path qubit.
pub fn phase_shifter(theta: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        &[Complex64::from_polar(1.0, theta), Complex64::ZERO],
        &[Complex64::ZERO, Complex64::ONE],
    ])
}

/// Controller preparation R_y(alpha), |0> -> cos(a/2)|0> + sin(a/2)|1>.
fn controller_preparation(alpha: f64) -> ComplexMatrix {
    let (s, c) = (alpha / 2.0).sin_cos();
    ComplexMatrix::from_rows(&[
        &[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        &[Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ])
}

/// Device on the path tensored with identity on the controller.
fn on_path(device: &ComplexMatrix) -> ComplexMatrix {
    tensor_product(device, &ComplexMatrix::identity(2))
}

/// Device applied to the path when the controller is |in> = |0>.
fn controlled_on_in(device: &ComplexMatrix) -> ComplexMatrix {
    let p_in = ComplexMatrix::basis_ket(2, 0).outer();
    let p_out = ComplexMatrix::basis_ket(2, 1).outer();
    tensor_product(device, &p_in).add(&tensor_product(&ComplexMatrix::identity(2), &p_out))
}

fn joint_factors() -> Vec<Factor> {
    vec![Factor::qubit(PATH), Factor::qubit(CONTROLLER)]
}

/// Ordered gate unitaries of a circuit up to and including the given stage.
fn gate_pipeline(
    kind: CircuitKind,
    theta: f64,
    stage: Stage,
    gates: &GateSet,
) -> Vec<ComplexMatrix> {
    if stage == Stage::Input {
        return Vec::new();
    }
    let device = gates.superposition();
    let mut ops = Vec::new();
    match kind {
        CircuitKind::Qdce => {
            ops.push(on_path(device));
            ops.push(on_path(&phase_shifter(theta)));
            if stage == Stage::Output {
                ops.push(controlled_on_in(device));
            }
        }
        CircuitKind::Qcre => {
            ops.push(controlled_on_in(device));
            ops.push(on_path(&phase_shifter(theta)));
            if stage == Stage::Output {
                ops.push(on_path(device));
            }
        }
    }
    ops
}

fn input_ket(params: CircuitParams) -> ComplexMatrix {
    let (s, c) = (params.alpha / 2.0).sin_cos();
    // Path |0> tensor controller superposition; path is the leftmost factor.
    ComplexMatrix::ket(&[
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
    ])
}

/// Pure product input |0>_path (cos(a/2)|in> + sin(a/2)|out>)_ctrl.
pub fn input_state(params: CircuitParams) -> StageState {
    StageState {
        stage: Stage::Input,
        state: DensityOperator::from_pure(&input_ket(params), joint_factors())
            .expect("input ket is normalised"),
    }
}

/// Joint state at the requested stage, built by gate application.
pub fn stage_state(kind: CircuitKind, params: CircuitParams, stage: Stage) -> StageState {
    stage_state_with_gates(kind, params, stage, &GateSet::default())
}

/// As [`stage_state`] but with an explicit gate set.
pub fn stage_state_with_gates(
    kind: CircuitKind,
    params: CircuitParams,
    stage: Stage,
    gates: &GateSet,
) -> StageState {
    let mut ket = input_ket(params);
    for op in gate_pipeline(kind, params.theta, stage, gates) {
        ket = op.mul(&ket);
    }
    StageState {
        stage,
        state: DensityOperator::from_pure(&ket, joint_factors())
            .expect("unitary pipeline preserves normalisation"),
    }
}

/// Full 4x4 protocol unitary from |00>, including controller preparation.
pub fn circuit_unitary(kind: CircuitKind, params: CircuitParams, stage: Stage) -> ComplexMatrix {
    circuit_unitary_with_gates(kind, params, stage, &GateSet::default())
}

/// As [`circuit_unitary`] but with an explicit gate set.
pub fn circuit_unitary_with_gates(
    kind: CircuitKind,
    params: CircuitParams,
    stage: Stage,
    gates: &GateSet,
) -> ComplexMatrix {
    let mut unitary = tensor_product(
        &ComplexMatrix::identity(2),
        &controller_preparation(params.alpha),
    );
    for op in gate_pipeline(kind, params.theta, stage, gates) {
        unitary = op.mul(&unitary);
    }
    unitary
}

/// Closed-form inside-stage ket: the wave/particle superposition the gate
/// pipeline must reproduce.
pub fn analytic_inside_ket(kind: CircuitKind, params: CircuitParams) -> ComplexMatrix {
    let (s, c) = (params.alpha / 2.0).sin_cos();
    let wave0 = Complex64::from_polar(FRAC_1_SQRT_2, params.theta);
    let wave1 = Complex64::new(FRAC_1_SQRT_2, 0.0);
    match kind {
        // |W+> (cos |in> + sin |out>)
        CircuitKind::Qdce => {
            ComplexMatrix::ket(&[wave0 * c, wave0 * s, wave1 * c, wave1 * s])
        }
        // cos |W+>|in> + e^{i theta} sin |P+>|out>
        CircuitKind::Qcre => {
            let phase = Complex64::from_polar(1.0, params.theta);
            ComplexMatrix::ket(&[wave0 * c, phase * s, wave1 * c, Complex64::ZERO])
        }
    }
}

/// Closed-form output ket.
pub fn analytic_output_ket(kind: CircuitKind, params: CircuitParams) -> ComplexMatrix {
    let (s, c) = (params.alpha / 2.0).sin_cos();
    let theta = params.theta;
    // |w_theta> = e^{i theta/2} (cos(theta/2)|0> + i sin(theta/2)|1>).
    let half = Complex64::from_polar(1.0, theta / 2.0);
    let w0 = half * Complex64::new((theta / 2.0).cos(), 0.0);
    let w1 = half * Complex64::new(0.0, (theta / 2.0).sin());
    match kind {
        // cos |w_theta>|in> + sin |wp_theta>|out>
        CircuitKind::Qdce => {
            let p0 = Complex64::from_polar(FRAC_1_SQRT_2, theta);
            let p1 = Complex64::new(FRAC_1_SQRT_2, 0.0);
            ComplexMatrix::ket(&[w0 * c, p0 * s, w1 * c, p1 * s])
        }
        // cos |w_theta>|in> + e^{i theta} sin |wp_0>|out>
        CircuitKind::Qcre => {
            let phase = Complex64::from_polar(FRAC_1_SQRT_2, theta);
            ComplexMatrix::ket(&[w0 * c, phase * s, w1 * c, phase * s])
        }
    }
}

/// Probability of firing detector D0: Tr[(|0><0|_path ⊗ 1) rho_out].
pub fn detection_probability(kind: CircuitKind, params: CircuitParams) -> f64 {
    let output = stage_state(kind, params, Stage::Output);
    path_zero_probability(&output.state)
}

/// 1/2 (1 + cos^2(alpha/2) cos theta): the analytic interference pattern.
pub fn ideal_pattern(alpha: f64, theta: f64) -> f64 {
    let visibility = (alpha / 2.0).cos().powi(2);
    0.5 * (1.0 + visibility * theta.cos())
}

fn path_zero_probability(state: &DensityOperator) -> f64 {
    let m = state.matrix();
    let half = state.dim() / 2;
    (0..half).map(|i| m[(i, i)].re).sum()
}

/// Interference visibility extracted from a theta sweep of the detection
/// pattern, (max - min) / (max + min). Requires at least 360 grid points.
pub fn visibility(kind: CircuitKind, alpha: f64, resolution: usize) -> Result<f64> {
    if resolution < MIN_VISIBILITY_RESOLUTION {
        return Err(Error::OutOfRange {
            name: "resolution",
            value: resolution as f64,
            range: "[360, ...)",
        });
    }
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for k in 0..resolution {
        let theta = 2.0 * PI * k as f64 / resolution as f64;
        let p = detection_probability(kind, CircuitParams::new(alpha, theta)?);
        max = max.max(p);
        min = min.min(p);
    }
    Ok((max - min) / (max + min))
}

/// Visibility of the pattern generated from a fixed inside-stage state by an
/// auxiliary phase shift followed by the circuit's final device. For every
/// state the pattern is exactly sinusoidal in the shift,
/// p0(chi) = a + b cos chi + c sin chi, so the extrema follow from three
/// samples. Reduces to cos^2(alpha/2) on ideal states and remains well
/// defined on noisy ones.
pub fn visibility_of_state(kind: CircuitKind, inside: &DensityOperator) -> Result<f64> {
    if inside.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: inside.dim(),
            right: 4,
        });
    }
    let device = final_device(kind);
    let at_zero = pattern_of_state(inside, &device, 0.0);
    let at_quarter = pattern_of_state(inside, &device, PI / 2.0);
    let at_half = pattern_of_state(inside, &device, PI);
    let offset = 0.5 * (at_zero + at_half);
    let cosine = 0.5 * (at_zero - at_half);
    let sine = at_quarter - offset;
    let amplitude = (cosine * cosine + sine * sine).sqrt();
    let max = offset + amplitude;
    let min = offset - amplitude;
    Ok(((max - min) / (max + min)).clamp(0.0, 1.0))
}

/// Detection probability after adding phase chi to an inside state and
/// applying the final device.
pub(crate) fn pattern_of_state(
    inside: &DensityOperator,
    final_device: &ComplexMatrix,
    chi: f64,
) -> f64 {
    let shift = on_path(&phase_shifter(chi));
    let op = final_device.mul(&shift);
    let evolved = op.mul(inside.matrix()).mul(&op.adjoint());
    let half = inside.dim() / 2;
    (0..half).map(|i| evolved[(i, i)].re).sum()
}

/// The device the circuit applies after the inside stage.
pub(crate) fn final_device(kind: CircuitKind) -> ComplexMatrix {
    let gates = GateSet::default();
    match kind {
        CircuitKind::Qdce => controlled_on_in(gates.superposition()),
        CircuitKind::Qcre => on_path(gates.superposition()),
    }
}

/// Realism quantifiers of one circuit point, with optional Monte Carlo bars.
#[derive(Debug, Clone, Copy)]
pub struct RealismReport {
    pub wave_realism: f64,
    pub particle_realism: f64,
    pub visibility: f64,
    /// Right-hand side of the controlled-reality complementarity bound at
    /// this visibility.
    pub bound_rhs: f64,
    /// Discord of the inside state, measured on the path qubit.
    pub discord: f64,
    /// Mutual information between path and controller inside.
    pub mutual_information: f64,
    pub error_bars: Option<ErrorBars>,
}

/// One standard deviation per quantity, from Monte Carlo propagation.
#[derive(Debug, Clone, Copy)]
pub struct ErrorBars {
    pub wave_realism: f64,
    pub particle_realism: f64,
    pub visibility: f64,
}

/// Wave and particle realism of the path qubit at the inside stage, with the
/// theta-matched wave/particle bases.
pub fn realism_inside(kind: CircuitKind, params: CircuitParams) -> Result<RealismReport> {
    let inside = stage_state(kind, params, Stage::Inside);
    realism_report_for(kind, params, &inside.state)
}

/// Realism report for an arbitrary (possibly tomographically reconstructed)
/// inside-stage state.
pub fn realism_report_for(
    kind: CircuitKind,
    params: CircuitParams,
    inside: &DensityOperator,
) -> Result<RealismReport> {
    let basis = WaveParticleBasis::new(params.theta);
    let wave_realism = realism_of(inside, &basis.wave)?;
    let particle_realism = realism_of(inside, &basis.particle)?;
    let visibility = visibility_of_state(kind, inside)?;
    Ok(RealismReport {
        wave_realism,
        particle_realism,
        visibility,
        bound_rhs: qcre_bound(visibility)?,
        discord: realism::discord(inside, PATH)?.bits,
        mutual_information: mutual_information(inside, &[PATH], &[CONTROLLER])?,
        error_bars: None,
    })
}

/// The von Neumann measurement model of the open interferometer: the path
/// qubit entangles with two detector qubits whose internal states
/// |activated> = |0> and |ready> = |1> become the accessible context.
#[derive(Debug, Clone)]
pub struct DetectorModel {
    /// |out> |wp_theta> |r0> |r1>: before the detectors fire.
    pub initial: StageState,
    /// |out> (e^{i theta}|0>|a0>|r1> + |1>|r0>|a1>)/sqrt(2).
    pub final_state: StageState,
    /// Detector pair state after discarding controller and path.
    pub detectors: DensityOperator,
}

/// Detector-model factors are ordered (controller, path, d0, d1).
pub fn detector_model(theta: f64) -> DetectorModel {
    let factors = vec![
        Factor::qubit(CONTROLLER),
        Factor::qubit(PATH),
        Factor::qubit(DETECTORS[0]),
        Factor::qubit(DETECTORS[1]),
    ];
    // Basis index (c, p, d0, d1); controller |out> = 1, ready = |1>.
    let index = |c: usize, p: usize, d0: usize, d1: usize| ((c * 2 + p) * 2 + d0) * 2 + d1;
    let phase = Complex64::from_polar(FRAC_1_SQRT_2, theta);
    let flat = Complex64::new(FRAC_1_SQRT_2, 0.0);

    let mut initial = vec![Complex64::ZERO; 16];
    initial[index(1, 0, 1, 1)] = phase;
    initial[index(1, 1, 1, 1)] = flat;

    let mut final_amplitudes = vec![Complex64::ZERO; 16];
    final_amplitudes[index(1, 0, 0, 1)] = phase;
    final_amplitudes[index(1, 1, 1, 0)] = flat;

    let initial = DensityOperator::from_pure(&ComplexMatrix::ket(&initial), factors.clone())
        .expect("detector model ket is normalised");
    let final_state = DensityOperator::from_pure(&ComplexMatrix::ket(&final_amplitudes), factors)
        .expect("detector model ket is normalised");
    let detectors = partial_trace(&final_state, &[DETECTORS[0], DETECTORS[1]])
        .expect("detector factors exist");

    DetectorModel {
        initial: StageState {
            stage: Stage::Inside,
            state: initial,
        },
        final_state: StageState {
            stage: Stage::Output,
            state: final_state,
        },
        detectors,
    }
}

/// Particle observable (definiteness of the internal state) of detector k.
pub fn detector_particle_observable(k: usize) -> ProjectiveObservable {
    ProjectiveObservable::from_basis(
        DETECTORS[k],
        &[ComplexMatrix::basis_ket(2, 0), ComplexMatrix::basis_ket(2, 1)],
        vec!["activated".into(), "ready".into()],
    )
    .expect("detector basis is valid")
}

/// Wave observable (|a> ± |r>)/sqrt(2) of detector k.
pub fn detector_wave_observable(k: usize) -> ProjectiveObservable {
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ProjectiveObservable::from_basis(
        DETECTORS[k],
        &[
            ComplexMatrix::ket(&[amp, amp]),
            ComplexMatrix::ket(&[amp, -amp]),
        ],
        vec!["W+".into(), "W-".into()],
    )
    .expect("detector wave basis is valid")
}

/// Fidelity-based state comparison that ignores a global phase.
pub fn states_equal_up_to_phase(
    a: &DensityOperator,
    b: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    Ok(crate::qmath::fidelity(a, b)? >= 1.0 - tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{binary_entropy, fidelity, von_neumann_entropy};
    use crate::realism::irrealism_of;

    fn params(alpha: f64, theta: f64) -> CircuitParams {
        CircuitParams::new(alpha, theta).unwrap()
    }

    #[test]
    fn params_are_range_checked() {
        assert!(CircuitParams::new(-0.1, 0.0).is_err());
        assert!(CircuitParams::new(PI + 0.1, 0.0).is_err());
        assert!(CircuitParams::new(0.5, -0.1).is_err());
        assert!(CircuitParams::new(0.5, 2.0 * PI).is_err());
    }

    #[test]
    fn input_state_limits() {
        let closed = input_state(params(0.0, 0.0));
        let m = closed.state.matrix();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-12); // |0>|in>

        let open = input_state(params(PI, 0.0));
        assert!((open.state.matrix()[(1, 1)].re - 1.0).abs() < 1e-12); // |0>|out>

        // Balanced controller: |+><+| reduction, populations 1/2 each.
        let balanced = input_state(params(PI / 2.0, 0.0));
        let ctrl = partial_trace(&balanced.state, &[CONTROLLER]).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let plus = ComplexMatrix::from_rows(&[&[half, half], &[half, half]]);
        assert!(ctrl.matrix().max_abs_diff(&plus) < 1e-12);
    }

    #[test]
    fn gate_pipeline_reproduces_closed_forms() {
        for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
            for &alpha in &[0.0, 0.4, PI / 2.0, 2.6, PI] {
                for &theta in &[0.0, 0.9, PI, 5.5] {
                    let p = params(alpha, theta);
                    let inside = stage_state(kind, p, Stage::Inside);
                    let oracle =
                        DensityOperator::from_pure(&analytic_inside_ket(kind, p), joint_factors())
                            .unwrap();
                    let f = fidelity(&inside.state, &oracle).unwrap();
                    assert!(f >= 1.0 - 1e-10, "{kind:?} inside {alpha} {theta}: {f}");

                    let output = stage_state(kind, p, Stage::Output);
                    let oracle =
                        DensityOperator::from_pure(&analytic_output_ket(kind, p), joint_factors())
                            .unwrap();
                    let f = fidelity(&output.state, &oracle).unwrap();
                    assert!(f >= 1.0 - 1e-10, "{kind:?} output {alpha} {theta}: {f}");
                }
            }
        }
    }

    #[test]
    fn circuit_unitary_agrees_with_stage_states() {
        for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
            let p = params(1.2, 0.8);
            for stage in [Stage::Input, Stage::Inside, Stage::Output] {
                let u = circuit_unitary(kind, p, stage);
                assert!(u.unitarity_defect() < 1e-12);
                let ket = u.mul(&ComplexMatrix::basis_ket(4, 0));
                let from_unitary =
                    DensityOperator::from_pure(&ket, joint_factors()).unwrap();
                let direct = stage_state(kind, p, stage);
                assert!(
                    from_unitary
                        .matrix()
                        .max_abs_diff(direct.state.matrix())
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn delayed_choice_inside_state_is_uncorrelated() {
        for &alpha in &[0.3, 1.4, 2.8] {
            let inside = stage_state(CircuitKind::Qdce, params(alpha, 1.0), Stage::Inside);
            let mi = mutual_information(&inside.state, &[PATH], &[CONTROLLER]).unwrap();
            assert!(mi.abs() < 1e-10, "alpha {alpha}: mi {mi}");
        }
    }

    #[test]
    fn controlled_reality_inside_state_limits_and_entanglement() {
        // alpha = pi: the path keeps travelling as a particle.
        let inside = stage_state(CircuitKind::Qcre, params(PI, 0.7), Stage::Inside);
        let expected = {
            let mut amplitudes = vec![Complex64::ZERO; 4];
            amplitudes[1] = Complex64::ONE; // |P+>|out>
            DensityOperator::from_pure(&ComplexMatrix::ket(&amplitudes), joint_factors()).unwrap()
        };
        assert!(states_equal_up_to_phase(&inside.state, &expected, 1e-10).unwrap());

        // alpha = pi/2: Schmidt spectrum from the 2x2 Gram-matrix oracle.
        let p = params(PI / 2.0, 0.0);
        let inside = stage_state(CircuitKind::Qcre, p, Stage::Inside);
        let ctrl = partial_trace(&inside.state, &[CONTROLLER]).unwrap();
        let entanglement = von_neumann_entropy(&ctrl);

        // Oracle: the controller Gram matrix of c|W+>|in> + e^{it} s|P+>|out>
        // has eigenvalues 1/2 ± sqrt((c²-s²)²/4 + c²s²|<W+|P+>|²) with
        // |<W+|P+>|² = 1/2.
        let (s, c) = (PI / 4.0).sin_cos();
        let overlap_sq: f64 = 0.5;
        let radius = (0.25 * (c * c - s * s).powi(2) + c * c * s * s * overlap_sq).sqrt();
        let oracle = binary_entropy(0.5 + radius).unwrap();
        assert!((entanglement - oracle).abs() < 1e-12);
        assert!((entanglement - 0.6008760366928562).abs() < 1e-12);

        // Pure state: mutual information is twice the entanglement entropy.
        let mi = mutual_information(&inside.state, &[PATH], &[CONTROLLER]).unwrap();
        assert!((mi - 2.0 * entanglement).abs() < 1e-10);

        // Path reduction carries diagonal (3/4, 1/4) in the computational
        // basis at theta = 0.
        let path = partial_trace(&inside.state, &[PATH]).unwrap();
        assert!((path.matrix()[(0, 0)].re - 0.75).abs() < 1e-12);
        assert!((path.matrix()[(1, 1)].re - 0.25).abs() < 1e-12);
    }

    #[test]
    fn detection_probability_matches_formula() {
        for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
            assert!((detection_probability(kind, params(0.0, 0.0)) - 1.0).abs() < 1e-12);
            for &theta in &[0.0, 1.0, 2.5] {
                let p = detection_probability(kind, params(PI, theta));
                assert!((p - 0.5).abs() < 1e-12);
            }
            let p = detection_probability(kind, params(PI / 2.0, PI / 3.0));
            assert!((p - 0.625).abs() < 1e-12);
            for &alpha in &[0.2, 1.1, 2.7] {
                for &theta in &[0.3, 3.3, 6.0] {
                    let simulated = detection_probability(kind, params(alpha, theta));
                    assert!((simulated - ideal_pattern(alpha, theta)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn visibility_matches_cosine_squared() {
        assert!((visibility(CircuitKind::Qcre, 0.0, 720).unwrap() - 1.0).abs() < 1e-6);
        assert!(visibility(CircuitKind::Qcre, PI, 720).unwrap() < 1e-6);
        assert!((visibility(CircuitKind::Qdce, PI / 3.0, 720).unwrap() - 0.75).abs() < 1e-6);
        assert!(visibility(CircuitKind::Qdce, 0.5, 100).is_err());
    }

    #[test]
    fn inside_realism_follows_the_closed_forms() {
        // Delayed choice: wave reality regardless of the controller.
        for &alpha in &[0.0, 1.0, 2.0, PI] {
            let report = realism_inside(CircuitKind::Qdce, params(alpha, 0.9)).unwrap();
            assert!((report.wave_realism - 1.0).abs() < 1e-9);
            assert!(report.particle_realism.abs() < 1e-9);
        }
        // Controlled reality: binary-entropy interpolation.
        let report = realism_inside(CircuitKind::Qcre, params(0.0, 0.4)).unwrap();
        assert!((report.wave_realism - 1.0).abs() < 1e-9);
        assert!(report.particle_realism.abs() < 1e-9);

        let report = realism_inside(CircuitKind::Qcre, params(PI, 0.4)).unwrap();
        assert!(report.wave_realism.abs() < 1e-9);
        assert!((report.particle_realism - 1.0).abs() < 1e-9);

        let report = realism_inside(CircuitKind::Qcre, params(PI / 2.0, 0.4)).unwrap();
        assert!((report.wave_realism - 0.18872187554086717).abs() < 1e-9);
        assert!((report.particle_realism - 0.18872187554086717).abs() < 1e-9);
        assert!((report.visibility - 0.5).abs() < 1e-6);
        assert!(report.wave_realism + report.particle_realism <= report.bound_rhs + 1e-9);
    }

    #[test]
    fn detector_model_realism() {
        let model = detector_model(0.8);

        // In flight: the path qubit is a wave reality.
        let basis = WaveParticleBasis::new(0.8);
        let r_p = realism_of(&model.initial.state, &basis.particle).unwrap();
        let r_w = realism_of(&model.initial.state, &basis.wave).unwrap();
        assert!(r_p.abs() < 1e-9);
        assert!((r_w - 1.0).abs() < 1e-9);

        // Detector internal states are elements of reality.
        let spectrum = model.detectors.eigenvalues();
        let expected = [0.0, 0.0, 0.5, 0.5];
        for (got, want) in spectrum.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
        for k in 0..2 {
            let particle =
                irrealism_of(&model.detectors, &detector_particle_observable(k)).unwrap();
            assert!(particle.abs() < 1e-12, "detector {k}: {particle}");
            let wave = realism_of(&model.detectors, &detector_wave_observable(k)).unwrap();
            assert!(wave.abs() < 1e-12, "detector {k}: {wave}");
        }
    }

    #[test]
    fn perturbed_superposition_device_breaks_the_oracle() {
        // Same-shape unitary with a flipped sign convention in the first
        // column, which every pipeline stage exercises.
        let wrong = ComplexMatrix::from_rows(&[
            &[
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            ],
            &[
                Complex64::new(-FRAC_1_SQRT_2, 0.0),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            ],
        ]);
        let gates = GateSet::with_superposition(wrong).unwrap();
        let p = params(1.1, 0.7);
        for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
            let inside = stage_state_with_gates(kind, p, Stage::Inside, &gates);
            let oracle =
                DensityOperator::from_pure(&analytic_inside_ket(kind, p), joint_factors())
                    .unwrap();
            assert!(
                !states_equal_up_to_phase(&inside.state, &oracle, 1e-10).unwrap(),
                "{kind:?}"
            );
        }
    }
}
