//! Runnable verification suite: every module's invariants with explicit
//! margins, consumed by the `verify` CLI subcommand and the acceptance
//! tests.
//!
//! Each check reports `margin`, the distance by which the property clears
//! its tolerance; a check passes iff the margin is nonnegative. Random
//! sweeps are seeded and therefore reproducible.

use crate::interferometer::{
    analytic_inside_ket, analytic_output_ket, circuit_unitary, detection_probability,
    detector_model, detector_particle_observable, detector_wave_observable, ideal_pattern,
    realism_inside, stage_state_with_gates, visibility, CircuitKind, CircuitParams, GateSet,
    Stage, WaveParticleBasis, CONTROLLER, PATH, VISIBILITY_RESOLUTION,
};
use crate::pulse::{compile, equivalent_up_to_phase, reference_sequence};
use crate::qmath::{
    binary_entropy, eigh, fidelity, partial_trace, relative_entropy, tensor_product,
    von_neumann_entropy, ComplexMatrix, DensityOperator, Factor,
};
use crate::realism::{
    bound_incompatible, dephase, discord, irrealism, irrealism_of, mutual_information,
    nonseparability_gap, qcre_bound, realism_of, RealismContext,
};
use crate::rng::StateSampler;
use crate::tomography::{
    monte_carlo_realism, pauli_expectations, perturb, project_physical, reconstruct, NoiseModel,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One verified property with its margin above the tolerance.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Distance by which the property clears its tolerance (>= 0 passes).
    pub margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn from_error(name: &'static str, tolerance: f64, worst: f64, detail: String) -> Self {
        // `worst` is the largest observed violation measure; the property
        // holds while worst <= tolerance.
        Self {
            name,
            passed: worst <= tolerance,
            margin: tolerance - worst,
            tolerance,
            detail,
        }
    }
}

/// Configuration of the verification run.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Gate set used for the gate-built states (override to prove the
    /// oracles catch a wrong convention).
    pub gates: GateSet,
    /// Number of random states in the property sweeps.
    pub random_states: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            gates: GateSet::default(),
            random_states: 1000,
            seed: 2024,
        }
    }
}

/// Runs the full suite in a fixed order.
pub fn run_all(options: &VerifyOptions) -> Vec<CheckResult> {
    vec![
        eigh_reconstruction(options),
        tensor_trace_roundtrip(options),
        entropy_ranges(options),
        dephase_idempotence(options),
        minimisation_identity(options),
        realism_ranges(options),
        incompatibility_bound_sweep(options),
        nonseparability_sweep(options),
        discord_local_unitary_invariance(options),
        stage_oracles(options),
        pattern_equality(),
        visibility_sweep(),
        inside_realism_closed_forms(),
        complementarity_bound_profile(),
        mutual_information_profile(),
        monotonicity_profile(),
        detector_model_check(),
        pulse_reference_equivalence(),
        tomography_roundtrip(options),
        physicality_projection(options),
        monte_carlo_determinism(),
        monte_carlo_consistency(),
        monte_carlo_convergence(),
    ]
}

fn random_hermitian(sampler: &mut StateSampler, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(sampler.rng().gaussian(), 0.0);
        for j in (i + 1)..dim {
            let z = sampler.rng().complex_gaussian();
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn eigh_reconstruction(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed);
    let dims = [2usize, 4, 8, 16];
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let dim = dims[k % dims.len()];
        let m = random_hermitian(&mut sampler, dim);
        let d = eigh(&m).expect("random Hermitian");
        worst = worst.max(d.reconstruct().max_abs_diff(&m));
        worst = worst.max(d.eigenvectors.unitarity_defect());
    }
    CheckResult::from_error(
        "qmath.eigh_reconstruction",
        1e-9,
        worst,
        format!("max reconstruction/orthonormality error over 1000 matrices: {worst:.3e}"),
    )
}

fn tensor_trace_roundtrip(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0x1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let a = sampler.mixed(&[Factor::qubit("a")]);
        let b = sampler.mixed(&[Factor::qubit("b")]);
        let joint = DensityOperator::new(
            tensor_product(a.matrix(), b.matrix()),
            vec![Factor::qubit("a"), Factor::qubit("b")],
        )
        .expect("product of states is a state");
        let back = partial_trace(&joint, &["a"]).expect("label exists");
        worst = worst.max(back.matrix().max_abs_diff(a.matrix()));
        worst = worst.max((back.matrix().trace().re - 1.0).abs());
    }
    CheckResult::from_error(
        "qmath.tensor_partial_trace_roundtrip",
        1e-10,
        worst,
        format!("max roundtrip error over 200 product states: {worst:.3e}"),
    )
}

fn entropy_ranges(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0x2);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let factors: Vec<Factor> = match k % 3 {
            0 => vec![Factor::qubit("a")],
            1 => vec![Factor::qubit("a"), Factor::qubit("b")],
            _ => vec![Factor::qubit("a"), Factor::qubit("b"), Factor::qubit("c")],
        };
        let rho = sampler.mixed(&factors);
        let entropy = von_neumann_entropy(&rho);
        worst = worst.max(-entropy);
        worst = worst.max(entropy - (rho.dim() as f64).log2());
        let sigma = sampler.mixed(&factors);
        let relative = relative_entropy(&rho, &sigma).expect("same dims");
        if relative.is_finite() {
            worst = worst.max(-relative);
        }
    }
    CheckResult::from_error(
        "qmath.entropy_ranges",
        1e-9,
        worst,
        format!("largest range violation over 200 states: {worst:.3e}"),
    )
}

fn dephase_idempotence(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0x3);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let rho = sampler.two_qubit();
        let basis = WaveParticleBasis::for_subsystem("a", 0.13 * k as f64);
        for observable in [&basis.particle, &basis.wave] {
            let ctx = RealismContext::new(&rho, observable).expect("subsystem exists");
            let once = dephase(&ctx);
            let ctx2 = RealismContext::new(&once, observable).expect("subsystem exists");
            let twice = dephase(&ctx2);
            worst = worst.max(once.matrix().max_abs_diff(twice.matrix()));
        }
    }
    CheckResult::from_error(
        "realism.dephase_idempotence",
        1e-10,
        worst,
        format!("max |dephase^2 - dephase| over 100 states x 2 observables: {worst:.3e}"),
    )
}

fn minimisation_identity(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0x4);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let rho = sampler.two_qubit();
        let basis = WaveParticleBasis::for_subsystem("a", 0.21 * k as f64);
        let ctx = RealismContext::new(&rho, &basis.wave).expect("subsystem exists");
        let dephased = dephase(&ctx);
        let relative = relative_entropy(&rho, &dephased).expect("same dims");
        let entropic = irrealism(&ctx);
        if relative.is_finite() {
            worst = worst.max((relative - entropic).abs());
        } else {
            worst = f64::INFINITY;
        }
    }
    CheckResult::from_error(
        "realism.minimisation_identity",
        1e-8,
        worst,
        format!("max |S(rho||Phi(rho)) - irrealism| over 200 states: {worst:.3e}"),
    )
}

fn realism_ranges(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0x5);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let rho = sampler.two_qubit();
        let basis = WaveParticleBasis::for_subsystem("a", 0.37 * k as f64);
        for observable in [&basis.particle, &basis.wave] {
            let irr = irrealism_of(&rho, observable).expect("valid context");
            let real = realism_of(&rho, observable).expect("valid context");
            worst = worst.max(-irr);
            worst = worst.max(-real);
            worst = worst.max(real - 1.0);
        }
    }
    CheckResult::from_error(
        "realism.quantifier_ranges",
        1e-9,
        worst,
        format!("largest range violation over 200 states: {worst:.3e}"),
    )
}

/// Shared by verify and the acceptance suite: worst slack of the
/// incompatibility bound and worst disagreement of its two forms over
/// `count` seeded random two-qubit states with the (W, P) pair.
pub fn incompatibility_sweep_worst(count: usize, seed: u64) -> (f64, f64) {
    let mut sampler = StateSampler::new(seed);
    let mut worst_violation: f64 = f64::NEG_INFINITY;
    let mut worst_form_gap: f64 = 0.0;
    for _ in 0..count {
        let rho = sampler.two_qubit();
        let theta = sampler.rng().uniform_in(0.0, 2.0 * PI);
        let basis = WaveParticleBasis::for_subsystem("a", theta);
        let bound = bound_incompatible(&rho, &basis.wave, &basis.particle)
            .expect("wave/particle pair is mutually unbiased");
        worst_violation = worst_violation.max(bound.lhs - bound.rhs);
        worst_form_gap = worst_form_gap.max((bound.rhs - bound.rhs_conditional).abs());
    }
    (worst_violation, worst_form_gap)
}

fn incompatibility_bound_sweep(options: &VerifyOptions) -> CheckResult {
    let (worst_violation, worst_form_gap) =
        incompatibility_sweep_worst(options.random_states, options.seed ^ 0x6);
    let worst = worst_violation.max(worst_form_gap - 1e-9 + 1e-6); // form gap scaled into the same budget
    CheckResult::from_error(
        "realism.incompatibility_bound",
        1e-6,
        worst,
        format!(
            "worst lhs-rhs: {worst_violation:.3e}; worst |rhs forms|: {worst_form_gap:.3e} over {} states",
            options.random_states
        ),
    )
}

/// Shared sweep: worst (discord - gap) over seeded random two-qubit states.
pub fn nonseparability_sweep_worst(count: usize, seed: u64) -> f64 {
    let mut sampler = StateSampler::new(seed);
    let mut worst: f64 = f64::NEG_INFINITY;
    for k in 0..count {
        let rho = sampler.two_qubit();
        let basis = WaveParticleBasis::for_subsystem("a", 0.17 * k as f64);
        let result = nonseparability_gap(&rho, &basis.particle).expect("valid context");
        worst = worst.max(result.discord - result.gap);
    }
    worst
}

fn nonseparability_sweep(options: &VerifyOptions) -> CheckResult {
    let worst = nonseparability_sweep_worst(options.random_states, options.seed ^ 0x7);
    CheckResult::from_error(
        "realism.nonseparability_gap",
        1e-6,
        worst,
        format!(
            "worst discord - gap over {} states: {worst:.3e}",
            options.random_states
        ),
    )
}

fn discord_local_unitary_invariance(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0x8);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let rho = sampler.two_qubit();
        let unitary = sampler.qubit_unitary();
        let full = tensor_product(&ComplexMatrix::identity(2), &unitary);
        let rotated = DensityOperator::new(
            full.mul(rho.matrix()).mul(&full.adjoint()),
            rho.factors().to_vec(),
        )
        .expect("unitary conjugation preserves validity");
        let base = discord(&rho, "a").expect("qubit factor").bits;
        let moved = discord(&rotated, "a").expect("qubit factor").bits;
        worst = worst.max((base - moved).abs());
    }
    CheckResult::from_error(
        "realism.discord_local_unitary_invariance",
        1e-6,
        worst,
        format!("max |discord change| under unmeasured-side unitaries: {worst:.3e}"),
    )
}

fn stage_oracles(options: &VerifyOptions) -> CheckResult {
    let mut worst: f64 = 0.0;
    let grid = 17;
    for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
        for i in 0..grid {
            let alpha = PI * i as f64 / (grid - 1) as f64;
            for j in 0..grid {
                let theta = 2.0 * PI * j as f64 / grid as f64;
                let params = CircuitParams::new(alpha, theta).expect("grid in range");
                for stage in [Stage::Inside, Stage::Output] {
                    let built = stage_state_with_gates(kind, params, stage, &options.gates);
                    let ket = match stage {
                        Stage::Inside => analytic_inside_ket(kind, params),
                        _ => analytic_output_ket(kind, params),
                    };
                    let oracle = DensityOperator::from_pure(
                        &ket,
                        vec![Factor::qubit(PATH), Factor::qubit(CONTROLLER)],
                    )
                    .expect("closed forms are normalised");
                    let f = fidelity(&built.state, &oracle).expect("same dims");
                    worst = worst.max(1.0 - f);
                }
            }
        }
    }
    CheckResult::from_error(
        "interferometer.stage_oracles",
        1e-10,
        worst,
        format!("max infidelity to the closed-form kets on a 17x17 grid: {worst:.3e}"),
    )
}

fn pattern_equality() -> CheckResult {
    let grid = 33;
    let mut worst: f64 = 0.0;
    for i in 0..grid {
        let alpha = PI * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let theta = 2.0 * PI * j as f64 / grid as f64;
            let params = CircuitParams::new(alpha, theta).expect("grid in range");
            let delayed = detection_probability(CircuitKind::Qdce, params);
            let controlled = detection_probability(CircuitKind::Qcre, params);
            worst = worst.max((delayed - controlled).abs());
            worst = worst.max((delayed - ideal_pattern(alpha, theta)).abs());
            worst = worst.max((controlled - ideal_pattern(alpha, theta)).abs());
        }
    }
    CheckResult::from_error(
        "interferometer.pattern_equality",
        1e-12,
        worst,
        format!("max pattern disagreement on a 33x33 grid: {worst:.3e}"),
    )
}

fn visibility_sweep() -> CheckResult {
    let mut worst: f64 = 0.0;
    for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
        for i in 0..33 {
            let alpha = PI * i as f64 / 32.0;
            let swept = visibility(kind, alpha, VISIBILITY_RESOLUTION).expect("resolution ok");
            worst = worst.max((swept - (alpha / 2.0).cos().powi(2)).abs());
        }
    }
    CheckResult::from_error(
        "interferometer.visibility",
        1e-6,
        worst,
        format!("max |V - cos^2(alpha/2)| over 33 alphas x 2 circuits: {worst:.3e}"),
    )
}

fn inside_realism_closed_forms() -> CheckResult {
    let mut worst: f64 = 0.0;
    for i in 0..17 {
        let alpha = PI * i as f64 / 16.0;
        let theta = 2.0 * PI * ((i * 7) % 17) as f64 / 17.0;
        let params = CircuitParams::new(alpha, theta).expect("in range");

        let report = realism_inside(CircuitKind::Qdce, params).expect("valid params");
        worst = worst.max((report.wave_realism - 1.0).abs());
        worst = worst.max(report.particle_realism.abs());

        let report = realism_inside(CircuitKind::Qcre, params).expect("valid params");
        let v = (alpha / 2.0).cos().powi(2);
        let wave_expected = 1.0 - binary_entropy((1.0 - v) / 2.0).expect("in range");
        let particle_expected = 1.0 - binary_entropy(v / 2.0).expect("in range");
        worst = worst.max((report.wave_realism - wave_expected).abs());
        worst = worst.max((report.particle_realism - particle_expected).abs());
    }
    CheckResult::from_error(
        "interferometer.inside_realism",
        1e-9,
        worst,
        format!("max deviation from the closed forms over 17 alphas: {worst:.3e}"),
    )
}

fn complementarity_bound_profile() -> CheckResult {
    let mut worst: f64 = f64::NEG_INFINITY;
    for i in 0..33 {
        let alpha = PI * i as f64 / 32.0;
        let params = CircuitParams::new(alpha, 0.6).expect("in range");
        let report = realism_inside(CircuitKind::Qcre, params).expect("valid params");
        let v = (alpha / 2.0).cos().powi(2);
        let rhs = qcre_bound(v).expect("V in range");
        worst = worst.max(report.wave_realism + report.particle_realism - rhs);
    }
    CheckResult::from_error(
        "interferometer.complementarity_bound",
        1e-9,
        worst,
        format!("worst R_W + R_P - bound over 33 alphas: {worst:.3e}"),
    )
}

fn mutual_information_profile() -> CheckResult {
    let mut worst: f64 = 0.0;
    for i in 0..17 {
        let alpha = PI * i as f64 / 16.0;
        let params = CircuitParams::new(alpha, 0.8).expect("in range");

        let delayed = stage_state(CircuitKind::Qdce, params);
        worst = worst.max(
            mutual_information(&delayed.state, &[PATH], &[CONTROLLER])
                .expect("bipartition")
                .abs(),
        );

        let controlled = stage_state(CircuitKind::Qcre, params);
        let mi = mutual_information(&controlled.state, &[PATH], &[CONTROLLER]).expect("bipartition");
        if i == 0 || i == 16 {
            worst = worst.max(mi.abs());
        } else if mi <= 0.0 {
            worst = worst.max(1.0); // interior correlations must be strictly positive
        }
    }
    CheckResult::from_error(
        "interferometer.mutual_information_profile",
        1e-9,
        worst,
        format!("worst profile violation over 17 alphas: {worst:.3e}"),
    )
}

fn stage_state(kind: CircuitKind, params: CircuitParams) -> crate::interferometer::StageState {
    crate::interferometer::stage_state(kind, params, Stage::Inside)
}

fn monotonicity_profile() -> CheckResult {
    let mut previous: Option<(f64, f64, f64)> = None;
    let mut worst: f64 = 0.0;
    for i in 0..65 {
        let alpha = PI * i as f64 / 64.0;
        let params = CircuitParams::new(alpha, 0.3).expect("in range");
        let report = realism_inside(CircuitKind::Qcre, params).expect("valid params");
        let v = visibility(CircuitKind::Qcre, alpha, VISIBILITY_RESOLUTION).expect("resolution");
        if let Some((prev_v, prev_wave, prev_particle)) = previous {
            worst = worst.max(v - prev_v);
            worst = worst.max(report.wave_realism - prev_wave);
            worst = worst.max(prev_particle - report.particle_realism);
        }
        previous = Some((v, report.wave_realism, report.particle_realism));
    }
    CheckResult::from_error(
        "interferometer.monotonicity",
        1e-9,
        worst,
        format!("worst monotonicity violation over 65 alphas: {worst:.3e}"),
    )
}

fn detector_model_check() -> CheckResult {
    let mut worst: f64 = 0.0;
    for &theta in &[0.0, 0.8, 2.9, 5.1] {
        let model = detector_model(theta);
        let basis = WaveParticleBasis::new(theta);
        worst = worst.max(
            realism_of(&model.initial.state, &basis.particle)
                .expect("path factor")
                .abs(),
        );
        worst = worst.max(
            (realism_of(&model.initial.state, &basis.wave).expect("path factor") - 1.0).abs(),
        );
        for k in 0..2 {
            let particle = realism_of(&model.detectors, &detector_particle_observable(k))
                .expect("detector factor");
            let wave =
                realism_of(&model.detectors, &detector_wave_observable(k)).expect("detector factor");
            worst = worst.max((particle - 1.0).abs());
            worst = worst.max(wave.abs());
        }
    }
    CheckResult::from_error(
        "interferometer.detector_model",
        1e-9,
        worst,
        format!("max deviation of detector-model realism values: {worst:.3e}"),
    )
}

fn pulse_reference_equivalence() -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut budget_worst: f64 = 0.0;
    for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
        for i in 0..3 {
            let alpha = PI * i as f64 / 2.0;
            for j in 0..3 {
                let theta = 2.0 * PI * j as f64 / 3.0;
                let sequence = reference_sequence(kind, alpha, theta).expect("bundled file parses");
                let compiled = compile(&sequence).expect("non-empty");
                let ideal = circuit_unitary(
                    kind,
                    CircuitParams::new(alpha, theta).expect("in range"),
                    Stage::Output,
                );
                let check = equivalent_up_to_phase(&compiled.unitary, &ideal, 1e-9)
                    .expect("both unitary");
                worst = worst.max(check.max_deviation);
                budget_worst = budget_worst.max(compiled.budget.total_duration);
            }
        }
    }
    let mut result = CheckResult::from_error(
        "pulse.reference_equivalence",
        1e-9,
        worst,
        format!(
            "max deviation from ideal unitaries on a 9-point grid: {worst:.3e}; \
             longest budget {budget_worst:.4e} s"
        ),
    );
    if budget_worst > 14e-3 {
        result.passed = false;
        result.margin = 14e-3 - budget_worst;
    }
    result
}

fn tomography_roundtrip(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0x9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = sampler.two_qubit();
        let coefficients = pauli_expectations(&rho).expect("two qubits");
        let back = reconstruct(&coefficients);
        worst = worst.max(back.matrix.max_abs_diff(rho.matrix()));
    }
    CheckResult::from_error(
        "tomography.roundtrip",
        1e-12,
        worst,
        format!("max |reconstruct(expectations) - rho| over 100 states: {worst:.3e}"),
    )
}

fn physicality_projection(options: &VerifyOptions) -> CheckResult {
    let mut sampler = StateSampler::new(options.seed ^ 0xA);
    let noise = NoiseModel {
        sigma: 0.02,
        samples: 1,
        seed: options.seed,
    };
    let mut worst: f64 = 0.0;
    for draw in 0..50 {
        let rho = sampler.two_qubit();
        let coefficients = pauli_expectations(&rho).expect("two qubits");
        let raw = reconstruct(&perturb(&coefficients, &noise, draw));
        let projected =
            project_physical(&raw.matrix, rho.factors().to_vec()).expect("valid projection");
        // Idempotence.
        let twice = project_physical(projected.matrix(), rho.factors().to_vec())
            .expect("valid projection");
        worst = worst.max(projected.matrix().max_abs_diff(twice.matrix()));
        // Distance must not grow under repeated application.
        let d1 = projected.matrix().max_abs_diff(&raw.matrix);
        let d2 = twice.matrix().max_abs_diff(&raw.matrix);
        worst = worst.max(d2 - d1 - 1e-13);
    }
    CheckResult::from_error(
        "tomography.physicality_projection",
        1e-12,
        worst,
        format!("worst idempotence/contraction violation over 50 draws: {worst:.3e}"),
    )
}

fn monte_carlo_determinism() -> CheckResult {
    let params = CircuitParams::new(1.1, 0.5).expect("in range");
    let noise = NoiseModel {
        sigma: 0.01,
        samples: 25,
        seed: 31,
    };
    let a = monte_carlo_realism(CircuitKind::Qcre, params, &noise).expect("valid run");
    let b = monte_carlo_realism(CircuitKind::Qcre, params, &noise).expect("valid run");
    let identical = a == b;
    CheckResult {
        name: "tomography.monte_carlo_determinism",
        passed: identical,
        margin: if identical { 0.0 } else { -1.0 },
        tolerance: 0.0,
        detail: "two runs with identical (seed, params, noise) must agree bitwise".into(),
    }
}

fn monte_carlo_consistency() -> CheckResult {
    let params = CircuitParams::new(PI / 2.0, 0.0).expect("in range");
    let report = monte_carlo_realism(CircuitKind::Qcre, params, &NoiseModel::default())
        .expect("valid run");
    let ideal = 0.18872187554086717;
    let mut worst: f64 = f64::NEG_INFINITY;
    for stats in [report.wave_realism, report.particle_realism] {
        worst = worst.max((stats.mean - ideal).abs() - 3.0 * stats.std);
        if stats.std <= 0.0 {
            worst = worst.max(1.0);
        }
    }
    CheckResult::from_error(
        "tomography.monte_carlo_consistency",
        0.0,
        worst,
        format!(
            "R_W mean {:.6} (std {:.6}), R_P mean {:.6} (std {:.6}) vs ideal {ideal:.6}",
            report.wave_realism.mean,
            report.wave_realism.std,
            report.particle_realism.mean,
            report.particle_realism.std
        ),
    )
}

fn monte_carlo_convergence() -> CheckResult {
    let params = CircuitParams::new(PI / 2.0, 0.0).expect("in range");
    let ideal = 0.18872187554086717;
    let mut biases = Vec::new();
    for &sigma in &[0.02, 0.01, 0.005] {
        let noise = NoiseModel {
            sigma,
            samples: 100,
            seed: 7,
        };
        let report =
            monte_carlo_realism(CircuitKind::Qcre, params, &noise).expect("valid run");
        biases.push((report.wave_realism.mean - ideal).abs());
    }
    let mut worst: f64 = f64::NEG_INFINITY;
    for pair in biases.windows(2) {
        worst = worst.max(pair[1] - pair[0]);
    }
    CheckResult::from_error(
        "tomography.monte_carlo_convergence",
        0.0,
        worst,
        format!(
            "|mean - ideal| at sigma 0.02/0.01/0.005: {:.3e}, {:.3e}, {:.3e}",
            biases[0], biases[1], biases[2]
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        // Small sweep count keeps this unit test quick; the acceptance test
        // runs the full 1000-state configuration.
        let options = VerifyOptions {
            random_states: 40,
            ..VerifyOptions::default()
        };
        let results = run_all(&options);
        assert_eq!(results.len(), 23);
        for result in &results {
            assert!(
                result.passed,
                "{} failed: margin {:.3e}, {}",
                result.name, result.margin, result.detail
            );
        }
    }

    #[test]
    fn perturbed_gate_set_fails_the_stage_oracles() {
        let wrong = ComplexMatrix::from_rows(&[
            &[
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
            &[
                Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
        ]);
        let options = VerifyOptions {
            gates: GateSet::with_superposition(wrong).unwrap(),
            random_states: 10,
            ..VerifyOptions::default()
        };
        let results = run_all(&options);
        let oracle = results
            .iter()
            .find(|r| r.name == "interferometer.stage_oracles")
            .expect("check present");
        assert!(!oracle.passed, "perturbed gates must fail the oracle");
        assert!(results.iter().any(|r| !r.passed));
    }
}
