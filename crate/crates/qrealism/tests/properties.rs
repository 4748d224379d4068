//! Property-based invariants over randomly generated states and parameters.

use num_complex::Complex64;
use proptest::prelude::*;
use qrealism::interferometer::{
    stage_state, visibility_of_state, CircuitKind, CircuitParams, Stage, WaveParticleBasis,
};
use qrealism::pulse::{equivalent_up_to_phase, rotation_unitary, Axis, Nucleus};
use qrealism::qmath::{
    binary_entropy, partial_trace, tensor_product, von_neumann_entropy, ComplexMatrix,
    DensityOperator, Factor,
};
use qrealism::realism::{dephase, discord, nonseparability_gap, RealismContext};
use qrealism::tomography::project_to_simplex;

/// Two-qubit Ginibre state from a vector of raw Gaussian-ish entries.
fn state_from_entries(entries: &[(f64, f64)]) -> Option<DensityOperator> {
    let g = ComplexMatrix::from_fn(4, 4, |i, j| {
        let (re, im) = entries[i * 4 + j];
        Complex64::new(re, im)
    });
    let gram = g.mul(&g.adjoint());
    let trace = gram.trace().re;
    if trace < 1e-6 {
        return None;
    }
    let normalised = gram.scale(Complex64::new(1.0 / trace, 0.0));
    let hermitian = normalised
        .add(&normalised.adjoint())
        .scale(Complex64::new(0.5, 0.0));
    DensityOperator::new(hermitian, vec![Factor::qubit("a"), Factor::qubit("b")]).ok()
}

fn entry() -> impl Strategy<Value = (f64, f64)> {
    ((-3.0..3.0f64), (-3.0..3.0f64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_stays_in_range(entries in proptest::collection::vec(entry(), 16)) {
        prop_assume!(state_from_entries(&entries).is_some());
        let rho = state_from_entries(&entries).unwrap();
        let entropy = von_neumann_entropy(&rho);
        prop_assert!(entropy >= 0.0);
        prop_assert!(entropy <= 2.0 + 1e-9);
    }

    #[test]
    fn partial_trace_preserves_trace(entries in proptest::collection::vec(entry(), 16)) {
        prop_assume!(state_from_entries(&entries).is_some());
        let rho = state_from_entries(&entries).unwrap();
        for keep in [["a"], ["b"]] {
            let reduced = partial_trace(&rho, &keep).unwrap();
            prop_assert!((reduced.matrix().trace().re - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn tensor_then_trace_returns_first_factor(
        a_entries in proptest::collection::vec(entry(), 4),
        b_entries in proptest::collection::vec(entry(), 4),
    ) {
        let build = |entries: &[(f64, f64)], name: &str| {
            let g = ComplexMatrix::from_fn(2, 2, |i, j| {
                let (re, im) = entries[i * 2 + j];
                Complex64::new(re, im)
            });
            let gram = g.mul(&g.adjoint());
            let trace = gram.trace().re;
            if trace < 1e-6 {
                return None;
            }
            let normalised = gram.scale(Complex64::new(1.0 / trace, 0.0));
            let hermitian = normalised.add(&normalised.adjoint()).scale(Complex64::new(0.5, 0.0));
            DensityOperator::new(hermitian, vec![Factor::qubit(name)]).ok()
        };
        prop_assume!(build(&a_entries, "a").is_some() && build(&b_entries, "b").is_some());
        let a = build(&a_entries, "a").unwrap();
        let b = build(&b_entries, "b").unwrap();
        let joint = DensityOperator::new(
            tensor_product(a.matrix(), b.matrix()),
            vec![Factor::qubit("a"), Factor::qubit("b")],
        ).unwrap();
        let back = partial_trace(&joint, &["a"]).unwrap();
        prop_assert!(back.matrix().max_abs_diff(a.matrix()) <= 1e-10);
    }

    #[test]
    fn dephasing_is_idempotent_and_raises_entropy(
        entries in proptest::collection::vec(entry(), 16),
        theta in 0.0..std::f64::consts::TAU,
    ) {
        prop_assume!(state_from_entries(&entries).is_some());
        let rho = state_from_entries(&entries).unwrap();
        let basis = WaveParticleBasis::for_subsystem("a", theta);
        let ctx = RealismContext::new(&rho, &basis.wave).unwrap();
        let once = dephase(&ctx);
        let twice = dephase(&RealismContext::new(&once, &basis.wave).unwrap());
        prop_assert!(once.matrix().max_abs_diff(twice.matrix()) <= 1e-10);
        prop_assert!(von_neumann_entropy(&once) >= von_neumann_entropy(&rho) - 1e-9);
    }

    #[test]
    fn discord_bounds_the_nonseparability_gap(entries in proptest::collection::vec(entry(), 16)) {
        prop_assume!(state_from_entries(&entries).is_some());
        let rho = state_from_entries(&entries).unwrap();
        let result = discord(&rho, "a").unwrap();
        prop_assert!(result.bits >= -1e-6);
        let basis = WaveParticleBasis::for_subsystem("a", 0.0);
        let gap = nonseparability_gap(&rho, &basis.particle).unwrap();
        prop_assert!(gap.gap >= gap.discord - 1e-6);
    }

    #[test]
    fn binary_entropy_is_symmetric(u in 0.0..=1.0f64) {
        let h = binary_entropy(u).unwrap();
        let mirrored = binary_entropy(1.0 - u).unwrap();
        prop_assert!((h - mirrored).abs() <= 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&h));
    }

    #[test]
    fn ideal_visibility_matches_the_cosine_law(
        alpha in 0.0..=std::f64::consts::PI,
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let params = CircuitParams::new(alpha, theta).unwrap();
        for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
            let inside = stage_state(kind, params, Stage::Inside);
            let v = visibility_of_state(kind, &inside.state).unwrap();
            prop_assert!((v - (alpha / 2.0).cos().powi(2)).abs() <= 1e-9);
        }
    }

    #[test]
    fn phase_equivalence_detects_pure_phases(
        phase in -std::f64::consts::PI..std::f64::consts::PI,
        alpha in 0.0..=std::f64::consts::PI,
    ) {
        let u = rotation_unitary(Nucleus::Hydrogen, Axis::Y, alpha);
        let shifted = u.scale(Complex64::from_polar(1.0, phase));
        let check = equivalent_up_to_phase(&shifted, &u, 1e-9).unwrap();
        prop_assert!(check.equal);
        // Wrap-around safe phase comparison.
        let difference = (check.phase - phase).rem_euclid(std::f64::consts::TAU);
        let distance = difference.min(std::f64::consts::TAU - difference);
        prop_assert!(distance <= 1e-9);
    }

    #[test]
    fn simplex_projection_outputs_probability_vectors(
        values in proptest::collection::vec(-1.0..2.0f64, 4),
    ) {
        let projected = project_to_simplex(&values);
        let total: f64 = projected.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        prop_assert!(projected.iter().all(|&v| v >= 0.0));
        // Projection is idempotent.
        let twice = project_to_simplex(&projected);
        for (a, b) in projected.iter().zip(&twice) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}
