//! Simulated two-qubit state tomography with Gaussian coefficient noise and
//! Monte Carlo propagation of that noise into the realism quantifiers.
//!
//! A state is represented by its Pauli correlators c[i][j] = Tr[rho
//! (sigma_i ⊗ sigma_j)]. Noise draws add independent Gaussians to the 15
//! non-identity correlators, mirroring a per-element uncertainty of about
//! sigma on the reconstructed density matrix. Linear inversion then yields a
//! Hermitian unit-trace matrix that need not be positive; a projection of
//! its spectrum onto the probability simplex restores physicality before any
//! quantity is evaluated. Every draw is keyed by (seed, draw index), so
//! reports are bitwise reproducible.

use crate::interferometer::{
    final_device, pattern_of_state, stage_state, CircuitKind, CircuitParams, Stage,
    WaveParticleBasis,
};
use crate::qmath::{
    eigh, sigma_x, sigma_y, sigma_z, tensor_product, ComplexMatrix, DensityOperator, Factor,
    HERMITICITY_TOL, PSD_SLACK, TRACE_TOL,
};
use crate::realism::realism_of;
use crate::rng::SeededRng;
use crate::{Error, Result};
use num_complex::Complex64;

/// Pauli operator labels indexing [`PauliCoefficients`].
pub const PAULI_LABELS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Two-qubit Pauli correlators; c[0][0] is fixed to 1 by normalisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoefficients {
    pub c: [[f64; 4]; 4],
}

/// Gaussian tomography-noise model: per-coefficient standard deviation,
/// number of Monte Carlo draws, and the seed all randomness flows from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            sigma: 0.01,
            samples: 100,
            seed: 7,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(Error::OutOfRange {
                name: "sigma",
                value: self.sigma,
                range: "[0, ...)",
            });
        }
        if self.samples < 1 {
            return Err(Error::OutOfRange {
                name: "samples",
                value: self.samples as f64,
                range: "[1, ...)",
            });
        }
        Ok(())
    }
}

fn pauli(i: usize) -> ComplexMatrix {
    match i {
        0 => ComplexMatrix::identity(2),
        1 => sigma_x(),
        2 => sigma_y(),
        _ => sigma_z(),
    }
}

/// Measures all sixteen two-qubit Pauli correlators of a state.
pub fn pauli_expectations(rho: &DensityOperator) -> Result<PauliCoefficients> {
    if rho.dim() != 4 || rho.factors().len() != 2 {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 4,
        });
    }
    let mut c = [[0.0; 4]; 4];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, value) in row.iter_mut().enumerate() {
            let op = tensor_product(&pauli(i), &pauli(j));
            *value = op.mul(rho.matrix()).trace().re;
        }
    }
    Ok(PauliCoefficients { c })
}

/// Adds an independent Gaussian(0, sigma) to every non-identity coefficient.
/// The draw is a pure function of (noise.seed, draw_index).
pub fn perturb(
    coefficients: &PauliCoefficients,
    noise: &NoiseModel,
    draw_index: usize,
) -> PauliCoefficients {
    let mut rng = SeededRng::with_stream(noise.seed, draw_index as u64);
    let mut out = *coefficients;
    for i in 0..4 {
        for j in 0..4 {
            if i == 0 && j == 0 {
                continue;
            }
            out.c[i][j] += noise.sigma * rng.gaussian();
        }
    }
    out
}

/// Linear inversion rho = (1/4) Σ c_ij sigma_i ⊗ sigma_j. The result is
/// Hermitian with unit trace but, under noise, not necessarily positive.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
    /// False when the spectrum dips below the PSD slack and the state needs
    /// a physicality projection.
    pub physical: bool,
}

pub fn reconstruct(coefficients: &PauliCoefficients) -> Reconstruction {
    let mut matrix = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let weight = Complex64::new(coefficients.c[i][j] / 4.0, 0.0);
            matrix = matrix.add(&tensor_product(&pauli(i), &pauli(j)).scale(weight));
        }
    }
    let min_eigenvalue = eigh(&matrix)
        .expect("Pauli combination is Hermitian")
        .eigenvalues[0];
    Reconstruction {
        matrix,
        min_eigenvalue,
        physical: min_eigenvalue >= -PSD_SLACK,
    }
}

/// Euclidean projection onto the probability simplex by the sorted
/// cumulative (water-filling) rule.
pub fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (j, &value) in sorted.iter().enumerate() {
        cumulative += value;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if value - candidate > 0.0 {
            threshold = candidate;
        }
    }
    values
        .iter()
        .map(|&v| (v - threshold).max(0.0))
        .collect()
}

/// Nearest physical state: eigendecompose, project the spectrum onto the
/// probability simplex, reassemble. Idempotent.
pub fn project_physical(matrix: &ComplexMatrix, factors: Vec<Factor>) -> Result<DensityOperator> {
    let deviation = matrix.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: HERMITICITY_TOL,
        });
    }
    let trace = matrix.trace().re;
    if (trace - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidTrace {
            trace,
            tolerance: TRACE_TOL,
        });
    }
    let decomposition = eigh(matrix)?;
    let projected = project_to_simplex(&decomposition.eigenvalues);
    let n = matrix.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &weight) in projected.iter().enumerate() {
        if weight == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = decomposition.eigenvectors[(i, k)];
            for j in 0..n {
                out[(i, j)] += vik * decomposition.eigenvectors[(j, k)].conj() * weight;
            }
        }
    }
    let symmetric = out.add(&out.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityOperator::new(symmetric, factors)
}

/// Mean and standard deviation of one propagated quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantityStats {
    pub mean: f64,
    pub std: f64,
}

/// Monte Carlo error report for one circuit point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloReport {
    pub wave_realism: QuantityStats,
    pub particle_realism: QuantityStats,
    pub visibility: QuantityStats,
    pub detection_probability: QuantityStats,
    pub samples: usize,
}

/// Propagates tomography noise through the full analysis chain: perturb the
/// correlators, invert, restore physicality, evaluate wave/particle realism,
/// visibility, and the detection probability. Quantities are clamped to
/// their physical ranges before aggregation.
pub fn monte_carlo_realism(
    kind: CircuitKind,
    params: CircuitParams,
    noise: &NoiseModel,
) -> Result<MonteCarloReport> {
    noise.validate()?;
    let inside = stage_state(kind, params, Stage::Inside).state;
    let ideal = pauli_expectations(&inside)?;
    let basis = WaveParticleBasis::new(params.theta);
    let device = final_device(kind);
    let factors = inside.factors().to_vec();

    let mut wave = Vec::with_capacity(noise.samples);
    let mut particle = Vec::with_capacity(noise.samples);
    let mut visibility = Vec::with_capacity(noise.samples);
    let mut detection = Vec::with_capacity(noise.samples);

    for draw in 0..noise.samples {
        let perturbed = perturb(&ideal, noise, draw);
        let raw = reconstruct(&perturbed);
        let state = project_physical(&raw.matrix, factors.clone())?;

        wave.push(realism_of(&state, &basis.wave)?.clamp(0.0, 1.0));
        particle.push(realism_of(&state, &basis.particle)?.clamp(0.0, 1.0));
        visibility.push(
            crate::interferometer::visibility_of_state(kind, &state)?.clamp(0.0, 1.0),
        );
        detection.push(pattern_of_state(&state, &device, 0.0).clamp(0.0, 1.0));
    }

    Ok(MonteCarloReport {
        wave_realism: stats(&wave),
        particle_realism: stats(&particle),
        visibility: stats(&visibility),
        detection_probability: stats(&detection),
        samples: noise.samples,
    })
}

/// Sample statistics with compensated summation; std uses n - 1 weighting.
fn stats(values: &[f64]) -> QuantityStats {
    let n = values.len();
    let mean = neumaier_sum(values.iter().copied()) / n as f64;
    if n < 2 {
        return QuantityStats { mean, std: 0.0 };
    }
    let squared = neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    QuantityStats {
        mean,
        std: (squared / (n - 1) as f64).sqrt(),
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for value in values {
        let t = sum + value;
        if sum.abs() >= value.abs() {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StateSampler;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn params(alpha: f64, theta: f64) -> CircuitParams {
        CircuitParams::new(alpha, theta).unwrap()
    }

    #[test]
    fn pauli_expectations_reference_states() {
        let mixed =
            DensityOperator::maximally_mixed(vec![Factor::qubit("a"), Factor::qubit("b")])
                .unwrap();
        let c = pauli_expectations(&mixed).unwrap().c;
        for (i, row) in c.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                let expected = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert!((value - expected).abs() < 1e-12, "({i},{j})");
            }
        }

        let zero_zero = DensityOperator::from_pure(
            &ComplexMatrix::basis_ket(4, 0),
            vec![Factor::qubit("a"), Factor::qubit("b")],
        )
        .unwrap();
        let c = pauli_expectations(&zero_zero).unwrap().c;
        assert!((c[3][0] - 1.0).abs() < 1e-12);
        assert!((c[0][3] - 1.0).abs() < 1e-12);
        assert!((c[3][3] - 1.0).abs() < 1e-12);
        assert!((c[1][1]).abs() < 1e-12);

        let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let bell = DensityOperator::from_pure(
            &ComplexMatrix::ket(&[amp, Complex64::ZERO, Complex64::ZERO, amp]),
            vec![Factor::qubit("a"), Factor::qubit("b")],
        )
        .unwrap();
        let c = pauli_expectations(&bell).unwrap().c;
        assert!((c[1][1] - 1.0).abs() < 1e-12);
        assert!((c[2][2] + 1.0).abs() < 1e-12);
        assert!((c[3][3] - 1.0).abs() < 1e-12);

        let single = DensityOperator::maximally_mixed(vec![Factor::qubit("a")]).unwrap();
        assert!(pauli_expectations(&single).is_err());
    }

    #[test]
    fn reconstruction_inverts_expectations() {
        let mut sampler = StateSampler::new(5);
        for _ in 0..25 {
            let rho = sampler.two_qubit();
            let c = pauli_expectations(&rho).unwrap();
            let back = reconstruct(&c);
            assert!(back.matrix.max_abs_diff(rho.matrix()) < 1e-12);
            assert!(back.physical);
        }

        let uniform = reconstruct(&PauliCoefficients {
            c: {
                let mut c = [[0.0; 4]; 4];
                c[0][0] = 1.0;
                c
            },
        });
        assert!(
            uniform
                .matrix
                .max_abs_diff(&ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)))
                < 1e-15
        );
    }

    #[test]
    fn perturbation_is_deterministic_and_unbiased() {
        let noise = NoiseModel {
            sigma: 0.01,
            samples: 100,
            seed: 42,
        };
        let base = PauliCoefficients {
            c: {
                let mut c = [[0.0; 4]; 4];
                c[0][0] = 1.0;
                c
            },
        };

        let silent = perturb(
            &base,
            &NoiseModel {
                sigma: 0.0,
                ..noise
            },
            3,
        );
        assert_eq!(silent, base);

        let a = perturb(&base, &noise, 11);
        let b = perturb(&base, &noise, 11);
        assert_eq!(a, b);
        let other = perturb(&base, &noise, 12);
        assert_ne!(a, other);
        assert_eq!(a.c[0][0], 1.0);

        // Sample std of one coefficient across many draws.
        let draws = 10_000;
        let values: Vec<f64> = (0..draws)
            .map(|d| perturb(&base, &noise, d).c[1][2])
            .collect();
        let mean: f64 = values.iter().sum::<f64>() / draws as f64;
        let std = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (draws - 1) as f64)
            .sqrt();
        assert!(std > 0.0097 && std < 0.0103, "sample std {std}");
    }

    #[test]
    fn noisy_pure_state_reconstruction_is_flagged() {
        let inside = stage_state(CircuitKind::Qcre, params(PI / 2.0, 0.0), Stage::Inside).state;
        let ideal = pauli_expectations(&inside).unwrap();
        let noise = NoiseModel {
            sigma: 0.01,
            samples: 100,
            seed: 7,
        };
        // Noise around a pure state typically pushes one eigenvalue negative;
        // across 20 seeded draws at least one must be flagged.
        let flagged = (0..20)
            .map(|d| reconstruct(&perturb(&ideal, &noise, d)))
            .filter(|r| !r.physical && r.min_eigenvalue < -PSD_SLACK)
            .count();
        assert!(flagged > 0, "no draw was flagged unphysical");
    }

    #[test]
    fn simplex_projection_rule() {
        let projected = project_to_simplex(&[1.02, 0.01, -0.02, -0.01]);
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (got, want) in projected.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{projected:?}");
        }

        let unchanged = project_to_simplex(&[0.6, 0.4, 0.0, 0.0]);
        for (got, want) in unchanged.iter().zip([0.6, 0.4, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        // General case: output is a probability vector.
        let projected = project_to_simplex(&[0.7, 0.5, -0.1, -0.1]);
        let total: f64 = projected.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(projected.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn physicality_projection_is_idempotent() {
        let inside = stage_state(CircuitKind::Qcre, params(1.1, 0.4), Stage::Inside).state;
        let ideal = pauli_expectations(&inside).unwrap();
        let noise = NoiseModel {
            sigma: 0.02,
            samples: 1,
            seed: 3,
        };
        let raw = reconstruct(&perturb(&ideal, &noise, 0));
        let factors = inside.factors().to_vec();
        let projected = project_physical(&raw.matrix, factors.clone()).unwrap();
        let twice = project_physical(projected.matrix(), factors.clone()).unwrap();
        assert!(projected.matrix().max_abs_diff(twice.matrix()) < 1e-12);

        // Already-physical states pass through unchanged.
        let same = project_physical(inside.matrix(), factors).unwrap();
        assert!(same.matrix().max_abs_diff(inside.matrix()) < 1e-12);
    }

    #[test]
    fn monte_carlo_zero_noise_matches_ideal() {
        let p = params(PI / 2.0, 0.0);
        let noise = NoiseModel {
            sigma: 0.0,
            samples: 5,
            seed: 1,
        };
        let report = monte_carlo_realism(CircuitKind::Qcre, p, &noise).unwrap();
        assert!((report.wave_realism.mean - 0.18872187554086717).abs() < 1e-9);
        assert_eq!(report.wave_realism.std, 0.0);
        assert!((report.particle_realism.mean - 0.18872187554086717).abs() < 1e-9);
        assert!((report.visibility.mean - 0.5).abs() < 1e-6);
        assert!((report.detection_probability.mean - 0.75).abs() < 1e-12);
        assert_eq!(report.samples, 5);
    }

    #[test]
    fn monte_carlo_reports_are_bitwise_reproducible() {
        let p = params(1.2, 0.9);
        let noise = NoiseModel {
            sigma: 0.01,
            samples: 20,
            seed: 99,
        };
        let a = monte_carlo_realism(CircuitKind::Qcre, p, &noise).unwrap();
        let b = monte_carlo_realism(CircuitKind::Qcre, p, &noise).unwrap();
        assert_eq!(a, b);
        assert!(a.wave_realism.std > 0.0);
    }

    #[test]
    fn monte_carlo_delayed_choice_envelope() {
        // Noise pulls the entropic quantities slightly off their extremes;
        // the delayed-choice wave realism stays near 1 and particle realism
        // near 0.
        let noise = NoiseModel::default();
        for &alpha in &[0.0, PI / 2.0, PI] {
            let report =
                monte_carlo_realism(CircuitKind::Qdce, params(alpha, 0.5), &noise).unwrap();
            assert!(
                report.wave_realism.mean >= 0.95,
                "alpha {alpha}: {}",
                report.wave_realism.mean
            );
            assert!(
                report.particle_realism.mean <= 0.1,
                "alpha {alpha}: {}",
                report.particle_realism.mean
            );
        }
    }
}
