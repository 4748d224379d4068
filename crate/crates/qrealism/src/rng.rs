//! Seeded, portable randomness.
//!
//! All randomness in the crate flows through [`SeededRng`], a thin wrapper
//! around ChaCha8. ChaCha is specified byte-for-byte, so a (seed, stream)
//! pair reproduces the same draws on every platform and every run. Gaussian
//! variates come from an explicit Box–Muller transform rather than a
//! library distribution, keeping the byte-level output independent of
//! dependency internals.

use crate::qmath::{ComplexMatrix, DensityOperator, Factor};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

/// Deterministic random source: ChaCha8 keyed by (seed, stream).
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
    spare_gaussian: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream for the same seed; used to decorrelate parallel
    /// draws (one stream per Monte Carlo draw index).
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            inner,
            spare_gaussian: None,
        }
    }

    /// Uniform draw in [0, 1) with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal draw via Box–Muller; pairs are cached.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }
}

/// Random quantum states drawn from a [`SeededRng`].
#[derive(Debug)]
pub struct StateSampler {
    rng: SeededRng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SeededRng::new(seed),
        }
    }

    pub fn rng(&mut self) -> &mut SeededRng {
        &mut self.rng
    }

    /// Haar-random pure state over the given factors.
    pub fn pure(&mut self, factors: &[Factor]) -> DensityOperator {
        let dim: usize = factors.iter().map(|f| f.dim).product();
        let mut amplitudes = vec![Complex64::ZERO; dim];
        loop {
            for a in amplitudes.iter_mut() {
                *a = self.rng.complex_gaussian();
            }
            let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
            if norm > 1e-12 {
                let scale = 1.0 / norm.sqrt();
                for a in amplitudes.iter_mut() {
                    *a *= scale;
                }
                break;
            }
        }
        DensityOperator::from_pure(&ComplexMatrix::ket(&amplitudes), factors.to_vec())
            .expect("normalised ket yields a valid state")
    }

    /// Full-rank mixed state from the Ginibre ensemble (G G† normalised).
    pub fn mixed(&mut self, factors: &[Factor]) -> DensityOperator {
        let dim: usize = factors.iter().map(|f| f.dim).product();
        loop {
            let g = ComplexMatrix::from_fn(dim, dim, |_, _| self.rng.complex_gaussian());
            let gram = g.mul(&g.adjoint());
            let trace = gram.trace().re;
            if trace <= 1e-9 {
                continue;
            }
            let normalised = gram.scale(Complex64::new(1.0 / trace, 0.0));
            // Symmetrise away the last bits of roundoff before validation.
            let hermitian = normalised
                .add(&normalised.adjoint())
                .scale(Complex64::new(0.5, 0.0));
            if let Ok(state) = DensityOperator::new(hermitian, factors.to_vec()) {
                return state;
            }
        }
    }

    /// Random two-qubit state over factors (a, b); 50/50 pure or mixed.
    pub fn two_qubit(&mut self) -> DensityOperator {
        let factors = [Factor::qubit("a"), Factor::qubit("b")];
        if self.rng.uniform() < 0.5 {
            self.pure(&factors)
        } else {
            self.mixed(&factors)
        }
    }

    /// Haar-like random single-qubit unitary.
    pub fn qubit_unitary(&mut self) -> ComplexMatrix {
        // Random ket and a phase-orthogonal partner form a unitary.
        let theta = self.rng.uniform_in(0.0, std::f64::consts::PI);
        let phi = self.rng.uniform_in(0.0, 2.0 * std::f64::consts::PI);
        let lambda = self.rng.uniform_in(0.0, 2.0 * std::f64::consts::PI);
        let (s, c) = (theta / 2.0).sin_cos();
        let eip = Complex64::from_polar(1.0, phi);
        let eil = Complex64::from_polar(1.0, lambda);
        ComplexMatrix::from_rows(&[
            &[Complex64::new(c, 0.0), -eil * s],
            &[eip * s, eip * eil * c],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible() {
        let mut a = SeededRng::with_stream(42, 7);
        let mut b = SeededRng::with_stream(42, 7);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
        let mut c = SeededRng::with_stream(42, 8);
        assert_ne!(a.uniform().to_bits(), c.uniform().to_bits());
    }

    #[test]
    fn gaussian_moments() {
        let mut rng = SeededRng::new(11);
        let n = 20_000;
        let draws: Vec<f64> = (0..n).map(|_| rng.gaussian()).collect();
        let mean: f64 = draws.iter().sum::<f64>() / n as f64;
        let var: f64 = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn sampled_states_are_valid() {
        let mut sampler = StateSampler::new(3);
        for _ in 0..20 {
            let rho = sampler.two_qubit();
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        }
        let u = sampler.qubit_unitary();
        assert!(u.unitarity_defect() < 1e-12);
    }
}
