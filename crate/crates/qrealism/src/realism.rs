//! Operational realism quantifiers, correlation measures, and the
//! complementarity bounds relating them.
//!
//! The central object is the dephasing map Φ_A, the projective-measurement
//! channel without outcome readout. Its fixed points are the states in which
//! observable A is an element of reality. The irrealism of a context
//! {A, rho} is the entropy gained under full dephasing,
//!
//! > I_A(rho) = S(Φ_A(rho)) - S(rho),
//!
//! and the realism is its complement R_A = log2(d_A) - I_A. Quantum discord
//! is the minimum mutual-information loss under projective measurement of one
//! qubit; it lower-bounds the non-separability gap I_A(rho) - I_A(rho_A).

use crate::qmath::{
    self, binary_entropy, embed_on_factor, partial_trace, von_neumann_entropy, ComplexMatrix,
    DensityOperator, ProjectiveObservable, EIGENVALUE_CLIP,
};
use crate::{Error, Result};
use num_complex::Complex64;

/// Tolerance on the mutual-unbiasedness precondition of [`bound_incompatible`].
pub const UNBIASED_TOL: f64 = 1e-9;

/// Grid resolution of the discord optimiser: polar x azimuthal points.
pub const DISCORD_GRID: (usize, usize) = (64, 128);
/// Objective tolerance of the discord simplex refinement.
pub const DISCORD_FTOL: f64 = 1e-7;

/// A state paired with the observable whose reality is under scrutiny.
#[derive(Debug, Clone)]
pub struct RealismContext<'a> {
    state: &'a DensityOperator,
    observable: &'a ProjectiveObservable,
    position: usize,
}

impl<'a> RealismContext<'a> {
    pub fn new(state: &'a DensityOperator, observable: &'a ProjectiveObservable) -> Result<Self> {
        let position = state.factor_position(observable.subsystem())?;
        let local_dim = state.factors()[position].dim;
        if local_dim != observable.local_dim() {
            return Err(Error::DimensionMismatch {
                left: local_dim,
                right: observable.local_dim(),
            });
        }
        Ok(Self {
            state,
            observable,
            position,
        })
    }

    pub fn state(&self) -> &DensityOperator {
        self.state
    }

    pub fn observable(&self) -> &ProjectiveObservable {
        self.observable
    }

    /// log2 of the measured subsystem's dimension: the realism scale.
    pub fn log_dim(&self) -> f64 {
        (self.observable.local_dim() as f64).log2()
    }
}

/// Full dephasing Φ_A(rho) = Σ_a (A_a ⊗ 1) rho (A_a ⊗ 1).
pub fn dephase(ctx: &RealismContext) -> DensityOperator {
    let factors = ctx.state.factors();
    let mut out = ComplexMatrix::zeros(ctx.state.dim(), ctx.state.dim());
    for projector in ctx.observable.projectors() {
        let full = embed_on_factor(projector, factors, ctx.position);
        out = out.add(&full.mul(ctx.state.matrix()).mul(&full));
    }
    // Roundoff symmetrisation; the sandwich is Hermitian in exact arithmetic.
    let symmetric = out.add(&out.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityOperator::new(symmetric, factors.to_vec())
        .expect("dephasing preserves density-operator invariants")
}

/// Irrealism I_A(rho) = S(Φ_A(rho)) - S(rho), in bits.
pub fn irrealism(ctx: &RealismContext) -> f64 {
    von_neumann_entropy(&dephase(ctx)) - von_neumann_entropy(ctx.state)
}

/// Realism R_A(rho) = log2(d_A) - I_A(rho), in bits.
pub fn realism(ctx: &RealismContext) -> f64 {
    ctx.log_dim() - irrealism(ctx)
}

/// Convenience wrapper building the context on the fly.
pub fn realism_of(state: &DensityOperator, observable: &ProjectiveObservable) -> Result<f64> {
    Ok(realism(&RealismContext::new(state, observable)?))
}

/// Convenience wrapper building the context on the fly.
pub fn irrealism_of(state: &DensityOperator, observable: &ProjectiveObservable) -> Result<f64> {
    Ok(irrealism(&RealismContext::new(state, observable)?))
}

/// Mutual information I_{A:B} = S(rho_A) + S(rho_B) - S(rho) across a
/// bipartition that must cover every factor exactly once.
pub fn mutual_information(
    rho: &DensityOperator,
    part_a: &[&str],
    part_b: &[&str],
) -> Result<f64> {
    let mut seen: Vec<usize> = Vec::new();
    for name in part_a.iter().chain(part_b.iter()) {
        let pos = rho.factor_position(name)?;
        if seen.contains(&pos) {
            return Err(Error::BadBipartition);
        }
        seen.push(pos);
    }
    if seen.len() != rho.factors().len() || part_a.is_empty() || part_b.is_empty() {
        return Err(Error::BadBipartition);
    }
    let rho_a = partial_trace(rho, part_a)?;
    let rho_b = partial_trace(rho, part_b)?;
    Ok(von_neumann_entropy(&rho_a) + von_neumann_entropy(&rho_b) - von_neumann_entropy(rho))
}

/// Result of the discord minimisation.
#[derive(Debug, Clone, Copy)]
pub struct DiscordResult {
    /// Minimum mutual-information drop, in bits.
    pub bits: f64,
    /// Polar angle of the minimising measurement axis.
    pub basis_theta: f64,
    /// Azimuthal angle of the minimising measurement axis.
    pub basis_phi: f64,
}

/// Quantum discord D_A(rho) = min over projective qubit measurements of
/// I_{A:B}(rho) - I_{A:B}(Φ_A(rho)), minimised by a Bloch-angle grid search
/// followed by Nelder–Mead refinement.
pub fn discord(rho: &DensityOperator, measured: &str) -> Result<DiscordResult> {
    let position = rho.factor_position(measured)?;
    let local_dim = rho.factors()[position].dim;
    if local_dim != 2 {
        return Err(Error::NonQubitMeasurement(local_dim));
    }
    if rho.factors().len() < 2 {
        return Err(Error::BadBipartition);
    }

    // Bring the measured qubit to the front once; the objective then only
    // touches contiguous blocks.
    let front = front_ordered(rho, position);
    let other_dim = rho.dim() / 2;

    let rho_a = partial_trace(rho, &[measured])?;
    let base = von_neumann_entropy(&rho_a) - von_neumann_entropy(rho);

    let objective =
        |theta: f64, phi: f64| conditional_entropy_after_measurement(&front, other_dim, theta, phi);

    let (n_theta, n_phi) = DISCORD_GRID;
    let mut best = (0.0f64, 0.0f64, f64::INFINITY);
    for j in 0..n_theta {
        let theta = std::f64::consts::PI * j as f64 / (n_theta - 1) as f64;
        for k in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64;
            let value = objective(theta, phi);
            if value < best.2 {
                best = (theta, phi, value);
            }
        }
    }

    let step = (
        std::f64::consts::PI / (n_theta - 1) as f64,
        2.0 * std::f64::consts::PI / n_phi as f64,
    );
    let ((theta, phi), value) =
        nelder_mead_2d(objective, (best.0, best.1), step, DISCORD_FTOL, 400);
    let (theta, phi, value) = if value < best.2 {
        (theta, phi, value)
    } else {
        (best.0, best.1, best.2)
    };

    Ok(DiscordResult {
        bits: base + value,
        basis_theta: theta,
        basis_phi: phi,
    })
}

/// Matrix of `rho` with the factor at `position` permuted to the front.
fn front_ordered(rho: &DensityOperator, position: usize) -> ComplexMatrix {
    if position == 0 {
        return rho.matrix().clone();
    }
    let dims: Vec<usize> = rho.factors().iter().map(|f| f.dim).collect();
    let n = rho.dim();
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len() - 1).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    // map[old_index] = new index with the chosen factor moved first.
    let mut map = vec![0usize; n];
    for (old, entry) in map.iter_mut().enumerate() {
        let digit = (old / strides[position]) % dims[position];
        let mut rest = 0;
        let mut scale = 1;
        for k in (0..dims.len()).rev() {
            if k == position {
                continue;
            }
            rest += ((old / strides[k]) % dims[k]) * scale;
            scale *= dims[k];
        }
        *entry = digit * (n / dims[position]) + rest;
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    out
}

/// Σ_a p_a S(rho_B | a) for the projective measurement along Bloch axis
/// (theta, phi) on the front qubit. This is the only basis-dependent part of
/// the discord objective.
fn conditional_entropy_after_measurement(
    matrix: &ComplexMatrix,
    other_dim: usize,
    theta: f64,
    phi: f64,
) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    let phase = Complex64::from_polar(1.0, phi);
    // Projector |n><n| for n = (theta, phi); the complement is 1 - |n><n|.
    let p00 = Complex64::new(c * c, 0.0);
    let p11 = Complex64::new(s * s, 0.0);
    let p01 = phase.conj() * (c * s);
    let p10 = phase * (c * s);

    let mut total = 0.0;
    for outcome in 0..2 {
        let (q00, q01, q10, q11) = if outcome == 0 {
            (p00, p01, p10, p11)
        } else {
            (
                Complex64::ONE - p00,
                -p01,
                -p10,
                Complex64::ONE - p11,
            )
        };
        // Unnormalised conditional state of B:
        //   B[k][l] = Σ_{i,i'} P[i'][i] M[(i,k),(i',l)].
        let mut block = ComplexMatrix::zeros(other_dim, other_dim);
        for k in 0..other_dim {
            for l in 0..other_dim {
                block[(k, l)] = q00 * matrix[(k, l)]
                    + q10 * matrix[(k, other_dim + l)]
                    + q01 * matrix[(other_dim + k, l)]
                    + q11 * matrix[(other_dim + k, other_dim + l)];
            }
        }
        let weight = block.trace().re;
        if weight <= 1e-14 {
            continue;
        }
        total += weight * entropy_of_normalised(&block, weight);
    }
    total
}

/// Entropy of block/weight, specialised to an analytic form for qubits.
fn entropy_of_normalised(block: &ComplexMatrix, weight: f64) -> f64 {
    let term = |lambda: f64| {
        if lambda > EIGENVALUE_CLIP {
            -lambda * lambda.log2()
        } else {
            0.0
        }
    };
    if block.rows() == 2 {
        let x = block[(0, 0)].re / weight;
        let y = block[(1, 1)].re / weight;
        let z = block[(0, 1)] / weight;
        let mid = 0.5 * (x + y);
        let radius = (0.25 * (x - y) * (x - y) + z.norm_sqr()).sqrt();
        term(mid + radius) + term(mid - radius)
    } else {
        let normalised = block.scale(Complex64::new(1.0 / weight, 0.0));
        let symmetric = normalised
            .add(&normalised.adjoint())
            .scale(Complex64::new(0.5, 0.0));
        qmath::eigh(&symmetric)
            .expect("conditional block is Hermitian")
            .eigenvalues
            .into_iter()
            .map(term)
            .sum()
    }
}

/// Nelder–Mead on two parameters; returns the best vertex and its value.
fn nelder_mead_2d(
    f: impl Fn(f64, f64) -> f64,
    start: (f64, f64),
    step: (f64, f64),
    ftol: f64,
    max_iter: usize,
) -> ((f64, f64), f64) {
    let mut simplex = [
        (start, f(start.0, start.1)),
        ((start.0 + step.0, start.1), f(start.0 + step.0, start.1)),
        ((start.0, start.1 + step.1), f(start.0, start.1 + step.1)),
    ];
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
        if (simplex[2].1 - simplex[0].1).abs() <= ftol {
            break;
        }
        let best = simplex[0];
        let worst = simplex[2];
        let centroid = (
            0.5 * (simplex[0].0 .0 + simplex[1].0 .0),
            0.5 * (simplex[0].0 .1 + simplex[1].0 .1),
        );
        let reflect = (
            centroid.0 + (centroid.0 - worst.0 .0),
            centroid.1 + (centroid.1 - worst.0 .1),
        );
        let fr = f(reflect.0, reflect.1);
        if fr < best.1 {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0 .0),
                centroid.1 + 2.0 * (centroid.1 - worst.0 .1),
            );
            let fe = f(expand.0, expand.1);
            simplex[2] = if fe < fr {
                (expand, fe)
            } else {
                (reflect, fr)
            };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = (
                centroid.0 + 0.5 * (worst.0 .0 - centroid.0),
                centroid.1 + 0.5 * (worst.0 .1 - centroid.1),
            );
            let fc = f(contract.0, contract.1);
            if fc < worst.1 {
                simplex[2] = (contract, fc);
            } else {
                // Shrink towards the best vertex.
                for vertex in simplex.iter_mut().skip(1) {
                    vertex.0 = (
                        best.0 .0 + 0.5 * (vertex.0 .0 - best.0 .0),
                        best.0 .1 + 0.5 * (vertex.0 .1 - best.0 .1),
                    );
                    vertex.1 = f(vertex.0 .0, vertex.0 .1);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
    (simplex[0].0, simplex[0].1)
}

/// Non-separability of A-realism: gap = I_A(rho) - I_A(rho_A) together with
/// the discord that lower-bounds it.
#[derive(Debug, Clone, Copy)]
pub struct NonseparabilityGap {
    pub gap: f64,
    pub discord: f64,
}

pub fn nonseparability_gap(
    rho: &DensityOperator,
    observable: &ProjectiveObservable,
) -> Result<NonseparabilityGap> {
    let joint = irrealism_of(rho, observable)?;
    let reduced = partial_trace(rho, &[observable.subsystem()])?;
    let local = irrealism_of(&reduced, observable)?;
    let discord = discord(rho, observable.subsystem())?;
    Ok(NonseparabilityGap {
        gap: joint - local,
        discord: discord.bits,
    })
}

/// Both sides of the incompatibility bound for a pair of mutually unbiased
/// observables, with the right-hand side evaluated through two algebraically
/// equivalent routes.
#[derive(Debug, Clone, Copy)]
pub struct IncompatibilityBound {
    /// R_A + R_A'.
    pub lhs: f64,
    /// log2(d_A) + S(rho_A) - I_{A:B}(rho)  (marginal-entropy form).
    pub rhs: f64,
    /// 2 log2(d_A) - I_{A|B}(rho)  (conditional-information form).
    pub rhs_conditional: f64,
}

/// Evaluates R_A + R_A' <= log2(d_A) + S(rho_A) - I_{A:B}(rho) for maximally
/// incompatible (mutually unbiased) observables on the same subsystem.
pub fn bound_incompatible(
    rho: &DensityOperator,
    first: &ProjectiveObservable,
    second: &ProjectiveObservable,
) -> Result<IncompatibilityBound> {
    if first.subsystem() != second.subsystem() {
        return Err(Error::InvalidObservable(
            "both observables must act on the same subsystem".into(),
        ));
    }
    let d = first.local_dim();
    if d != second.local_dim() {
        return Err(Error::DimensionMismatch {
            left: d,
            right: second.local_dim(),
        });
    }
    // |<a|a'>|^2 = tr(A_a A'_b) must equal 1/d for every pair.
    let target = 1.0 / d as f64;
    let mut deviation: f64 = 0.0;
    for pa in first.projectors() {
        for pb in second.projectors() {
            let overlap = pa.mul(pb).trace().re;
            deviation = deviation.max((overlap - target).abs());
        }
    }
    if deviation > UNBIASED_TOL {
        return Err(Error::NotMutuallyUnbiased(deviation));
    }

    let lhs = realism_of(rho, first)? + realism_of(rho, second)?;
    let log_d = (d as f64).log2();

    let subsystem = first.subsystem();
    let rho_a = partial_trace(rho, &[subsystem])?;
    let entropy_a = von_neumann_entropy(&rho_a);
    let others: Vec<&str> = rho
        .factors()
        .iter()
        .map(|f| f.name.as_str())
        .filter(|n| *n != subsystem)
        .collect();

    let (mutual, entropy_b) = if others.is_empty() {
        (0.0, 0.0)
    } else {
        let rho_b = partial_trace(rho, &others)?;
        (
            mutual_information(rho, &[subsystem], &others)?,
            von_neumann_entropy(&rho_b),
        )
    };

    let rhs = log_d + entropy_a - mutual;
    // I_{A|B} = log2(d_A) - (S(rho) - S(rho_B)).
    let conditional_information = log_d - (von_neumann_entropy(rho) - entropy_b);
    let rhs_conditional = 2.0 * log_d - conditional_information;

    assert!(
        (rhs - rhs_conditional).abs() <= 1e-9,
        "bound forms diverged: {rhs} vs {rhs_conditional}"
    );
    Ok(IncompatibilityBound {
        lhs,
        rhs,
        rhs_conditional,
    })
}

/// Right-hand side of the controlled-reality complementarity bound,
/// 1 - h((1 + lambda_V)/2) with lambda_V = sqrt(2V^2 - 2V + 1).
pub fn qcre_bound(visibility: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::OutOfRange {
            name: "visibility",
            value: visibility,
            range: "[0, 1]",
        });
    }
    let lambda = (2.0 * visibility * visibility - 2.0 * visibility + 1.0).sqrt();
    Ok(1.0 - binary_entropy((1.0 + lambda) / 2.0)?)
}

/// Correlation measures of a state across the bipartition (one factor : rest).
#[derive(Debug, Clone, Copy)]
pub struct CorrelationSummary {
    pub mutual_information: f64,
    pub discord: f64,
    /// I_{A|B} = I(rho_A) + I_{A:B}, evaluated through the conditional-entropy
    /// definition.
    pub conditional_information: f64,
    /// S(rho_A) for pure joint states; absent otherwise.
    pub entanglement_entropy: Option<f64>,
    /// I(rho_A) = log2(d_A) - S(rho_A).
    pub purity_information: f64,
}

/// Gathers the correlation measures between factor `a` and the remaining
/// factors. The measured side of the discord is `a`, which must be a qubit.
pub fn correlations(rho: &DensityOperator, a: &str) -> Result<CorrelationSummary> {
    let position = rho.factor_position(a)?;
    let others: Vec<&str> = rho
        .factors()
        .iter()
        .map(|f| f.name.as_str())
        .filter(|n| *n != a)
        .collect();
    if others.is_empty() {
        return Err(Error::BadBipartition);
    }
    let d_a = rho.factors()[position].dim as f64;
    let rho_a = partial_trace(rho, &[a])?;
    let rho_b = partial_trace(rho, &others)?;
    let entropy = von_neumann_entropy(rho);
    let entropy_a = von_neumann_entropy(&rho_a);
    let entropy_b = von_neumann_entropy(&rho_b);

    let mutual = entropy_a + entropy_b - entropy;
    let conditional_information = d_a.log2() - (entropy - entropy_b);
    let entanglement_entropy = if rho.purity() >= 1.0 - 1e-10 {
        Some(entropy_a)
    } else {
        None
    };

    Ok(CorrelationSummary {
        mutual_information: mutual,
        discord: discord(rho, a)?.bits,
        conditional_information,
        entanglement_entropy,
        purity_information: d_a.log2() - entropy_a,
    })
}
