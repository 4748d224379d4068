//! Exact density-operator simulation of two quantum-controlled interferometers
//! (a delayed-choice arrangement and a controlled-reality arrangement), with
//! operational wave/particle realism quantifiers, complementarity bounds,
//! quantum discord, NMR pulse-sequence compilation, and Monte Carlo
//! propagation of tomography noise into every reported quantity.
//!
//! The crate is organised in layers:
//!
//! - [`qmath`] — dense complex linear algebra for dimensions 2–16: labelled
//!   tensor factors, partial traces, a Hermitian eigensolver, and the entropic
//!   functionals everything else is built on.
//! - [`realism`] — realism/irrealism of an observable in a given state, mutual
//!   information, quantum discord, and the incompatibility bounds that tie
//!   them together.
//! - [`interferometer`] — the two circuits, their stage states, detection
//!   statistics, visibility, and the detector measurement model.
//! - [`pulse`] — rf rotations and scalar-coupling evolutions compiled to 4×4
//!   unitaries, with an equivalence checker against the ideal circuits.
//! - [`tomography`] — Pauli-basis state tomography, Gaussian coefficient
//!   noise, physicality restoration, and seeded Monte Carlo error bars.
//! - [`verify`] — the runnable invariant suite behind `qrealism verify`.
//!
//! All quantities are in bits (base-2 logarithms) and all angles in radians.

pub mod cli;
pub mod interferometer;
pub mod pulse;
pub mod qmath;
pub mod realism;
pub mod rng;
pub mod tomography;
pub mod verify;

mod format;

pub use qmath::{
    binary_entropy, eigh, fidelity, partial_trace, relative_entropy, tensor_product,
    von_neumann_entropy, ComplexMatrix, DensityOperator, Factor, ProjectiveObservable,
};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entries must be finite (found NaN or infinity)")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} > {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("trace is {trace:.12} but must be 1 within {tolerance:.1e}")]
    InvalidTrace { trace: f64, tolerance: f64 },

    #[error("operator is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension {dim} unsupported: must be a power of two and at most {max}")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("factor labels multiply to {product} but the operator has dimension {dim}")]
    FactorMismatch { product: usize, dim: usize },

    #[error("unknown factor label {0:?}")]
    UnknownFactor(String),

    #[error("duplicate factor label {0:?}")]
    DuplicateFactor(String),

    #[error("invalid projective observable: {0}")]
    InvalidObservable(String),

    #[error("argument {name} = {value} out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("observables are not mutually unbiased (max |<a|a'>|^2 deviation {0:.3e})")]
    NotMutuallyUnbiased(f64),

    #[error("discord measurement requires a qubit subsystem, got local dimension {0}")]
    NonQubitMeasurement(usize),

    #[error("matrix is not unitary (defect {defect:.3e} > {tolerance:.1e})")]
    NotUnitary { defect: f64, tolerance: f64 },

    #[error("pulse sequence is empty")]
    EmptySequence,

    #[error("pulse sequence parse error at line {line}: {message}")]
    SequenceParse { line: usize, message: String },

    #[error("bipartition does not cover the state's factors")]
    BadBipartition,

    #[error("eigensolver failed to converge after {0} sweeps")]
    EigenConvergence(usize),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
