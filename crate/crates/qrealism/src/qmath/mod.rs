//! Dense complex linear algebra and entropic functionals for dimensions 2–16.
//!
//! Everything in this crate runs through [`ComplexMatrix`] (a row-major dense
//! complex matrix), [`DensityOperator`] (a validated Hermitian, unit-trace,
//! positive state over labelled tensor factors), and [`ProjectiveObservable`]
//! (a complete set of rank-1 projectors on one factor). Entropies are in bits.

mod eigen;

pub use eigen::{eigh, EighDecomposition};

use crate::{Error, Result};
use num_complex::Complex64;

/// Entrywise tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance on |trace - 1| for density operators.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a density operator may undershoot zero by this much.
pub const PSD_SLACK: f64 = 1e-10;
/// Eigenvalues at or below this threshold contribute nothing to entropies.
pub const EIGENVALUE_CLIP: f64 = 1e-12;
/// Largest supported Hilbert-space dimension (four qubits).
pub const MAX_DIM: usize = 16;
/// Entrywise tolerance for projector validation.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested row slices. Panics on ragged input.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    /// Column vector from amplitudes.
    pub fn ket(amplitudes: &[Complex64]) -> Self {
        Self::from_fn(amplitudes.len(), 1, |i, _| amplitudes[i])
    }

    /// Computational basis column vector |k> in the given dimension.
    pub fn basis_ket(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        Self::from_fn(dim, 1, |i, _| {
            if i == k {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the own adjoint.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Deviation from unitarity, max |U†U - I|.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Self::identity(self.rows))
    }

    /// Outer product |self><self| of a column vector.
    pub fn outer(&self) -> Self {
        assert_eq!(self.cols, 1);
        self.mul(&self.adjoint())
    }

    /// Squared 2-norm of a column vector.
    pub fn norm_sqr(&self) -> f64 {
        assert_eq!(self.cols, 1);
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product with `a`'s factor leftmost.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Embeds a single-factor operator into the full space of the given factors.
pub fn embed_on_factor(op: &ComplexMatrix, factors: &[Factor], at: usize) -> ComplexMatrix {
    assert!(at < factors.len());
    assert_eq!(op.rows(), factors[at].dim);
    let pre: usize = factors[..at].iter().map(|f| f.dim).product();
    let post: usize = factors[at + 1..].iter().map(|f| f.dim).product();
    let left = tensor_product(&ComplexMatrix::identity(pre), op);
    tensor_product(&left, &ComplexMatrix::identity(post))
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        &[Complex64::ZERO, Complex64::ONE],
        &[Complex64::ONE, Complex64::ZERO],
    ])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        &[Complex64::ZERO, Complex64::new(0.0, -1.0)],
        &[Complex64::new(0.0, 1.0), Complex64::ZERO],
    ])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        &[Complex64::ONE, Complex64::ZERO],
        &[Complex64::ZERO, -Complex64::ONE],
    ])
}

/// A named tensor factor with its local dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub dim: usize,
}

impl Factor {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
        }
    }

    pub fn qubit(name: impl Into<String>) -> Self {
        Self::new(name, 2)
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator over labelled factors.
///
/// Construction validates every invariant: Hermiticity and trace within 1e-10,
/// eigenvalues above -1e-10, power-of-two dimension at most 16, and factor
/// dimensions multiplying to the operator dimension.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    factors: Vec<Factor>,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, factors: Vec<Factor>) -> Result<Self> {
        matrix.ensure_finite()?;
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let dim = matrix.rows();
        if !(2..=MAX_DIM).contains(&dim) || !dim.is_power_of_two() {
            return Err(Error::UnsupportedDimension { dim, max: MAX_DIM });
        }
        let product: usize = factors.iter().map(|f| f.dim).product();
        if factors.is_empty() || product != dim {
            return Err(Error::FactorMismatch { product, dim });
        }
        for (i, f) in factors.iter().enumerate() {
            if f.dim < 2 {
                return Err(Error::UnsupportedDimension { dim: f.dim, max: MAX_DIM });
            }
            if factors[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::DuplicateFactor(f.name.clone()));
            }
        }
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: HERMITICITY_TOL,
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace {
                trace: trace.re,
                tolerance: TRACE_TOL,
            });
        }
        let decomposition = eigh(&matrix)?;
        let min = decomposition
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(f64::NAN);
        if min < -PSD_SLACK {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { matrix, factors })
    }

    /// Density operator |psi><psi| of a normalised column vector.
    pub fn from_pure(ket: &ComplexMatrix, factors: Vec<Factor>) -> Result<Self> {
        ket.ensure_finite()?;
        let norm = ket.norm_sqr();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace {
                trace: norm,
                tolerance: TRACE_TOL,
            });
        }
        Self::new(ket.outer(), factors)
    }

    pub fn maximally_mixed(factors: Vec<Factor>) -> Result<Self> {
        let dim: usize = factors.iter().map(|f| f.dim).product();
        let matrix = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Self::new(matrix, factors)
    }

    /// Wraps a matrix as a state over one anonymous factor spanning the
    /// whole space. Used to treat a reduced state as a standalone context.
    pub fn single_factor(matrix: ComplexMatrix, name: impl Into<String>) -> Result<Self> {
        let dim = matrix.rows();
        Self::new(matrix, vec![Factor::new(name, dim)])
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn factor_position(&self, name: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.matrix)
            .expect("validated density operator must diagonalise")
            .eigenvalues
    }

    /// Tr rho^2; equals 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }
}

/// Reduced state over the kept factors, in their original order.
pub fn partial_trace(rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    if keep.is_empty() {
        return Err(Error::BadBipartition);
    }
    let mut keep_positions = Vec::new();
    for name in keep {
        let pos = rho.factor_position(name)?;
        if keep_positions.contains(&pos) {
            return Err(Error::DuplicateFactor((*name).to_string()));
        }
        keep_positions.push(pos);
    }
    keep_positions.sort_unstable();

    let factors = rho.factors();
    let drop_positions: Vec<usize> = (0..factors.len())
        .filter(|p| !keep_positions.contains(p))
        .collect();
    if drop_positions.is_empty() {
        return Ok(rho.clone());
    }

    let dims: Vec<usize> = factors.iter().map(|f| f.dim).collect();
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let kept_dim: usize = keep_positions.iter().map(|&p| dims[p]).product();
    let drop_dim: usize = drop_positions.iter().map(|&p| dims[p]).product();

    // Flat offset of a mixed-radix index over the given factor positions.
    let offset = |positions: &[usize], mut index: usize| -> usize {
        let mut flat = 0;
        for &p in positions.iter().rev() {
            flat += (index % dims[p]) * strides[p];
            index /= dims[p];
        }
        flat
    };

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for r in 0..kept_dim {
        let r_off = offset(&keep_positions, r);
        for c in 0..kept_dim {
            let c_off = offset(&keep_positions, c);
            let mut acc = Complex64::ZERO;
            for t in 0..drop_dim {
                let t_off = offset(&drop_positions, t);
                acc += m[(r_off + t_off, c_off + t_off)];
            }
            out[(r, c)] = acc;
        }
    }

    let kept_factors: Vec<Factor> = keep_positions
        .iter()
        .map(|&p| factors[p].clone())
        .collect();
    DensityOperator::new(out, kept_factors)
}

/// Von Neumann entropy in bits. Eigenvalues at or below 1e-12 contribute 0.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    let entropy: f64 = rho
        .eigenvalues()
        .iter()
        .filter(|&&lambda| lambda > EIGENVALUE_CLIP)
        .map(|&lambda| -lambda * lambda.log2())
        .sum();
    entropy.clamp(0.0, (rho.dim() as f64).log2())
}

/// Quantum relative entropy S(rho || sigma) in bits, computed in the joint
/// eigenbases. Returns `f64::INFINITY` when the support of `rho` is not
/// contained in the support of `sigma` (within the PSD slack).
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let r = eigh(rho.matrix())?;
    let s = eigh(sigma.matrix())?;
    let n = rho.dim();

    let overlap = |i: usize, j: usize| -> f64 {
        let mut acc = Complex64::ZERO;
        for k in 0..n {
            acc += r.eigenvectors[(k, i)].conj() * s.eigenvectors[(k, j)];
        }
        acc.norm_sqr()
    };

    let mut result = 0.0;
    for (i, &lambda) in r.eigenvalues.iter().enumerate() {
        if lambda <= EIGENVALUE_CLIP {
            continue;
        }
        result += lambda * lambda.log2();
        for (j, &mu) in s.eigenvalues.iter().enumerate() {
            let o = overlap(i, j);
            if mu <= PSD_SLACK {
                // Weight of rho on sigma's kernel signals a support violation.
                if lambda * o > PSD_SLACK {
                    return Ok(f64::INFINITY);
                }
            } else {
                result -= lambda * o * mu.log2();
            }
        }
    }
    Ok(result)
}

/// Binary entropy h(u) = -u log2 u - (1-u) log2(1-u), with h(0) = h(1) = 0.
pub fn binary_entropy(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::OutOfRange {
            name: "u",
            value: u,
            range: "[0, 1]",
        });
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(u) + term(1.0 - u))
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 in [0, 1].
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let sqrt_rho = matrix_sqrt(rho.matrix())?;
    let product = sqrt_rho.mul(sigma.matrix()).mul(&sqrt_rho);
    // Symmetrise away the roundoff before diagonalising.
    let symmetric = product.add(&product.adjoint()).scale(Complex64::new(0.5, 0.0));
    let eigenvalues = eigh(&symmetric)?.eigenvalues;
    let root_sum: f64 = eigenvalues.iter().filter(|&&v| v > 0.0).map(|v| v.sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// Principal square root of a Hermitian PSD matrix; tiny negative eigenvalues
/// are clipped to zero.
fn matrix_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let decomposition = eigh(m)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in decomposition.eigenvalues.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let root = lambda.sqrt();
        for i in 0..n {
            let vik = decomposition.eigenvectors[(i, k)];
            for j in 0..n {
                out[(i, j)] += vik * decomposition.eigenvectors[(j, k)].conj() * root;
            }
        }
    }
    Ok(out)
}

/// A complete set of orthogonal rank-1 projectors on one subsystem.
#[derive(Debug, Clone)]
pub struct ProjectiveObservable {
    subsystem: String,
    projectors: Vec<ComplexMatrix>,
    eigenlabels: Vec<String>,
}

impl ProjectiveObservable {
    pub fn new(
        subsystem: impl Into<String>,
        projectors: Vec<ComplexMatrix>,
        eigenlabels: Vec<String>,
    ) -> Result<Self> {
        if projectors.is_empty() || projectors.len() != eigenlabels.len() {
            return Err(Error::InvalidObservable(
                "need one eigenlabel per projector".into(),
            ));
        }
        let dim = projectors[0].rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for p in &projectors {
            p.ensure_finite()?;
            if !p.is_square() || p.rows() != dim {
                return Err(Error::InvalidObservable(
                    "projectors must be square with equal dimensions".into(),
                ));
            }
            if p.hermiticity_deviation() > PROJECTOR_TOL {
                return Err(Error::InvalidObservable("projector not Hermitian".into()));
            }
            if p.mul(p).max_abs_diff(p) > PROJECTOR_TOL {
                return Err(Error::InvalidObservable("projector not idempotent".into()));
            }
            if (p.trace().re - 1.0).abs() > PROJECTOR_TOL {
                return Err(Error::InvalidObservable("projector not rank-1".into()));
            }
            sum = sum.add(p);
        }
        for (a, pa) in projectors.iter().enumerate() {
            for pb in projectors.iter().skip(a + 1) {
                if pa.mul(pb).max_abs() > PROJECTOR_TOL {
                    return Err(Error::InvalidObservable(
                        "projectors not mutually orthogonal".into(),
                    ));
                }
            }
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(dim)) > PROJECTOR_TOL {
            return Err(Error::InvalidObservable(
                "projectors do not sum to the identity".into(),
            ));
        }
        Ok(Self {
            subsystem: subsystem.into(),
            projectors,
            eigenlabels,
        })
    }

    /// Observable from an orthonormal basis of column vectors.
    pub fn from_basis(
        subsystem: impl Into<String>,
        basis: &[ComplexMatrix],
        eigenlabels: Vec<String>,
    ) -> Result<Self> {
        let projectors = basis.iter().map(|ket| ket.outer()).collect();
        Self::new(subsystem, projectors, eigenlabels)
    }

    /// Computational-basis observable on a qubit subsystem.
    pub fn computational(subsystem: impl Into<String>) -> Self {
        Self::from_basis(
            subsystem,
            &[ComplexMatrix::basis_ket(2, 0), ComplexMatrix::basis_ket(2, 1)],
            vec!["0".into(), "1".into()],
        )
        .expect("computational basis is a valid observable")
    }

    pub fn subsystem(&self) -> &str {
        &self.subsystem
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn eigenlabels(&self) -> &[String] {
        &self.eigenlabels
    }

    pub fn local_dim(&self) -> usize {
        self.projectors[0].rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(values: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                c(values[i], 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    fn bell_state() -> DensityOperator {
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        let ket = ComplexMatrix::ket(&[c(amp, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(amp, 0.0)]);
        DensityOperator::from_pure(&ket, vec![Factor::qubit("a"), Factor::qubit("b")]).unwrap()
    }

    #[test]
    fn tensor_product_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));

        let p0 = ComplexMatrix::basis_ket(2, 0).outer();
        let p1 = ComplexMatrix::basis_ket(2, 1).outer();
        let placed = tensor_product(&p0, &p1);
        assert!(placed.max_abs_diff(&diag(&[0.0, 1.0, 0.0, 0.0])) < 1e-15);

        let zz = tensor_product(&sigma_z(), &sigma_z());
        assert!(zz.max_abs_diff(&diag(&[1.0, -1.0, -1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn partial_trace_bell_is_maximally_mixed() {
        let reduced = partial_trace(&bell_state(), &["a"]).unwrap();
        let expected = diag(&[0.5, 0.5]);
        assert!(reduced.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn partial_trace_factorises_products() {
        let rho_a = diag(&[0.25, 0.75]);
        let rho_b = ComplexMatrix::from_rows(&[
            &[c(0.5, 0.0), c(0.1, 0.2)],
            &[c(0.1, -0.2), c(0.5, 0.0)],
        ]);
        let joint = DensityOperator::new(
            tensor_product(&rho_a, &rho_b),
            vec![Factor::qubit("a"), Factor::qubit("b")],
        )
        .unwrap();
        let back = partial_trace(&joint, &["a"]).unwrap();
        assert!(back.matrix().max_abs_diff(&rho_a) < 1e-12);
        let back_b = partial_trace(&joint, &["b"]).unwrap();
        assert!(back_b.matrix().max_abs_diff(&rho_b) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_unknown_label() {
        assert!(matches!(
            partial_trace(&bell_state(), &["nope"]),
            Err(Error::UnknownFactor(_))
        ));
    }

    #[test]
    fn eigh_pauli_x() {
        let d = eigh(&sigma_x()).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_diagonal_passthrough() {
        let d = eigh(&diag(&[0.25, 0.75])).unwrap();
        assert!((d.eigenvalues[0] - 0.25).abs() < 1e-12);
        assert!((d.eigenvalues[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            &[c(0.0, 0.0), c(1.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn entropy_of_pure_and_mixed_states() {
        assert!(von_neumann_entropy(&bell_state()) < 1e-12);

        let mixed = DensityOperator::maximally_mixed(vec![
            Factor::qubit("a"),
            Factor::qubit("b"),
        ])
        .unwrap();
        assert!((von_neumann_entropy(&mixed) - 2.0).abs() < 1e-12);

        let biased =
            DensityOperator::single_factor(diag(&[0.25, 0.75]), "a").unwrap();
        assert!((von_neumann_entropy(&biased) - 0.8112781244591328).abs() < 1e-9);
    }

    #[test]
    fn relative_entropy_cases() {
        let rho = DensityOperator::single_factor(diag(&[0.25, 0.75]), "a").unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);

        let pure0 = DensityOperator::single_factor(diag(&[1.0, 0.0]), "a").unwrap();
        let mixed = DensityOperator::maximally_mixed(vec![Factor::qubit("a")]).unwrap();
        assert!((relative_entropy(&pure0, &mixed).unwrap() - 1.0).abs() < 1e-12);

        let amp = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::from_pure(
            &ComplexMatrix::ket(&[c(amp, 0.0), c(amp, 0.0)]),
            vec![Factor::qubit("a")],
        )
        .unwrap();
        assert_eq!(relative_entropy(&plus, &pure0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.8112781244591328).abs() < 1e-9);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn fidelity_cases() {
        let bell = bell_state();
        assert!((fidelity(&bell, &bell).unwrap() - 1.0).abs() < 1e-9);

        let p0 = DensityOperator::single_factor(diag(&[1.0, 0.0]), "a").unwrap();
        let p1 = DensityOperator::single_factor(diag(&[0.0, 1.0]), "a").unwrap();
        assert!(fidelity(&p0, &p1).unwrap() < 1e-12);

        let mixed = DensityOperator::maximally_mixed(vec![Factor::qubit("a")]).unwrap();
        assert!((fidelity(&p0, &mixed).unwrap() - 0.5).abs() < 1e-9);
        // Symmetry.
        let f_ab = fidelity(&p0, &mixed).unwrap();
        let f_ba = fidelity(&mixed, &p0).unwrap();
        assert!((f_ab - f_ba).abs() < 1e-9);
    }

    #[test]
    fn density_operator_validation() {
        // Non-unit trace.
        assert!(matches!(
            DensityOperator::single_factor(diag(&[0.5, 0.2]), "a"),
            Err(Error::InvalidTrace { .. })
        ));
        // Negative eigenvalue.
        assert!(matches!(
            DensityOperator::single_factor(diag(&[1.2, -0.2]), "a"),
            Err(Error::NotPositive { .. })
        ));
        // Factor dimensions must multiply to the matrix dimension.
        assert!(matches!(
            DensityOperator::new(diag(&[0.5, 0.5]), vec![Factor::qubit("a"), Factor::qubit("b")]),
            Err(Error::FactorMismatch { .. })
        ));
        // Dimension cap.
        let big = ComplexMatrix::identity(32).scale(c(1.0 / 32.0, 0.0));
        assert!(matches!(
            DensityOperator::new(big, vec![Factor::new("huge", 32)]),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn observable_validation() {
        let z = ProjectiveObservable::computational("a");
        assert_eq!(z.local_dim(), 2);
        // Non-orthogonal kets are rejected.
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        let bad = ProjectiveObservable::from_basis(
            "a",
            &[
                ComplexMatrix::basis_ket(2, 0),
                ComplexMatrix::ket(&[c(amp, 0.0), c(amp, 0.0)]),
            ],
            vec!["p".into(), "q".into()],
        );
        assert!(bad.is_err());
    }
}
