//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal element exactly, which shrinks the
//! squared off-diagonal norm monotonically; for the dimensions this crate
//! supports (at most 16) a handful of sweeps reaches machine precision.

use super::ComplexMatrix;
use crate::{Error, Result};
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;
const HERMITICITY_TOL: f64 = super::HERMITICITY_TOL;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct EighDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose k-th column is the eigenvector of eigenvalue k.
    pub eigenvectors: ComplexMatrix,
}

impl EighDecomposition {
    /// Rebuilds V diag(lambda) V† — used by reconstruction checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k];
            }
            acc
        })
    }
}

/// Diagonalises a Hermitian matrix. Errors when the input deviates from
/// Hermiticity by more than 1e-10 in any entry.
pub fn eigh(m: &ComplexMatrix) -> Result<EighDecomposition> {
    m.ensure_finite()?;
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: HERMITICITY_TOL,
        });
    }

    let n = m.rows();
    // Work on the exactly Hermitian average of m and m†.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok(EighDecomposition {
            eigenvalues: vec![a[(0, 0)].re],
            eigenvectors: v,
        });
    }

    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let threshold = 1e-15 * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= threshold {
                    continue;
                }
                // Phase transform makes the 2x2 block real, then a plane
                // rotation by theta zeroes it: tan(2 theta) = 2r / (app - aqq).
                let phase = apq / r;
                let w = phase.conj();
                let angle = 0.5 * (2.0 * r).atan2(a[(p, p)].re - a[(q, q)].re);
                let (s, c) = angle.sin_cos();
                let cw = w * c;
                let sw = w * s;

                // A <- A J with J[p][p]=c, J[p][q]=-s, J[q][p]=w s, J[q][q]=w c.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * sw;
                    a[(i, q)] = aiq * cw - aip * s;
                }
                // A <- J† A.
                let wc = phase; // conj(w)
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * (wc * s);
                    a[(q, j)] = aqj * (wc * c) - apj * s;
                }
                // V <- V J accumulates eigenvectors as columns.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * sw;
                    v[(i, q)] = viq * cw - vip * s;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("eigenvalues are finite")
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    Ok(EighDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
