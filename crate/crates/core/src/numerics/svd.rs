use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{dot, hermitian_eigen, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};

/// Singular values at or below `ZERO_SINGULAR_RTOL * max(s)` are exact zero
/// modes; their left vectors come from completing the basis.
pub const ZERO_SINGULAR_RTOL: f64 = 1e-9;

/// `Q = U · diag(s) · V†` with `s` descending.
///
/// Column `n` of `left` is the A-sublattice amplitude `φ_A(n)`, column `n` of
/// `right` the B-sublattice amplitude `φ_B(n)`, so that `Q φ_B = s φ_A` and
/// `Q† φ_A = s φ_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
    /// Number of trailing singular values classified as exact zeros.
    pub zero_modes: usize,
}

impl SvdResult {
    pub fn left_vector(&self, n: usize) -> Vec<Complex64> {
        self.left.column(n)
    }

    pub fn right_vector(&self, n: usize) -> Vec<Complex64> {
        self.right.column(n)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.singular_values.len();
        let rows = self.left.rows();
        let cols = self.right.rows();
        ComplexMatrix::from_fn(rows, cols, |i, j| {
            (0..n)
                .map(|k| self.left[(i, k)] * self.singular_values[k] * self.right[(j, k)].conj())
                .sum()
        })
    }
}

/// Singular value decomposition of a square matrix through the Hermitian
/// eigenproblem of `Q†Q`.
///
/// Right vectors are the eigenvectors of `Q†Q`; singular values are
/// recomputed as `‖Q v‖`, which keeps zero modes near machine zero instead of
/// at `sqrt(eps)`. Left vectors are `Q v / s` for nonzero `s` and an
/// orthonormal completion of the basis otherwise.
pub fn svd(q: &ComplexMatrix, tol: f64) -> Result<SvdResult> {
    if !q.is_square() {
        return Err(Error::NotSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    let n = q.rows();
    if n == 0 {
        return Err(Error::Empty);
    }
    let gram = q.adjoint().matmul(q)?;
    let eig = hermitian_eigen(&gram, tol.max(1e-12))?;

    let mut triples: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .rev()
        .map(|k| {
            let v = eig.vectors.column(k);
            let qv = q.mul_vec(&v).expect("square");
            (vec_norm(&qv), v, qv)
        })
        .collect();
    // Stable: ties keep the eigensolver's order.
    triples.sort_by(|a, b| b.0.total_cmp(&a.0));

    let s_max = triples[0].0;
    let threshold = ZERO_SINGULAR_RTOL * s_max;
    let mut singular_values = Vec::with_capacity(n);
    let mut left = ComplexMatrix::zeros(n, n);
    let mut right = ComplexMatrix::zeros(n, n);
    let mut zero_modes = 0;
    let mut left_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (k, (s, v, qv)) in triples.into_iter().enumerate() {
        right.set_column(k, &v);
        if s > threshold {
            let u: Vec<Complex64> = qv.iter().map(|z| z / s).collect();
            left_cols.push(u);
            singular_values.push(s);
        } else {
            zero_modes += 1;
            singular_values.push(0.0);
        }
    }
    complete_basis(&mut left_cols, n);
    for (k, u) in left_cols.iter().enumerate() {
        left.set_column(k, u);
    }
    Ok(SvdResult {
        singular_values,
        left,
        right,
        zero_modes,
    })
}

/// Extend an orthonormal set to a basis of C^n by Gram-Schmidt on the unit
/// vectors, taking the candidate with the largest residual each time.
fn complete_basis(basis: &mut Vec<Vec<Complex64>>, n: usize) {
    while basis.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..n {
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            w[e] = Complex64::new(1.0, 0.0);
            // Two passes of classical Gram-Schmidt.
            for _ in 0..2 {
                for b in basis.iter() {
                    let proj = dot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= bi * proj;
                    }
                }
            }
            let norm = vec_norm(&w);
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("n > 0");
        basis.push(w.into_iter().map(|z| z / norm).collect());
    }
}
