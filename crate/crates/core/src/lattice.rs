//! Bipartite lattices, assembly of `H = H0 + Hγ`, and the chiral / time
//! reversal operators.
//!
//! Sites are ordered with all of sublattice A first, then all of B, so the
//! assembled matrix has the literal block form
//!
//! ```text
//! H = [[ iγ·I,  Q   ],
//!      [ Q†,   -iγ·I ]]
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// The `N x N` inter-sublattice hopping block, `Q[i][j] = J_ij` between A-site
/// `i` and B-site `j`.
pub type CouplingBlock = ComplexMatrix;

/// Optional human-readable tags, one per site of each sublattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteLabels {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteLattice {
    coupling: CouplingBlock,
    labels: Option<SiteLabels>,
}

impl BipartiteLattice {
    pub fn new(coupling: CouplingBlock) -> Result<Self> {
        if !coupling.is_square() {
            return Err(Error::NotSquare {
                rows: coupling.rows(),
                cols: coupling.cols(),
            });
        }
        if coupling.rows() == 0 {
            return Err(Error::Empty);
        }
        if !coupling.is_finite() {
            return Err(Error::NonFinite { what: "coupling block" });
        }
        Ok(Self {
            coupling,
            labels: None,
        })
    }

    /// Build from a sparse list of `(a_index, b_index, J)`; unlisted entries are
    /// zero and repeated entries accumulate.
    pub fn from_bonds(n: usize, bonds: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Result<Self> {
        let mut q = ComplexMatrix::zeros(n, n);
        for (a, b, j) in bonds {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { a, b, n });
            }
            q[(a, b)] += j;
        }
        Self::new(q)
    }

    pub fn with_labels(mut self, labels: SiteLabels) -> Result<Self> {
        let n = self.n();
        for side in [&labels.a, &labels.b] {
            if side.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: side.len(),
                });
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Sites per sublattice.
    pub fn n(&self) -> usize {
        self.coupling.rows()
    }

    pub fn coupling(&self) -> &CouplingBlock {
        &self.coupling
    }

    pub fn labels(&self) -> Option<&SiteLabels> {
        self.labels.as_ref()
    }

    /// Nonzero couplings in row-major order.
    pub fn bonds(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            (0..n).filter_map(move |j| {
                let z = self.coupling[(i, j)];
                (z != Complex64::new(0.0, 0.0)).then_some((i, j, z))
            })
        })
    }

    pub fn is_real(&self) -> bool {
        self.coupling.as_slice().iter().all(|z| z.im == 0.0)
    }
}

/// `H = H0 + Hγ` for one lattice and one global `γ`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct NhHamiltonian {
    lattice: BipartiteLattice,
    gamma: f64,
    matrix: ComplexMatrix,
}

impl NhHamiltonian {
    pub fn lattice(&self) -> &BipartiteLattice {
        &self.lattice
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Total number of sites, `2N`.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn ct_residual(&self) -> f64 {
        ct_anticommutation_residual(&self.matrix)
    }
}

pub fn assemble(lattice: &BipartiteLattice, gamma: f64) -> Result<NhHamiltonian> {
    if !gamma.is_finite() {
        return Err(Error::NonFinite { what: "gamma" });
    }
    let q = lattice.coupling();
    if !q.is_square() {
        return Err(Error::DimensionMismatch {
            expected: q.rows(),
            actual: q.cols(),
        });
    }
    let n = q.rows();
    let mut h = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(0.0, gamma);
        h[(n + i, n + i)] = Complex64::new(0.0, -gamma);
        for j in 0..n {
            h[(i, n + j)] = q[(i, j)];
            h[(n + j, i)] = q[(i, j)].conj();
        }
    }
    Ok(NhHamiltonian {
        lattice: lattice.clone(),
        gamma,
        matrix: h,
    })
}

/// Chiral operator `C`: keeps the A half of a `2N` state, negates the B half.
pub fn apply_chiral(state: &[Complex64]) -> Result<Vec<Complex64>> {
    if !state.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: state.len() + 1,
            actual: state.len(),
        });
    }
    let n = state.len() / 2;
    Ok(state
        .iter()
        .enumerate()
        .map(|(s, &z)| if s < n { z } else { -z })
        .collect())
}

/// `CT` on a state: complex conjugation followed by `C`.
pub fn apply_ct(state: &[Complex64]) -> Result<Vec<Complex64>> {
    let conj: Vec<Complex64> = state.iter().map(|z| z.conj()).collect();
    apply_chiral(&conj)
}

/// `max |C·conj(H)·C + H|` over all entries, with A sites first and B sites
/// last. Zero iff `H` anticommutes with `CT`.
pub fn ct_anticommutation_residual(h: &ComplexMatrix) -> f64 {
    if !h.is_square() || !h.rows().is_multiple_of(2) {
        return f64::INFINITY;
    }
    let n = h.rows() / 2;
    let sign = |s: usize| if s < n { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for r in 0..2 * n {
        for c in 0..2 * n {
            let transformed = h[(r, c)].conj() * (sign(r) * sign(c));
            worst = worst.max((transformed + h[(r, c)]).norm());
        }
    }
    worst
}

pub fn check_ct_anticommutation(h: &NhHamiltonian) -> f64 {
    h.ct_residual()
}

/// True iff the multiset is closed under complex conjugation within `tol`.
///
/// Values with `|Im z| <= tol` pair with themselves; every other value must be
/// matched greedily to a distinct partner near its conjugate.
pub fn check_conjugate_pair_spectrum(eigenvalues: &[Complex64], tol: f64) -> bool {
    let mut used = alloc::vec![false; eigenvalues.len()];
    for i in 0..eigenvalues.len() {
        if used[i] {
            continue;
        }
        let z = eigenvalues[i];
        used[i] = true;
        if z.im.abs() <= tol {
            continue;
        }
        let target = z.conj();
        let partner = (0..eigenvalues.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (eigenvalues[j] - target).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dimer() -> BipartiteLattice {
        BipartiteLattice::new(ComplexMatrix::from_real(1, 1, &[1.0]).unwrap()).unwrap()
    }

    #[test]
    fn dimer_block_layout() {
        let h = assemble(&dimer(), 0.6).unwrap();
        let expect = ComplexMatrix::from_row_major(2, 2, vec![c(0.0, 0.6), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -0.6)])
            .unwrap();
        assert_eq!(h.matrix(), &expect);
        assert_eq!(h.ct_residual(), 0.0);
    }

    #[test]
    fn gamma_zero_is_hermitian() {
        let q = ComplexMatrix::from_row_major(2, 2, vec![c(1.0, 0.5), c(0.0, 0.0), c(-0.3, 0.0), c(2.0, -1.0)])
            .unwrap();
        let lat = BipartiteLattice::new(q).unwrap();
        let h = assemble(&lat, 0.0).unwrap();
        assert_eq!(h.matrix().hermitian_asymmetry(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            BipartiteLattice::new(ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(assemble(&dimer(), f64::NAN), Err(Error::NonFinite { .. })));
        assert!(matches!(
            BipartiteLattice::from_bonds(2, [(0, 2, c(1.0, 0.0))]),
            Err(Error::IndexOutOfRange { .. })
        ));
        let nan = ComplexMatrix::from_real(1, 1, &[f64::NAN]).unwrap();
        assert!(matches!(BipartiteLattice::new(nan), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn labels_must_match_size() {
        let labels = SiteLabels {
            a: vec!["a0".into()],
            b: vec![],
        };
        assert!(dimer().with_labels(labels).is_err());
    }

    #[test]
    fn chiral_operator() {
        assert_eq!(apply_chiral(&[c(1.0, 2.0), c(3.0, -1.0)]).unwrap(), vec![c(1.0, 2.0), c(-3.0, 1.0)]);
        let all_a = [c(1.0, 0.0), c(0.5, 0.5), c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(apply_chiral(&all_a).unwrap(), all_a.to_vec());
        let v = [c(0.1, -0.7), c(2.0, 0.3), c(-1.1, 0.0), c(0.0, 4.0)];
        assert_eq!(apply_chiral(&apply_chiral(&v).unwrap()).unwrap(), v.to_vec());
        assert!(apply_chiral(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn corrupted_hamiltonian_is_flagged() {
        let q = ComplexMatrix::from_real(2, 2, &[1.0, 0.4, -0.2, 0.8]).unwrap();
        let h = assemble(&BipartiteLattice::new(q).unwrap(), 0.7).unwrap();
        assert_eq!(h.ct_residual(), 0.0);
        let mut m = h.matrix().clone();
        m[(0, 1)] = c(0.3, 0.0);
        m[(1, 0)] = c(0.3, 0.0);
        assert!(ct_anticommutation_residual(&m) > 0.5);
    }

    #[test]
    fn complex_coupling_is_reported() {
        let q = ComplexMatrix::from_row_major(1, 1, vec![c(1.0, 0.2)]).unwrap();
        let h = assemble(&BipartiteLattice::new(q).unwrap(), 0.3).unwrap();
        assert!((h.ct_residual() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn conjugate_pairs() {
        assert!(check_conjugate_pair_spectrum(&[c(0.8, 0.0), c(-0.8, 0.0)], 1e-9));
        assert!(check_conjugate_pair_spectrum(&[c(0.0, 0.75), c(0.0, -0.75)], 1e-9));
        assert!(!check_conjugate_pair_spectrum(&[c(0.1, 0.2), c(0.1, 0.3)], 1e-9));
        assert!(!check_conjugate_pair_spectrum(&[c(0.0, 0.75), c(0.0, 0.75)], 1e-9));
        assert!(check_conjugate_pair_spectrum(&[], 1e-9));
    }
}
