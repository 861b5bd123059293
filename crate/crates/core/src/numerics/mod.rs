//! Dense complex matrix kernels: Hermitian eigendecomposition by cyclic
//! Jacobi rotations and a singular value decomposition built on top of it.

mod eigen;
mod matrix;
mod svd;

pub use eigen::{hermitian_eigen, HermitianEigen, MAX_SWEEPS};
pub use matrix::{dot, vec_norm, ComplexMatrix};
pub use svd::{svd, SvdResult, ZERO_SINGULAR_RTOL};
