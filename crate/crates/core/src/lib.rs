//! Spectral kernels for non-Hermitian tight-binding models with chiral-time
//! (CT) symmetry on bipartite lattices.
//!
//! A Hermitian bipartite Hamiltonian `H0` with coupling block `Q` is dressed
//! with a staggered imaginary potential `+iγ` on sublattice A and `-iγ` on
//! sublattice B. Every eigenpair of the resulting `H` follows in closed form
//! from the singular value decomposition of `Q`: each singular triple
//! `(ε0, φ_A, φ_B)` is a two-level pseudo-spin in the complex field
//! `(ε0, 0, iγ)` with eigenvalues `±sqrt(ε0² - γ²)`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, threading and
//! the command-line front end live in the companion `ctbands` crate.
#![no_std]
// `!(x > 0.0)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod dos;
pub mod lattice;
pub mod models;
pub mod numerics;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{BipartiteLattice, NhHamiltonian};
pub use numerics::{ComplexMatrix, SvdResult};
pub use spectra::{SpectralPair, SpectrumReport};

pub use num_complex::Complex64;
