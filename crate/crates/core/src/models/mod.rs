//! Builders and analytic dispersions for the Rice-Mele ring and the bilayer
//! square lattice with staggered imaginary potentials.

mod bilayer;
mod rice_mele;

pub use bilayer::{
    band_grid, bilayer_dispersion, bilayer_lattice, grid_momentum, valley_analysis, BandGrid, BandPoint,
    BilayerSpec, Hyperboloid, Sector, SiteIndex, ValleyAnalysis,
};
pub use rice_mele::{rice_mele_dispersion, rice_mele_k_grid, rice_mele_lattice, RiceMeleSpec};
