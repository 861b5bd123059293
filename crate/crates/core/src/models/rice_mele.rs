use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{BipartiteLattice, SiteLabels};
use crate::math;
use crate::spectra::channel_eigenvalue;

/// Periodic Rice-Mele ring of `n_cells` dimers with hoppings
/// `J_j = 1 + (-1)^j δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiceMeleSpec {
    pub n_cells: usize,
    pub delta: f64,
}

impl RiceMeleSpec {
    pub fn new(n_cells: usize, delta: f64) -> Self {
        Self { n_cells, delta }
    }

    /// Intra-cell hopping `J_odd = 1 - δ`.
    pub fn intra(&self) -> f64 {
        1.0 - self.delta
    }

    /// Inter-cell hopping `J_even = 1 + δ`.
    pub fn inter(&self) -> f64 {
        1.0 + self.delta
    }

    /// `|δ| < 1`: both hoppings positive and the chain gapped at `k = π`
    /// unless `δ = 0`.
    pub fn in_standard_regime(&self) -> bool {
        math::abs(self.delta) < 1.0
    }

    /// Exceptional point of the infinite ring, `2|δ|`.
    pub fn gamma_c(&self) -> f64 {
        2.0 * math::abs(self.delta)
    }
}

/// Coupling block of the ring: `Q[j][j] = 1 - δ` (A_j to B_j) and
/// `Q[j+1 mod N][j] = 1 + δ` (B_j to A_{j+1}).
pub fn rice_mele_lattice(spec: &RiceMeleSpec) -> Result<BipartiteLattice> {
    let n = spec.n_cells;
    if n < 2 {
        return Err(Error::TooSmall { got: n, min: 2 });
    }
    if !spec.delta.is_finite() {
        return Err(Error::NonFinite { what: "delta" });
    }
    let intra = Complex64::new(spec.intra(), 0.0);
    let inter = Complex64::new(spec.inter(), 0.0);
    let bonds = (0..n).flat_map(|j| [(j, j, intra), ((j + 1) % n, j, inter)]);
    let labels = SiteLabels {
        a: (1..=n).map(|j| format!("A{j}")).collect(),
        b: (1..=n).map(|j| format!("B{j}")).collect(),
    };
    BipartiteLattice::from_bonds(n, bonds)?.with_labels(labels)
}

/// `ε0(k) = 2 sqrt(δ² + (1 - δ²) cos²(k/2))` and the `+` branch
/// `ε(k) = sqrt(ε0² - γ²)`.
pub fn rice_mele_dispersion(delta: f64, k: f64, gamma: f64) -> (f64, Complex64) {
    let c = math::cos(0.5 * k);
    let epsilon0 = 2.0 * math::sqrt(delta * delta + (1.0 - delta * delta) * c * c);
    (epsilon0, channel_eigenvalue(epsilon0, gamma))
}

/// `k = 2πn/N` for `n = 1..=N`.
pub fn rice_mele_k_grid(n_cells: usize) -> Vec<f64> {
    (1..=n_cells)
        .map(|n| core::f64::consts::TAU * (n as f64 / n_cells as f64))
        .collect()
}
