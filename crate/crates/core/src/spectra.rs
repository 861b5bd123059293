//! Closed-form spectrum of `H = H0 + Hγ` through the pseudo-spin reduction.
//!
//! Each singular triple `(ε0, φ_A, φ_B)` of the coupling block spans a
//! two-dimensional invariant subspace on which `H` acts as `ε0·σx + iγ·σz`.
//! Its eigenvalues are `ε± = ±sqrt(ε0² - γ²)` and its eigenvectors are
//! `ψ± ∝ (φ_A, r±·φ_B)` with amplitude ratio `r± = (ε± - iγ)/ε0`.
//!
//! Branch convention: `ε+` lies on the non-negative real axis while the
//! channel is unbroken (`|γ| <= ε0`) and on the positive imaginary axis once
//! it is broken. In both phases `ε- = -ε+`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{assemble, BipartiteLattice, NhHamiltonian};
use crate::math;
use crate::numerics::{dot, svd, vec_norm, SvdResult};

/// Tolerance handed to the eigensolver's Hermitian check on `Q†Q`.
const SVD_TOL: f64 = 1e-12;

/// One pseudo-spin channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPair {
    pub epsilon0: f64,
    pub phi_a: Vec<Complex64>,
    pub phi_b: Vec<Complex64>,
    /// `(ε+, ε-)`.
    pub eigenvalues: (Complex64, Complex64),
    /// `(ψ+, ψ-)`, Dirac-normalized, A amplitudes first.
    pub eigenvectors: (Vec<Complex64>, Vec<Complex64>),
    /// `None` for zero modes, where the phase is undefined.
    pub theta: Option<Complex64>,
    pub broken: bool,
    pub zero_mode: bool,
}

impl SpectralPair {
    fn build(epsilon0: f64, phi_a: Vec<Complex64>, phi_b: Vec<Complex64>, gamma: f64) -> Self {
        let plus = channel_eigenvalue(epsilon0, gamma);
        let minus = -plus;
        let make = |eps: Complex64| {
            let ratio = (eps - Complex64::new(0.0, gamma)) / epsilon0;
            let norm = math::sqrt(1.0 + ratio.norm_sqr());
            let mut psi = Vec::with_capacity(2 * phi_a.len());
            psi.extend(phi_a.iter().map(|z| z / norm));
            psi.extend(phi_b.iter().map(|z| z * ratio / norm));
            psi
        };
        let eigenvectors = (make(plus), make(minus));
        Self {
            epsilon0,
            eigenvalues: (plus, minus),
            eigenvectors,
            theta: theta_of(epsilon0, gamma).ok(),
            broken: epsilon0 < math::abs(gamma),
            zero_mode: false,
            phi_a,
            phi_b,
        }
    }

    /// `ε0 = 0`: `Q φ_B = 0` and `Q† φ_A = 0`, so the pure-A and pure-B vectors
    /// are eigenvectors with eigenvalues `+iγ` and `-iγ`.
    fn zero_mode(phi_a: Vec<Complex64>, phi_b: Vec<Complex64>, gamma: f64) -> Self {
        let n = phi_a.len();
        let zeros = vec![Complex64::new(0.0, 0.0); n];
        let pure_a: Vec<Complex64> = phi_a.iter().copied().chain(zeros.iter().copied()).collect();
        let pure_b: Vec<Complex64> = zeros.iter().copied().chain(phi_b.iter().copied()).collect();
        let up = Complex64::new(0.0, gamma);
        let (eigenvalues, eigenvectors) = if gamma >= 0.0 {
            ((up, -up), (pure_a, pure_b))
        } else {
            ((-up, up), (pure_b, pure_a))
        };
        Self {
            epsilon0: 0.0,
            phi_a,
            phi_b,
            eigenvalues,
            eigenvectors,
            theta: None,
            broken: gamma != 0.0,
            zero_mode: true,
        }
    }

    /// `|<ψ+|ψ->|`; reaches 1 when the two eigenvectors coalesce.
    pub fn overlap(&self) -> f64 {
        dot(&self.eigenvectors.0, &self.eigenvectors.1).norm()
    }
}

/// `ε+ = sqrt(ε0² - γ²)` on the principal branch.
pub fn channel_eigenvalue(epsilon0: f64, gamma: f64) -> Complex64 {
    let d = math::diff_of_squares(epsilon0, gamma);
    if d >= 0.0 {
        Complex64::new(math::sqrt(d), 0.0)
    } else {
        Complex64::new(0.0, math::sqrt(-d))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Ordered by descending `ε0`; zero modes last.
    pub pairs: Vec<SpectralPair>,
    pub gamma: f64,
    /// Smallest nonzero `ε0`, i.e. the first exceptional point. Zero when the
    /// coupling block has no nonzero singular value.
    pub gamma_c: f64,
    pub fully_real: bool,
    pub zero_modes: usize,
}

impl SpectrumReport {
    /// All `2N` eigenvalues, `(ε+, ε-)` per channel.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.pairs
            .iter()
            .flat_map(|p| [p.eigenvalues.0, p.eigenvalues.1])
            .collect()
    }

    /// `(ε, ψ)` for every eigenpair in channel order.
    pub fn eigenpairs(&self) -> impl Iterator<Item = (Complex64, &[Complex64])> + '_ {
        self.pairs.iter().flat_map(|p| {
            [
                (p.eigenvalues.0, p.eigenvectors.0.as_slice()),
                (p.eigenvalues.1, p.eigenvectors.1.as_slice()),
            ]
        })
    }

    pub fn broken_channels(&self) -> usize {
        self.pairs.iter().filter(|p| p.broken).count()
    }

    /// Largest `‖Hψ - εψ‖ / ‖H‖_F` over all eigenpairs.
    pub fn max_relative_residual(&self, h: &NhHamiltonian) -> f64 {
        let scale = h.matrix().frobenius_norm();
        let scale = if scale == 0.0 { 1.0 } else { scale };
        self.eigenpairs()
            .map(|(eps, psi)| eigenpair_residual(h, eps, psi) / scale)
            .fold(0.0, f64::max)
    }
}

fn is_fully_real(gamma: f64, gamma_c: f64, zero_modes: usize) -> bool {
    gamma == 0.0 || (math::abs(gamma) < gamma_c && zero_modes == 0)
}

pub fn solve(h: &NhHamiltonian) -> Result<SpectrumReport> {
    let decomposition = svd(h.lattice().coupling(), SVD_TOL)?;
    Ok(report_from_svd(&decomposition, h.gamma()))
}

/// Convenience: assemble and solve in one step.
pub fn solve_lattice(lattice: &BipartiteLattice, gamma: f64) -> Result<SpectrumReport> {
    solve(&assemble(lattice, gamma)?)
}

fn gamma_c_of(decomposition: &SvdResult) -> f64 {
    // Singular values are sorted descending with zero modes last.
    decomposition
        .singular_values
        .iter()
        .rev()
        .find(|&&s| s > 0.0)
        .copied()
        .unwrap_or(0.0)
}

fn report_from_svd(decomposition: &SvdResult, gamma: f64) -> SpectrumReport {
    let pairs: Vec<SpectralPair> = decomposition
        .singular_values
        .iter()
        .enumerate()
        .map(|(n, &s)| {
            let phi_a = decomposition.left_vector(n);
            let phi_b = decomposition.right_vector(n);
            if s > 0.0 {
                SpectralPair::build(s, phi_a, phi_b, gamma)
            } else {
                SpectralPair::zero_mode(phi_a, phi_b, gamma)
            }
        })
        .collect();
    let gamma_c = gamma_c_of(decomposition);
    let zero_modes = decomposition.zero_modes;
    SpectrumReport {
        pairs,
        gamma,
        gamma_c,
        fully_real: is_fully_real(gamma, gamma_c, zero_modes),
        zero_modes,
    }
}

/// Phase `θ` defined by `e^{-iθ} = (ε+ - iγ)/ε0`.
///
/// Real `θ = asin(γ/ε0)` while `|γ| <= ε0`; beyond that
/// `θ = ±π/2 ∓ i·acosh(|γ|/ε0)` with the upper signs for `γ > 0`.
pub fn theta_of(epsilon0: f64, gamma: f64) -> Result<Complex64> {
    if !(epsilon0 > 0.0) {
        return Err(Error::ZeroEpsilon(epsilon0));
    }
    let x = gamma / epsilon0;
    if math::abs(x) <= 1.0 {
        return Ok(Complex64::new(math::asin(x), 0.0));
    }
    let u = math::acosh(math::abs(x));
    let half_pi = core::f64::consts::FRAC_PI_2;
    Ok(if gamma > 0.0 {
        Complex64::new(half_pi, -u)
    } else {
        Complex64::new(-half_pi, u)
    })
}

/// Dirac normalization coefficients `Ω± = 1 + exp(±2 Im θ)`.
pub fn omega_norms(theta: Complex64) -> (f64, f64) {
    (1.0 + math::exp(2.0 * theta.im), 1.0 + math::exp(-2.0 * theta.im))
}

/// `‖Hψ - εψ‖`.
pub fn eigenpair_residual(h: &NhHamiltonian, eps: Complex64, psi: &[Complex64]) -> f64 {
    let hpsi = h.matrix().mul_vec(psi).expect("state length matches H");
    let diff: Vec<Complex64> = hpsi.iter().zip(psi).map(|(a, b)| a - b * eps).collect();
    vec_norm(&diff)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub gamma: f64,
    pub fully_real: bool,
    pub broken_channels: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub gamma_c: f64,
    /// First consecutive pair `(γ_i, γ_{i+1})` where the spectrum goes from
    /// fully real to not fully real.
    pub transition: Option<(f64, f64)>,
}

impl ScanReport {
    /// Midpoint of the transition bracket.
    pub fn exceptional_point_estimate(&self) -> Option<f64> {
        self.transition.map(|(lo, hi)| 0.5 * (lo + hi))
    }
}

/// Count broken channels (`ε0 < |γ|`) at each requested `γ`. The coupling
/// block is decomposed once.
pub fn exceptional_scan(lattice: &BipartiteLattice, gamma_values: &[f64]) -> Result<ScanReport> {
    if gamma_values.is_empty() {
        return Err(Error::InvalidArgument("gamma list is empty"));
    }
    if gamma_values.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite { what: "gamma" });
    }
    let decomposition = svd(lattice.coupling(), SVD_TOL)?;
    let gamma_c = gamma_c_of(&decomposition);
    let rows: Vec<ScanRow> = gamma_values
        .iter()
        .map(|&gamma| ScanRow {
            gamma,
            fully_real: is_fully_real(gamma, gamma_c, decomposition.zero_modes),
            broken_channels: decomposition
                .singular_values
                .iter()
                .filter(|&&s| s < math::abs(gamma))
                .count(),
        })
        .collect();
    let transition = rows
        .windows(2)
        .find(|w| w[0].fully_real && !w[1].fully_real)
        .map(|w| (w[0].gamma, w[1].gamma));
    Ok(ScanReport {
        rows,
        gamma_c,
        transition,
    })
}

/// Largest distance in a greedy nearest-neighbour matching of two multisets,
/// or `None` when their sizes differ.
pub fn multiset_max_deviation(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
