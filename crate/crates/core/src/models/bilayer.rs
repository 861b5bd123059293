use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{BipartiteLattice, SiteLabels};
use crate::math;
use crate::spectra::channel_eigenvalue;

/// Bilayer square lattice, `N x N` sites per layer, periodic in-plane.
///
/// Layers are coupled by rungs of strength `T`; in-plane nearest neighbours
/// by `J`. The imaginary potential on site `(λ, j, l)` is
/// `iγ (-1)^(λ + j + l)`, so sublattice A is the set of sites with even
/// `λ + j + l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilayerSpec {
    pub n: usize,
    pub j_hop: f64,
    pub t_hop: f64,
    pub gamma: f64,
}

impl BilayerSpec {
    pub fn new(n: usize, j_hop: f64, t_hop: f64, gamma: f64) -> Self {
        Self {
            n,
            j_hop,
            t_hop,
            gamma,
        }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    /// `T > 4J` with `J > 0`: the bonding band stays positive over the whole
    /// zone and its minimum sits at `(π, π)`.
    pub fn in_valley_regime(&self) -> bool {
        self.j_hop > 0.0 && self.t_hop > 4.0 * self.j_hop
    }

    /// `ε0` at the valley, `T - 4J`.
    pub fn gamma_c(&self) -> f64 {
        self.t_hop - 4.0 * self.j_hop
    }

    fn validate(&self) -> Result<()> {
        if !(self.j_hop.is_finite() && self.t_hop.is_finite() && self.gamma.is_finite()) {
            return Err(Error::NonFinite { what: "bilayer parameters" });
        }
        if self.n < 2 {
            return Err(Error::TooSmall { got: self.n, min: 2 });
        }
        if !self.n.is_multiple_of(2) {
            return Err(Error::OddSize(self.n));
        }
        Ok(())
    }
}

/// A site `(λ, j, l)` with 1-based indices as in the model definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteIndex {
    pub layer: usize,
    pub j: usize,
    pub l: usize,
}

impl SiteIndex {
    pub fn on_a(&self) -> bool {
        (self.layer + self.j + self.l).is_multiple_of(2)
    }

    /// Index within its sublattice: the in-plane position, row-major.
    pub fn sublattice_index(&self, n: usize) -> usize {
        (self.j - 1) * n + (self.l - 1)
    }

    /// Layer hosting the A (`a = true`) or B site at in-plane `(j, l)`:
    /// `λ_A = [3 + (-1)^(j+l)]/2`, `λ_B = [3 - (-1)^(j+l)]/2`.
    pub fn layer_of(a: bool, j: usize, l: usize) -> usize {
        let even = (j + l).is_multiple_of(2);
        if even == a {
            2
        } else {
            1
        }
    }
}

pub fn bilayer_lattice(spec: &BilayerSpec) -> Result<BipartiteLattice> {
    spec.validate()?;
    let n = spec.n;
    let wrap = |x: usize| if x == n { 1 } else { x + 1 };
    let jh = Complex64::new(spec.j_hop, 0.0);
    let th = Complex64::new(spec.t_hop, 0.0);

    let mut bonds = Vec::with_capacity(5 * n * n);
    for j in 1..=n {
        for l in 1..=n {
            for layer in 1..=2 {
                let here = SiteIndex { layer, j, l };
                bonds.push((here, SiteIndex { layer, j: wrap(j), l }, jh));
                bonds.push((here, SiteIndex { layer, j, l: wrap(l) }, jh));
            }
            bonds.push((SiteIndex { layer: 1, j, l }, SiteIndex { layer: 2, j, l }, th));
        }
    }

    let mut coupling = Vec::with_capacity(bonds.len());
    for (s1, s2, amp) in bonds {
        let (a, b) = match (s1.on_a(), s2.on_a()) {
            (true, false) => (s1, s2),
            (false, true) => (s2, s1),
            _ => return Err(Error::BrokenBipartiteness),
        };
        coupling.push((a.sublattice_index(n), b.sublattice_index(n), amp));
    }

    let label = |a: bool| {
        (0..n * n)
            .map(|idx| {
                let (j, l) = (idx / n + 1, idx % n + 1);
                format!("({},{},{})", SiteIndex::layer_of(a, j, l), j, l)
            })
            .collect()
    };
    let labels = SiteLabels {
        a: label(true),
        b: label(false),
    };
    BipartiteLattice::from_bonds(n * n, coupling)?.with_labels(labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    Plus,
    Minus,
}

impl Sector {
    pub fn sign(self) -> f64 {
        match self {
            Sector::Plus => 1.0,
            Sector::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sector::Plus => '+',
            Sector::Minus => '-',
        }
    }
}

/// `ε0^±(k) = ±{2J[cos kx + cos ky] + T}` and `ε^± = ±sqrt((ε0^±)² - γ²)`.
pub fn bilayer_dispersion(spec: &BilayerSpec, kx: f64, ky: f64, sector: Sector) -> (f64, Complex64) {
    let braced = 2.0 * spec.j_hop * (math::cos(kx) + math::cos(ky)) + spec.t_hop;
    let s = sector.sign();
    (s * braced, channel_eigenvalue(braced, spec.gamma) * s)
}

/// `k = 2πn/N`; `n = N/2` gives exactly `π`.
pub fn grid_momentum(index: usize, n: usize) -> f64 {
    TAU * (index as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub nx: usize,
    pub ny: usize,
    pub kx: f64,
    pub ky: f64,
    /// `(ε0^+, ε^+)`.
    pub plus: (f64, Complex64),
    /// `(ε0^-, ε^-)`.
    pub minus: (f64, Complex64),
}

impl BandPoint {
    pub fn sector(&self, sector: Sector) -> (f64, Complex64) {
        match sector {
            Sector::Plus => self.plus,
            Sector::Minus => self.minus,
        }
    }
}

/// Dispersion sampled at `k = 2π(nx, ny)/N`, `nx, ny = 1..=N`, row-major in
/// `(nx, ny)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandGrid {
    pub spec: BilayerSpec,
    pub points: Vec<BandPoint>,
}

impl BandGrid {
    /// Both sectors at every point: `2N²` values.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.points.iter().flat_map(|p| [p.plus.1, p.minus.1]).collect()
    }

    /// Smallest real `ε^+` on the grid, i.e. half the band gap.
    pub fn min_real_plus(&self) -> Option<f64> {
        self.points
            .iter()
            .map(|p| p.plus.1)
            .filter(|e| e.im == 0.0)
            .map(|e| e.re)
            .reduce(f64::min)
    }

    pub fn point(&self, nx: usize, ny: usize) -> &BandPoint {
        let n = self.spec.n;
        &self.points[(nx - 1) * n + (ny - 1)]
    }
}

pub fn band_grid(spec: &BilayerSpec) -> Result<BandGrid> {
    spec.validate()?;
    let n = spec.n;
    let mut points = Vec::with_capacity(n * n);
    for nx in 1..=n {
        let kx = grid_momentum(nx, n);
        for ny in 1..=n {
            let ky = grid_momentum(ny, n);
            points.push(BandPoint {
                nx,
                ny,
                kx,
                ky,
                plus: bilayer_dispersion(spec, kx, ky, Sector::Plus),
                minus: bilayer_dispersion(spec, kx, ky, Sector::Minus),
            });
        }
    }
    Ok(BandGrid { spec: *spec, points })
}

/// Near-valley expansion `(dk_x/a)² + (dk_y/b)² - (ε/c)² = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperboloid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Hyperboloid {
    /// `|(dk_x/a)² + (dk_y/b)² - (ε/c)² + 1|`; requires `c > 0`.
    pub fn residual(&self, dkx: f64, dky: f64, eps: f64) -> f64 {
        let lhs = (dkx / self.a) * (dkx / self.a) + (dky / self.b) * (dky / self.b) - (eps / self.c) * (eps / self.c);
        math::abs(lhs + 1.0)
    }

    /// `ε` predicted at momentum offset `(dk_x, dk_y)`.
    pub fn energy(&self, dkx: f64, dky: f64) -> f64 {
        self.c * math::sqrt(1.0 + (dkx / self.a) * (dkx / self.a) + (dky / self.b) * (dky / self.b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValleyAnalysis {
    pub gamma_c: f64,
    /// `2 sqrt((T - 4J)² - γ²)`; `None` in the broken phase.
    pub gap: Option<f64>,
    pub valley_points: Vec<(f64, f64)>,
    /// Present for `0 <= |γ| <= γ_c`.
    pub hyperboloid: Option<Hyperboloid>,
    /// `J sqrt(2(T/J - 4))`, present for `|γ| <= γ_c`.
    pub group_velocity: Option<f64>,
    gamma: f64,
}

impl ValleyAnalysis {
    pub fn require_hyperboloid(&self) -> Result<Hyperboloid> {
        self.hyperboloid.ok_or(Error::OutsideRegime {
            gamma: self.gamma,
            gamma_c: self.gamma_c,
        })
    }

    pub fn require_group_velocity(&self) -> Result<f64> {
        self.group_velocity.ok_or(Error::OutsideRegime {
            gamma: self.gamma,
            gamma_c: self.gamma_c,
        })
    }
}

pub fn valley_analysis(spec: &BilayerSpec) -> Result<ValleyAnalysis> {
    spec.validate()?;
    if !spec.in_valley_regime() {
        return Err(Error::InvalidArgument("valley analysis requires T > 4J > 0"));
    }
    let j = spec.j_hop;
    let gamma_c = spec.gamma_c();
    let g = math::abs(spec.gamma);
    let unbroken = g <= gamma_c;
    let c = math::sqrt(math::diff_of_squares(gamma_c, g).max(0.0));
    let a = c / math::sqrt(2.0 * j * gamma_c);
    Ok(ValleyAnalysis {
        gamma_c,
        gap: unbroken.then_some(2.0 * c),
        valley_points: alloc::vec![(PI, PI)],
        hyperboloid: unbroken.then_some(Hyperboloid { a, b: a, c }),
        group_velocity: unbroken.then_some(j * math::sqrt(2.0 * (spec.t_hop / j - 4.0))),
        gamma: spec.gamma,
    })
}
