//! Density of states of the bilayer model by box counting on a dense
//! Brillouin-zone grid.
//!
//! Every grid point contributes one sample to each of the two bands
//! `ε^+ = +|ε|` and `ε^- = -|ε|`, weighted by `(2π/M)² / (4π²) / Δ`, so the
//! histogram integrates to exactly 2 states per unit cell.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::math;
use crate::models::{grid_momentum, BilayerSpec};

pub const MIN_GRID: usize = 64;
pub const MIN_BINS: usize = 32;
pub const MIN_FIT_BINS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosParams {
    pub j_hop: f64,
    pub t_hop: f64,
    pub gamma: f64,
    /// Grid points per direction, `M`.
    pub grid: usize,
    /// Number of bins, `B`.
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DosHistogram {
    /// `B + 1` ascending edges spanning `[-E_max, E_max]`.
    pub bin_edges: Vec<f64>,
    /// States per unit energy per unit cell.
    pub density: Vec<f64>,
    /// Raw sample counts per bin.
    pub counts: Vec<u64>,
    pub params: DosParams,
}

impl DosHistogram {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `Σ D·Δ`, equal to 2 up to rounding.
    pub fn integral(&self) -> f64 {
        let dx = self.bin_width();
        self.density.iter().map(|d| d * dx).sum()
    }

    /// Largest `|D(ε) - D(-ε)| / max(D)` over mirrored bin pairs, together with
    /// whether every pair is within `2/sqrt(samples per bin)`.
    pub fn mirror_asymmetry(&self) -> (f64, bool) {
        let b = self.counts.len();
        let peak = self.density.iter().copied().fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        let mut within = true;
        for i in 0..b / 2 {
            let (lo, hi) = (self.counts[i], self.counts[b - 1 - i]);
            let diff = math::abs(lo as f64 - hi as f64);
            if peak > 0.0 {
                worst = worst.max(math::abs(self.density[i] - self.density[b - 1 - i]) / peak);
            }
            let samples = lo.max(hi);
            if samples > 0 && diff / samples as f64 > 2.0 / math::sqrt(samples as f64) {
                within = false;
            }
        }
        (worst, within)
    }
}

/// Smallest `|ε0|` over the zone, `min |2J(cos kx + cos ky) + T|`.
pub fn band_gamma_c(j_hop: f64, t_hop: f64) -> f64 {
    let lo = t_hop - 4.0 * math::abs(j_hop);
    let hi = t_hop + 4.0 * math::abs(j_hop);
    if lo <= 0.0 && hi >= 0.0 {
        0.0
    } else {
        math::abs(lo).min(math::abs(hi))
    }
}

/// Validated sampling plan: grid, energy window and bin geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosSampler {
    spec: BilayerSpec,
    grid: usize,
    bins: usize,
    e_max: f64,
    width: f64,
}

impl DosSampler {
    pub fn new(spec: &BilayerSpec, grid: usize, bins: usize) -> Result<Self> {
        if !(spec.j_hop.is_finite() && spec.t_hop.is_finite() && spec.gamma.is_finite()) {
            return Err(Error::NonFinite { what: "bilayer parameters" });
        }
        if grid < MIN_GRID {
            return Err(Error::TooSmall { got: grid, min: MIN_GRID });
        }
        if bins < MIN_BINS {
            return Err(Error::TooSmall { got: bins, min: MIN_BINS });
        }
        let gamma_c = band_gamma_c(spec.j_hop, spec.t_hop);
        if math::abs(spec.gamma) > gamma_c {
            return Err(Error::BrokenPhase {
                gamma: spec.gamma,
                gamma_c,
            });
        }
        let eps0_max = math::abs(spec.t_hop) + 4.0 * math::abs(spec.j_hop);
        let e_max = math::sqrt(math::diff_of_squares(eps0_max, spec.gamma));
        if !(e_max > 0.0) {
            return Err(Error::InvalidArgument("band has zero width"));
        }
        Ok(Self {
            spec: *spec,
            grid,
            bins,
            e_max,
            width: 2.0 * e_max / bins as f64,
        })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// Bin of a non-negative energy; `-ε` lands in the mirrored bin.
    fn bin_of(&self, eps: f64) -> usize {
        let idx = ((eps + self.e_max) / self.width) as usize;
        idx.min(self.bins - 1)
    }

    /// Add the samples of grid rows `rows` (indices `nx` in `1..=M`) to
    /// `counts`.
    pub fn accumulate_rows(&self, rows: Range<usize>, counts: &mut [u64]) {
        assert_eq!(counts.len(), self.bins);
        let m = self.grid;
        let s = &self.spec;
        let cos_k: Vec<f64> = (1..=m).map(|i| math::cos(grid_momentum(i, m))).collect();
        for nx in rows {
            let cx = cos_k[nx - 1];
            for &cy in &cos_k {
                let eps0 = 2.0 * s.j_hop * (cx + cy) + s.t_hop;
                let eps = math::sqrt(math::diff_of_squares(eps0, s.gamma).max(0.0));
                let bin = self.bin_of(eps);
                counts[bin] += 1;
                counts[self.bins - 1 - bin] += 1;
            }
        }
    }

    pub fn finish(&self, counts: Vec<u64>) -> DosHistogram {
        let m = self.grid as f64;
        let weight = 1.0 / (m * m * self.width);
        let bin_edges = (0..=self.bins)
            .map(|i| -self.e_max + i as f64 * self.width)
            .collect();
        let density = counts.iter().map(|&c| c as f64 * weight).collect();
        DosHistogram {
            bin_edges,
            density,
            counts,
            params: DosParams {
                j_hop: self.spec.j_hop,
                t_hop: self.spec.t_hop,
                gamma: self.spec.gamma,
                grid: self.grid,
                bins: self.bins,
            },
        }
    }
}

/// Sequential box-counting density of states on an `M x M` grid with `B`
/// uniform bins.
pub fn dos_histogram(spec: &BilayerSpec, grid: usize, bins: usize) -> Result<DosHistogram> {
    let sampler = DosSampler::new(spec, grid, bins)?;
    let mut counts = vec![0u64; bins];
    sampler.accumulate_rows(1..grid + 1, &mut counts);
    Ok(sampler.finish(counts))
}

/// Near-valley approximation `D(ε) = |ε| / (4π J γ_c)` for
/// `|ε| >= sqrt(γ_c² - γ²)`, zero inside the gap.
pub fn dos_approx(epsilon: f64, j_hop: f64, gamma: f64, gamma_c: f64) -> Result<f64> {
    if !(gamma_c > 0.0) {
        return Err(Error::InvalidArgument("gamma_c must be positive"));
    }
    let threshold = math::sqrt(math::diff_of_squares(gamma_c, gamma).max(0.0));
    let e = math::abs(epsilon);
    Ok(if e >= threshold {
        e / (4.0 * core::f64::consts::PI * j_hop * gamma_c)
    } else {
        0.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Ordinary least squares of `D` against `|ε|` over bins whose centers
/// satisfy `lo <= |ε| <= hi`, pooling both signs of `ε`.
pub fn dos_linear_fit(hist: &DosHistogram, window: (f64, f64)) -> Result<LinearFit> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::InvalidArgument("fit window must satisfy 0 <= lo < hi"));
    }
    let e_max = *hist.bin_edges.last().expect("edges");
    if hi > e_max {
        return Err(Error::InvalidArgument("fit window exceeds histogram support"));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = hist
        .bin_centers()
        .into_iter()
        .zip(hist.density.iter().copied())
        .map(|(c, d)| (math::abs(c), d))
        .filter(|&(x, _)| x >= lo && x <= hi)
        .unzip();
    if xs.len() < MIN_FIT_BINS {
        return Err(Error::InsufficientBins {
            got: xs.len(),
            min: MIN_FIT_BINS,
        });
    }
    Ok(least_squares(&xs, &ys))
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 {
        1.0 - ss_res / syy
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
        points: xs.len(),
    }
}

/// Slope of the one-parameter model `D = s·|ε|` over the same window.
pub fn dos_proportional_slope(hist: &DosHistogram, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let pairs: Vec<(f64, f64)> = hist
        .bin_centers()
        .into_iter()
        .zip(hist.density.iter().copied())
        .map(|(c, d)| (math::abs(c), d))
        .filter(|&(x, _)| x >= lo && x <= hi)
        .collect();
    if pairs.len() < MIN_FIT_BINS {
        return Err(Error::InsufficientBins {
            got: pairs.len(),
            min: MIN_FIT_BINS,
        });
    }
    let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> DosHistogram {
        let bins = 40;
        let edges: Vec<f64> = (0..=bins).map(|i| -2.0 + 0.1 * i as f64).collect();
        let density = edges.windows(2).map(|w| f(0.5 * (w[0] + w[1]))).collect();
        DosHistogram {
            bin_edges: edges,
            density,
            counts: vec![0; bins],
            params: DosParams {
                j_hop: 1.0,
                t_hop: 5.0,
                gamma: 0.0,
                grid: 64,
                bins,
            },
        }
    }

    #[test]
    fn approx_formula() {
        let d = dos_approx(0.5, 1.0, 1.0, 1.0).unwrap();
        assert!((d - 0.039_788_735_772_973_836).abs() < 1e-15);
        assert_eq!(dos_approx(0.1, 1.0, 0.98, 1.0).unwrap(), 0.0);
        assert_eq!(dos_approx(0.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(dos_approx(0.0, 2.0, 0.3, 0.7).unwrap(), 0.0);
        assert!(dos_approx(0.5, 1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn fit_exact_line() {
        let fit = dos_linear_fit(&synthetic(|e| 0.3 * e.abs()), (0.05, 1.5)).unwrap();
        assert!((fit.slope - 0.3).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_flat() {
        let fit = dos_linear_fit(&synthetic(|_| 0.25), (0.05, 1.5)).unwrap();
        assert!(fit.slope.abs() < 1e-15);
        assert!((fit.intercept - 0.25).abs() < 1e-15);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn fit_needs_bins() {
        let h = synthetic(|e| e);
        assert!(matches!(
            dos_linear_fit(&h, (0.0, 0.1)),
            Err(Error::InsufficientBins { got: 2, .. })
        ));
        assert!(dos_linear_fit(&h, (0.5, 0.1)).is_err());
        assert!(dos_linear_fit(&h, (0.5, 3.0)).is_err());
    }

    #[test]
    fn rejects_broken_phase_and_small_grids() {
        let spec = BilayerSpec::new(2, 1.0, 5.0, 1.2);
        assert!(matches!(dos_histogram(&spec, 64, 32), Err(Error::BrokenPhase { .. })));
        let spec = spec.with_gamma(0.5);
        assert!(matches!(dos_histogram(&spec, 32, 32), Err(Error::TooSmall { .. })));
        assert!(matches!(dos_histogram(&spec, 64, 16), Err(Error::TooSmall { .. })));
    }

    #[test]
    fn gamma_c_of_band() {
        assert_eq!(band_gamma_c(1.0, 5.0), 1.0);
        assert_eq!(band_gamma_c(-1.0, 5.0), 1.0);
        assert_eq!(band_gamma_c(1.0, 3.0), 0.0);
        assert_eq!(band_gamma_c(1.0, -6.0), 2.0);
    }

    #[test]
    fn small_histogram_is_normalized_and_symmetric() {
        let h = dos_histogram(&BilayerSpec::new(2, 1.0, 5.0, 0.5), 64, 32).unwrap();
        assert!((h.integral() - 2.0).abs() < 1e-12);
        assert_eq!(h.counts.iter().sum::<u64>(), 2 * 64 * 64);
        let (worst, within) = h.mirror_asymmetry();
        assert_eq!(worst, 0.0);
        assert!(within);
    }
}
