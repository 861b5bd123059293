//! One-shot consistency report for an assembled model: CT anticommutation,
//! conjugate-pair spectrum, eigenpair residuals, Dirac-probability invariance
//! and (for the bilayer) DOS normalization.

use alloc::vec::Vec;

use crate::dos::{dos_histogram, DosHistogram};
use crate::error::{Error, Result};
use crate::lattice::{assemble, check_conjugate_pair_spectrum, BipartiteLattice};
use crate::math;
use crate::models::BilayerSpec;
use crate::spectra::{solve, SpectrumReport};

pub const CT_RTOL: f64 = 1e-12;
pub const CONJUGATE_PAIR_TOL: f64 = 1e-9;
pub const RESIDUAL_RTOL: f64 = 1e-9;
pub const PROBABILITY_TOL: f64 = 1e-10;
pub const DOS_NORMALIZATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    /// Measured quantity, when the check has one.
    pub value: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub gamma: f64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// DOS grid used for the normalization check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosCheck {
    pub spec: BilayerSpec,
    pub grid: usize,
    pub bins: usize,
}

pub fn verify(lattice: &BipartiteLattice, gamma: f64, dos: Option<DosCheck>) -> Result<VerifyReport> {
    let h = assemble(lattice, gamma)?;
    let report = solve(&h)?;
    let mut checks = Vec::new();

    let scale = h.matrix().max_abs();
    let ct = h.ct_residual();
    checks.push(CheckResult {
        name: "ct_anticommutation",
        status: CheckStatus::from_bool(ct <= CT_RTOL * scale),
        value: Some(ct),
        tolerance: CT_RTOL,
    });

    checks.push(CheckResult {
        name: "conjugate_pairs",
        status: CheckStatus::from_bool(check_conjugate_pair_spectrum(&report.eigenvalues(), CONJUGATE_PAIR_TOL)),
        value: None,
        tolerance: CONJUGATE_PAIR_TOL,
    });

    let residual = report.max_relative_residual(&h);
    checks.push(CheckResult {
        name: "eigenpair_residual",
        status: CheckStatus::from_bool(residual <= RESIDUAL_RTOL),
        value: Some(residual),
        tolerance: RESIDUAL_RTOL,
    });

    let reference = solve(&assemble(lattice, 0.0)?)?;
    checks.push(match probability_deviation(&report, &reference) {
        Some(dev) => CheckResult {
            name: "dirac_probability",
            status: CheckStatus::from_bool(dev <= PROBABILITY_TOL),
            value: Some(dev),
            tolerance: PROBABILITY_TOL,
        },
        None => CheckResult {
            name: "dirac_probability",
            status: CheckStatus::Skipped,
            value: None,
            tolerance: PROBABILITY_TOL,
        },
    });

    if let Some(d) = dos {
        let spec = d.spec.with_gamma(gamma);
        checks.push(match dos_histogram(&spec, d.grid, d.bins) {
            Ok(hist) => dos_check(&hist),
            Err(Error::BrokenPhase { .. }) => CheckResult {
                name: "dos_normalization",
                status: CheckStatus::Skipped,
                value: None,
                tolerance: DOS_NORMALIZATION_TOL,
            },
            Err(e) => return Err(e),
        });
    }

    Ok(VerifyReport { gamma, checks })
}

fn dos_check(hist: &DosHistogram) -> CheckResult {
    let integral = hist.integral();
    CheckResult {
        name: "dos_normalization",
        status: CheckStatus::from_bool(math::abs(integral - 2.0) <= DOS_NORMALIZATION_TOL),
        value: Some(integral),
        tolerance: DOS_NORMALIZATION_TOL,
    }
}

/// Largest per-site `| |ψ[s]|² - |φ[s]|² |` between each unbroken channel and
/// the same channel at `γ = 0`; `None` when no channel is unbroken.
pub fn probability_deviation(report: &SpectrumReport, reference: &SpectrumReport) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for (p, r) in report.pairs.iter().zip(&reference.pairs) {
        if p.broken {
            continue;
        }
        for (psi, phi) in [
            (&p.eigenvectors.0, &r.eigenvectors.0),
            (&p.eigenvectors.1, &r.eigenvectors.1),
        ] {
            for (a, b) in psi.iter().zip(phi.iter()) {
                let d = math::abs(a.norm_sqr() - b.norm_sqr());
                worst = Some(worst.map_or(d, |w: f64| w.max(d)));
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::bilayer_lattice;

    #[test]
    fn bilayer_unbroken_all_pass() {
        let spec = BilayerSpec::new(4, 1.0, 5.0, 0.5);
        let lat = bilayer_lattice(&spec).unwrap();
        let r = verify(&lat, 0.5, Some(DosCheck { spec, grid: 64, bins: 32 })).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert!(r.checks.iter().all(|c| c.status == CheckStatus::Pass));
    }

    #[test]
    fn bilayer_broken_skips_probability_of_broken_channels() {
        let spec = BilayerSpec::new(4, 1.0, 5.0, 1.5);
        let lat = bilayer_lattice(&spec).unwrap();
        let r = verify(&lat, 1.5, Some(DosCheck { spec, grid: 64, bins: 32 })).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.check("conjugate_pairs").unwrap().status, CheckStatus::Pass);
        assert_eq!(r.check("eigenpair_residual").unwrap().status, CheckStatus::Pass);
        assert_eq!(r.check("dos_normalization").unwrap().status, CheckStatus::Skipped);
    }

    #[test]
    fn hermitian_limit_is_exact() {
        let lat = bilayer_lattice(&BilayerSpec::new(4, 1.0, 5.0, 0.0)).unwrap();
        let r = verify(&lat, 0.0, None).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.check("ct_anticommutation").unwrap().value, Some(0.0));
        assert_eq!(r.check("dirac_probability").unwrap().value, Some(0.0));
        assert!(r.check("eigenpair_residual").unwrap().value.unwrap() < 1e-14);
    }
}
