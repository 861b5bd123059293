use ctbands_core::spectra::ScanReport;
use ctbands_core::verify::VerifyReport;
use ctbands_core::{Complex64, SpectrumReport};
use serde::Serialize;

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumDocument {
    pub gamma: f64,
    pub gamma_c: f64,
    pub fully_real: bool,
    pub zero_modes: usize,
    pub channels: Vec<ChannelDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChannelDocument {
    pub epsilon0: f64,
    /// `[[re, im], [re, im]]` for `ε+` then `ε-`.
    pub eigenvalues: [[f64; 2]; 2],
    pub broken: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<[Vec<[f64; 2]>; 2]>,
}

impl SpectrumDocument {
    pub fn new(report: &SpectrumReport, vectors: bool) -> Self {
        let channels = report
            .pairs
            .iter()
            .map(|p| ChannelDocument {
                epsilon0: p.epsilon0,
                eigenvalues: [pair(p.eigenvalues.0), pair(p.eigenvalues.1)],
                broken: p.broken,
                eigenvectors: vectors.then(|| {
                    [
                        p.eigenvectors.0.iter().copied().map(pair).collect(),
                        p.eigenvectors.1.iter().copied().map(pair).collect(),
                    ]
                }),
            })
            .collect();
        Self {
            gamma: report.gamma,
            gamma_c: report.gamma_c,
            fully_real: report.fully_real,
            zero_modes: report.zero_modes,
            channels,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanDocument {
    pub gamma_c: f64,
    pub transition: Option<TransitionDocument>,
    pub rows: Vec<ScanRowDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitionDocument {
    pub last_real: f64,
    pub first_broken: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRowDocument {
    pub gamma: f64,
    pub fully_real: bool,
    pub broken_channels: usize,
}

impl ScanDocument {
    pub fn new(report: &ScanReport) -> Self {
        Self {
            gamma_c: report.gamma_c,
            transition: report.transition.map(|(lo, hi)| TransitionDocument {
                last_real: lo,
                first_broken: hi,
                estimate: 0.5 * (lo + hi),
            }),
            rows: report
                .rows
                .iter()
                .map(|r| ScanRowDocument {
                    gamma: r.gamma,
                    fully_real: r.fully_real,
                    broken_channels: r.broken_channels,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyDocument {
    pub gamma: f64,
    pub all_passed: bool,
    pub checks: Vec<CheckDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDocument {
    pub name: &'static str,
    pub status: &'static str,
    pub value: Option<f64>,
    pub tolerance: f64,
}

impl VerifyDocument {
    pub fn new(report: &VerifyReport) -> Self {
        Self {
            gamma: report.gamma,
            all_passed: report.all_passed(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckDocument {
                    name: c.name,
                    status: c.status.as_str(),
                    value: c.value,
                    tolerance: c.tolerance,
                })
                .collect(),
        }
    }
}
