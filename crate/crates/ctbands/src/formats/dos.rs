use std::io::Write;

use ctbands_core::dos::DosHistogram;
use serde::{Deserialize, Serialize};

use super::FormatError;

/// JSON sidecar written next to a DOS table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosMetadata {
    #[serde(rename = "J")]
    pub j_hop: f64,
    #[serde(rename = "T")]
    pub t_hop: f64,
    pub gamma: f64,
    #[serde(rename = "M")]
    pub grid: usize,
    #[serde(rename = "B")]
    pub bins: usize,
    pub integral: f64,
}

impl DosMetadata {
    pub fn new(hist: &DosHistogram) -> Self {
        let p = &hist.params;
        Self {
            j_hop: p.j_hop,
            t_hop: p.t_hop,
            gamma: p.gamma,
            grid: p.grid,
            bins: p.bins,
            integral: hist.integral(),
        }
    }
}

/// Writes `eps_center,density` rows in ascending energy.
pub fn write_dos_csv<W: Write>(out: W, hist: &DosHistogram) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eps_center", "density"])?;
    for (c, d) in hist.bin_centers().iter().zip(&hist.density) {
        w.write_record([c.to_string(), d.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
