use std::io::Write;

use ctbands_core::models::{BandGrid, Sector};
use serde::Serialize;

use super::FormatError;

/// One row of the band table, `k_x,k_y,sector,eps0,eps_re,eps_im`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandRow {
    pub k_x: f64,
    pub k_y: f64,
    pub sector: char,
    pub eps0: f64,
    pub eps_re: f64,
    pub eps_im: f64,
}

impl BandRow {
    pub fn rows(grid: &BandGrid, full: bool) -> Vec<BandRow> {
        let sectors: &[Sector] = if full { &[Sector::Plus, Sector::Minus] } else { &[Sector::Plus] };
        let mut rows = Vec::with_capacity(grid.points.len() * sectors.len());
        for p in &grid.points {
            for &s in sectors {
                let (eps0, eps) = p.sector(s);
                rows.push(BandRow {
                    k_x: p.kx,
                    k_y: p.ky,
                    sector: s.symbol(),
                    eps0,
                    eps_re: eps.re,
                    eps_im: eps.im,
                });
            }
        }
        rows
    }
}

/// Writes the band table in row-major `(n_x, n_y)` order. Only the `+` sector
/// is emitted unless `full` is set.
pub fn write_band_csv<W: Write>(out: W, grid: &BandGrid, full: bool) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    for row in BandRow::rows(grid, full) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
