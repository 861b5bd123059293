//! On-disk formats: lattice JSON, spectrum/scan/verify JSON reports, band and
//! DOS CSV tables.

mod bands;
mod dos;
mod lattice;
mod reports;

use thiserror::Error;

pub use bands::{write_band_csv, BandRow};
pub use dos::{write_dos_csv, DosMetadata};
pub use lattice::{lattice_from_json, lattice_to_json, LabelsDocument, LatticeDocument};
pub use reports::{ScanDocument, SpectrumDocument, VerifyDocument};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("coupling ({0}, {1}) listed more than once")]
    DuplicateCoupling(usize, usize),
    #[error(transparent)]
    Lattice(#[from] ctbands_core::Error),
}
