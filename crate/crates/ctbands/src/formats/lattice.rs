use std::collections::HashSet;

use ctbands_core::lattice::SiteLabels;
use ctbands_core::{BipartiteLattice, Complex64};
use serde::{Deserialize, Serialize};

use super::FormatError;

/// `{"n": int, "couplings": [[i, j, re, im], ...], "labels": optional}` with
/// `i` an A-site and `j` a B-site index. Unlisted couplings are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub n: usize,
    pub couplings: Vec<(usize, usize, f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<LabelsDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsDocument {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

impl LatticeDocument {
    pub fn from_lattice(lattice: &BipartiteLattice) -> Self {
        Self {
            n: lattice.n(),
            couplings: lattice.bonds().map(|(i, j, z)| (i, j, z.re, z.im)).collect(),
            labels: lattice.labels().map(|l| LabelsDocument {
                a: l.a.clone(),
                b: l.b.clone(),
            }),
        }
    }

    pub fn into_lattice(self) -> Result<BipartiteLattice, FormatError> {
        let mut seen = HashSet::new();
        for &(i, j, re, im) in &self.couplings {
            if !seen.insert((i, j)) {
                return Err(FormatError::DuplicateCoupling(i, j));
            }
            if !(re.is_finite() && im.is_finite()) {
                return Err(ctbands_core::Error::NonFinite { what: "coupling" }.into());
            }
        }
        if self.n == 0 {
            return Err(ctbands_core::Error::Empty.into());
        }
        let bonds = self
            .couplings
            .iter()
            .map(|&(i, j, re, im)| (i, j, Complex64::new(re, im)));
        let lattice = BipartiteLattice::from_bonds(self.n, bonds)?;
        Ok(match self.labels {
            Some(l) => lattice.with_labels(SiteLabels { a: l.a, b: l.b })?,
            None => lattice,
        })
    }
}

pub fn lattice_from_json(text: &str) -> Result<BipartiteLattice, FormatError> {
    serde_json::from_str::<LatticeDocument>(text)?.into_lattice()
}

pub fn lattice_to_json(lattice: &BipartiteLattice) -> String {
    serde_json::to_string_pretty(&LatticeDocument::from_lattice(lattice)).expect("plain data serializes")
}
