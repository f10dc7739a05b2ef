use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexBasis;
use crate::error::{Error, Result};
use crate::ring::RingSpec;

/// On-disk basis: `{"ring": "d=3", "n": 2, "columns": [[[re, im], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisFile {
    pub ring: RingSpec,
    pub n: usize,
    pub columns: Vec<Vec<[f64; 2]>>,
}

impl BasisFile {
    pub fn from_basis(b: &ComplexBasis) -> Self {
        BasisFile {
            ring: b.ring(),
            n: b.n(),
            columns: (0..b.n()).map(|j| b.column(j).iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    pub fn to_basis(&self) -> Result<ComplexBasis> {
        if self.columns.len() != self.n || self.columns.iter().any(|c| c.len() != self.n) {
            return Err(Error::Format(format!("expected {n} columns of length {n}", n = self.n)));
        }
        let cols: Vec<Vec<Complex64>> =
            self.columns.iter().map(|c| c.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
        ComplexBasis::from_columns(self.ring, &cols)
    }
}

impl Serialize for ComplexBasis {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BasisFile::from_basis(self).serialize(serializer)
    }
}

/// Reads a basis file; `ring`, when given, must agree with the file.
pub fn read_basis_file(path: &Path, ring: Option<RingSpec>) -> Result<ComplexBasis> {
    let text = std::fs::read_to_string(path)?;
    let file: BasisFile = serde_json::from_str(&text)?;
    if let Some(r) = ring {
        if r != file.ring {
            return Err(Error::RingMismatch(format!("requested {r}, file declares {}", file.ring)));
        }
    }
    file.to_basis()
}

pub fn write_basis_file(path: &Path, b: &ComplexBasis) -> Result<()> {
    let text = serde_json::to_string_pretty(&BasisFile::from_basis(b))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
