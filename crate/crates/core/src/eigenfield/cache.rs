//! JSON persistence of eigenfields. Floats are written in shortest
//! round-trip form, so a reloaded field evaluates bit-for-bit identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Backend, EigenField, Normalization};
use crate::error::Result;
use crate::geometry::{Domain, DomainSpec};

pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub schema_version: u32,
    pub domain: DomainSpec,
    pub eigenvalue: f64,
    pub index: u32,
    pub multiplicity: u32,
    pub scale: f64,
    pub extension_margin: f64,
    pub normalization: Normalization,
    #[serde(flatten)]
    pub backend: Backend,
}

impl From<&EigenField> for FieldRecord {
    fn from(f: &EigenField) -> Self {
        FieldRecord {
            schema_version: CACHE_SCHEMA_VERSION,
            domain: f.spec().clone(),
            eigenvalue: f.eigenvalue(),
            index: f.index(),
            multiplicity: f.multiplicity(),
            scale: f.scale(),
            extension_margin: f.extension_margin(),
            normalization: *f.normalization(),
            backend: f.backend().clone(),
        }
    }
}

impl FieldRecord {
    pub fn into_field(self) -> Result<EigenField> {
        let domain = Domain::new(self.domain)?;
        Ok(EigenField::from_parts(
            domain,
            self.eigenvalue,
            self.index,
            self.multiplicity,
            self.backend,
            self.scale,
            self.extension_margin,
            self.normalization,
        ))
    }
}

pub fn save_field(field: &EigenField, path: &Path) -> Result<()> {
    let rec = FieldRecord::from(field);
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, serde_json::to_string_pretty(&rec)?)?;
    Ok(())
}

pub fn load_field(path: &Path) -> Result<EigenField> {
    let text = fs::read_to_string(path)?;
    let rec: FieldRecord = serde_json::from_str(&text)?;
    rec.into_field()
}
