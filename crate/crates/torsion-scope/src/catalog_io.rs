//! JSON catalogs of labelled generator data.
//!
//! A catalog is an array of
//! `{"label": str, "level": int, "generators": [[a, b, c, d], ...], "index": int?, "cm": bool?}`
//! with matrices written row-major.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use torsion_scope_core::group::closure_with_cap;
use torsion_scope_core::{gl2_order, CatalogEntry, Error as CoreError, GMat, Modulus, Source};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("entry '{label}': {invariant}")]
    Invalid {
        label: String,
        invariant: String,
        source: Option<CoreError>,
    },
}

impl CatalogError {
    fn invalid(label: &str, invariant: impl Into<String>, source: Option<CoreError>) -> Self {
        CatalogError::Invalid {
            label: label.to_string(),
            invariant: invariant.into(),
            source,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    label: String,
    level: u64,
    generators: Vec<[u64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index: Option<u128>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    cm: bool,
}

fn validate(rec: Record, closure_cap: usize) -> Result<CatalogEntry, CatalogError> {
    let label = rec.label.as_str();
    let level = Modulus::from_prime_power(rec.level)
        .map_err(|e| CatalogError::invalid(label, format!("level: {e}"), Some(e)))?;
    let mut generators = Vec::with_capacity(rec.generators.len());
    for (i, g) in rec.generators.iter().enumerate() {
        let mut entries = [0u32; 4];
        for (slot, x) in entries.iter_mut().zip(g) {
            *slot = u32::try_from(*x).unwrap_or(u32::MAX);
        }
        let m = GMat::from_entries(level, entries).map_err(|e| {
            CatalogError::invalid(label, format!("generator {i} is not in GL2: {e}"), Some(e))
        })?;
        generators.push(m);
    }
    if let Some(index) = rec.index {
        let g = closure_with_cap(&generators, level, closure_cap)
            .map_err(|e| CatalogError::invalid(label, format!("closure: {e}"), Some(e)))?;
        let actual = gl2_order(level) / g.order();
        if actual != index {
            return Err(CatalogError::invalid(
                label,
                format!("index: claimed {index}, closure gives {actual}"),
                None,
            ));
        }
    }
    Ok(CatalogEntry {
        label: rec.label,
        level,
        generators,
        index_claimed: rec.index,
        cm: rec.cm,
        source: Source::File,
    })
}

/// Parses and validates a catalog held in memory. `path` only labels errors.
pub fn parse_catalog(
    text: &str,
    path: &Path,
    closure_cap: usize,
) -> Result<Vec<CatalogEntry>, CatalogError> {
    let records: Vec<Record> = serde_json::from_str(text).map_err(|e| CatalogError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(records.len());
    for rec in records {
        if !seen.insert(rec.label.clone()) {
            return Err(CatalogError::invalid(&rec.label, "label: duplicate", None));
        }
        out.push(validate(rec, closure_cap)?);
    }
    Ok(out)
}

pub fn load_catalog(path: &Path, closure_cap: usize) -> Result<Vec<CatalogEntry>, CatalogError> {
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_catalog(&text, path, closure_cap)
}

pub fn to_json(entries: &[CatalogEntry]) -> String {
    let records: Vec<Record> = entries
        .iter()
        .map(|e| Record {
            label: e.label.clone(),
            level: e.level.n() as u64,
            generators: e
                .generators
                .iter()
                .map(|g| g.entries().map(u64::from))
                .collect(),
            index: e.index_claimed,
            cm: e.cm,
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&records).expect("catalog records serialize");
    text.push('\n');
    text
}

pub fn save_catalog(path: &Path, entries: &[CatalogEntry]) -> Result<(), CatalogError> {
    fs::write(path, to_json(entries)).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })
}
