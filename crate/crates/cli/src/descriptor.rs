//! Scheme descriptors: the JSON input every subcommand reads.

use std::collections::BTreeMap;
use std::path::Path;

use ceqss_core::ceqss::{grs_codes, CeQssCodes};
use ceqss_core::grs::default_points;
use ceqss_core::{Condition, Field, FqMatrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::failure::Failure;

pub const MATRIX_NAMES: [&str; 6] = ["b0", "b1", "b2", "a1", "a2", "e"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Grs,
    Explicit,
}

/// Row-major integer entries with explicit dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntries {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeDescriptor {
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub t: usize,
    pub d: usize,
    pub z: usize,
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<BTreeMap<String, MatrixEntries>>,
}

/// A descriptor turned into generator matrices.
pub struct Resolved {
    pub codes: CeQssCodes,
    pub t: usize,
    pub d: usize,
    pub z: usize,
    pub hash: String,
}

impl SchemeDescriptor {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input("io", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::input("parse", e.to_string()))
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("descriptor serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn party_count(&self) -> Result<usize, Failure> {
        if let Some(n) = self.n {
            return Ok(n);
        }
        match self.construction {
            Construction::Grs => Ok(self.t + self.z),
            Construction::Explicit => self
                .matrices
                .as_ref()
                .and_then(|m| m.get("b0"))
                .map(|b0| b0.cols)
                .ok_or_else(|| Failure::input("descriptor", "explicit construction needs matrix b0")),
        }
    }

    pub fn resolve(&self) -> Result<Resolved, Failure> {
        let field = Field::new(self.q)?;
        let n = self.party_count()?;
        let (t, d, z) = (self.t, self.d, self.z);
        if !(z < t && t < d && d <= n) {
            return Err(Failure::input(
                Condition::Thresholds.code(),
                format!("need 0 <= z < t < d <= n, got z={z}, t={t}, d={d}, n={n}"),
            ));
        }
        let codes = match self.construction {
            Construction::Grs => {
                if self.matrices.is_some() {
                    return Err(Failure::input("descriptor", "grs construction takes points, not matrices"));
                }
                let points = match &self.points {
                    Some(p) => p.clone(),
                    None => default_points(field, n)?,
                };
                if points.len() != n {
                    return Err(Failure::input(
                        "descriptor",
                        format!("{} points for {n} parties", points.len()),
                    ));
                }
                grs_codes(field, points, t, d, z)?
            }
            Construction::Explicit => {
                if self.points.is_some() {
                    return Err(Failure::input("descriptor", "explicit construction takes matrices, not points"));
                }
                let given = self
                    .matrices
                    .as_ref()
                    .ok_or_else(|| Failure::input("descriptor", "explicit construction needs matrices"))?;
                if let Some(extra) = given.keys().find(|k| !MATRIX_NAMES.contains(&k.as_str())) {
                    return Err(Failure::input("descriptor", format!("unknown matrix {extra:?}")));
                }
                let get = |name: &str| -> Result<FqMatrix, Failure> {
                    let m = given
                        .get(name)
                        .ok_or_else(|| Failure::input("descriptor", format!("missing matrix {name}")))?;
                    to_matrix(field, n, name, m)
                };
                CeQssCodes {
                    b0: get("b0")?,
                    b1: get("b1")?,
                    b2: get("b2")?,
                    a1: get("a1")?,
                    a2: get("a2")?,
                    e: get("e")?,
                }
            }
        };
        let mut canonical = self.clone();
        canonical.n = Some(n);
        Ok(Resolved {
            codes,
            t,
            d,
            z,
            hash: canonical.hash(),
        })
    }
}

fn to_matrix(field: Field, n: usize, name: &str, m: &MatrixEntries) -> Result<FqMatrix, Failure> {
    if m.cols != n || m.entries.len() != m.rows || m.entries.iter().any(|r| r.len() != n) {
        return Err(Failure::input(
            "dimension",
            format!("matrix {name} must be {} x {n} as declared", m.rows),
        ));
    }
    let q = i64::from(field.q());
    let mut rows = Vec::with_capacity(m.rows);
    for row in &m.entries {
        if let Some(bad) = row.iter().find(|&&x| !(0..q).contains(&x)) {
            return Err(Failure::input(
                "entries",
                format!("matrix {name} has entry {bad} outside [0, {}]", q - 1),
            ));
        }
        rows.push(row.iter().map(|&x| x as u32).collect());
    }
    Ok(FqMatrix::from_rows(field, n, &rows)?)
}
