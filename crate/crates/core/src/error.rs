use std::fmt;

use serde::{Deserialize, Serialize};

/// Named construction conditions. The string form is the stable machine code
/// used in CLI error objects and verification reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// F1 is a strict subcode of F0.
    ExtensionNesting,
    /// F0 and the row space of G_E meet only in zero.
    ExtensionIntersection,
    /// B2 < B1 < B0, both strict.
    BChain,
    /// A2 <= A1 and B0 = B1 (+) A1 with dim A2 > 0.
    AComplement,
    /// B1 = B2 (+) E.
    EComplement,
    /// Lower bound on t from the layer-2 and full-access weights.
    TThreshold,
    /// Lower bound on d from the no-access weights.
    DThreshold,
    /// Upper bound on z.
    ZThreshold,
    /// d / t < (a2 + b1 - b2) / a2.
    CostRatio,
    /// Ordering 0 <= z < t < d <= n.
    Thresholds,
}

impl Condition {
    pub fn code(self) -> &'static str {
        match self {
            Self::ExtensionNesting => "extension_nesting",
            Self::ExtensionIntersection => "extension_intersection",
            Self::BChain => "b_chain",
            Self::AComplement => "a_complement",
            Self::EComplement => "e_complement",
            Self::TThreshold => "t_threshold",
            Self::DThreshold => "d_threshold",
            Self::ZThreshold => "z_threshold",
            Self::CostRatio => "cost_ratio",
            Self::Thresholds => "thresholds",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field: {0}")]
    Field(String),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },
    #[error("domain: {0}")]
    Domain(String),
    #[error("condition {condition} violated: {detail}")]
    Condition { condition: Condition, detail: String },
    #[error("resource guard: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: u128,
        limit: u128,
    },
    #[error("integrity: {0}")]
    Integrity(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn condition(condition: Condition, detail: impl Into<String>) -> Self {
        Error::Condition {
            condition,
            detail: detail.into(),
        }
    }

    /// Short machine-readable kind, e.g. `"field"` or a condition code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Field(_) | Error::FieldMismatch(..) => "field",
            Error::DivisionByZero => "division_by_zero",
            Error::Dimension(_) => "dimension",
            Error::Index { .. } => "index",
            Error::Domain(_) => "domain",
            Error::Condition { condition, .. } => condition.code(),
            Error::Resource { .. } => "resource",
            Error::Integrity(_) => "integrity",
            Error::Invariant(_) => "invariant",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
