//! JSON form of a built scheme.

use std::collections::BTreeMap;

use ceqss_core::ceqss::{CeQssParams, CeQssScheme, SchemeWeights};
use ceqss_core::FqMatrix;
use serde::{Deserialize, Serialize};

use crate::descriptor::MATRIX_NAMES;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeJson {
    pub descriptor_hash: String,
    pub params: CeQssParams,
    pub weights: SchemeWeights,
    /// Generators of `b0, b1, b2, a1, a2, e`.
    pub codes: BTreeMap<String, FqMatrix>,
    pub stacked_generator: FqMatrix,
    /// Share coordinates of each party (0-based) in the concatenated code.
    pub share_groups: Vec<Vec<usize>>,
}

impl SchemeJson {
    pub fn new(scheme: &CeQssScheme, hash: String) -> Self {
        let codes = MATRIX_NAMES
            .iter()
            .zip(scheme.codes())
            .map(|(name, c)| (name.to_string(), c.gen().clone()))
            .collect();
        SchemeJson {
            descriptor_hash: hash,
            params: *scheme.params(),
            weights: *scheme.weights(),
            codes,
            stacked_generator: scheme.stacked_generator().clone(),
            share_groups: scheme.layout().groups(),
        }
    }
}
