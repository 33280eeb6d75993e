//! Extended CSS codes.
//!
//! `ECSS(F0, F1, G_E)` appends `e` extension coordinates to a CSS code over
//! `F1 ⊊ F0`. Row `i` of `G_E` is tied to extension coordinate `n + i`, and the
//! combiner may hold any subset of the extension coordinates before it sees the
//! original ones.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{LinearCode, NestedPair};
use crate::css::{CssCode, MAX_PARTIES};
use crate::error::{Condition, Error, Result};
use crate::linalg::FqMatrix;
use crate::subsets;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedCss {
    f0: LinearCode,
    f1: LinearCode,
    ge: FqMatrix,
    big: CssCode,
}

/// Which rows of `G_E` (equivalently which extension coordinates) the
/// combiner already holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSplit {
    accessible: Vec<usize>,
}

/// The two weights behind a threshold and the threshold they give.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauBreakdown {
    /// `wt((F0 + V) \ (F1 + V))`.
    pub recover_weight: usize,
    /// `wt((F1 + U)^⊥ \ (F0 + U)^⊥)`.
    pub disentangle_weight: usize,
    pub tau: usize,
    /// Set when `n + 1 - min` fell outside `[0, n]`.
    pub clamped: bool,
}

impl ExtensionSplit {
    pub fn new(e: usize, accessible: &[usize]) -> Result<Self> {
        let mut v = accessible.to_vec();
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&i| i >= e) {
            return Err(Error::Index { index: bad, len: e });
        }
        Ok(ExtensionSplit { accessible: v })
    }

    /// The first `u` rows are accessible.
    pub fn first(u: usize) -> Self {
        ExtensionSplit {
            accessible: (0..u).collect(),
        }
    }

    pub fn accessible(&self) -> &[usize] {
        &self.accessible
    }

    pub fn u(&self) -> usize {
        self.accessible.len()
    }

    fn inaccessible(&self, e: usize) -> Vec<usize> {
        (0..e).filter(|i| !self.accessible.contains(i)).collect()
    }
}

impl ExtendedCss {
    pub fn new(f0: LinearCode, f1: LinearCode, ge: FqMatrix) -> Result<Self> {
        let n = f0.n();
        if f1.n() != n || ge.cols() != n {
            return Err(Error::Dimension(format!(
                "F0 has length {n}, F1 {}, G_E {}",
                f1.n(),
                ge.cols()
            )));
        }
        if f0.field() != f1.field() || f0.field() != ge.field() {
            return Err(Error::FieldMismatch(f0.field().q(), ge.field().q()));
        }
        if !f1.is_subcode_of(&f0) || f1.k() == f0.k() {
            return Err(Error::condition(
                Condition::ExtensionNesting,
                "F1 must be a strict subcode of F0",
            ));
        }
        let stacked = f0.gen().vstack(&ge)?;
        if stacked.rank() != f0.k() + ge.rank() {
            return Err(Error::condition(
                Condition::ExtensionIntersection,
                "F0 meets the row space of G_E outside zero",
            ));
        }

        let field = f0.field();
        let e = ge.rows();
        let pair = NestedPair::new(f0.clone(), f1.clone())?;
        let quotient = pair
            .quotient()
            .hstack(&FqMatrix::zeros(field, pair.quotient().rows(), e))?;
        let g1 = f1
            .gen()
            .hstack(&FqMatrix::zeros(field, f1.k(), e))?
            .vstack(&ge.hstack(&FqMatrix::identity(field, e))?)?;
        let big = CssCode::from_pair(NestedPair::from_quotient(quotient, LinearCode::new(g1)?)?)?;
        Ok(ExtendedCss { f0, f1, ge, big })
    }

    pub fn f0(&self) -> &LinearCode {
        &self.f0
    }

    pub fn f1(&self) -> &LinearCode {
        &self.f1
    }

    pub fn ge(&self) -> &FqMatrix {
        &self.ge
    }

    pub fn n(&self) -> usize {
        self.f0.n()
    }

    pub fn e(&self) -> usize {
        self.ge.rows()
    }

    /// The CSS code on all `n + e` coordinates.
    pub fn big(&self) -> &CssCode {
        &self.big
    }

    pub fn tau(&self, split: &ExtensionSplit) -> Result<usize> {
        Ok(self.tau_breakdown(split)?.tau)
    }

    pub fn tau_breakdown(&self, split: &ExtensionSplit) -> Result<TauBreakdown> {
        let n = self.n();
        let u = LinearCode::spanned_by(&self.ge.select_rows(split.accessible())?);
        let v = LinearCode::spanned_by(&self.ge.select_rows(&split.inaccessible(self.e()))?);
        let recover_weight = NestedPair::new(self.f0.sum(&v)?, self.f1.sum(&v)?)?.weight()?;
        let disentangle_weight =
            NestedPair::new(self.f1.sum(&u)?.dual(), self.f0.sum(&u)?.dual())?.weight()?;
        let min = recover_weight.min(disentangle_weight);
        Ok(TauBreakdown {
            recover_weight,
            disentangle_weight,
            tau: (n + 1).saturating_sub(min).min(n),
            clamped: min == 0 || min > n,
        })
    }

    pub fn tau_full(&self) -> Result<usize> {
        self.tau(&ExtensionSplit::first(self.e()))
    }

    pub fn tau_none(&self) -> Result<usize> {
        self.tau(&ExtensionSplit::first(0))
    }

    /// Smallest `τ` such that every `τ` original coordinates together with
    /// the accessible extension coordinates form an authorized set, found by
    /// trying every subset.
    pub fn tau_oracle(&self, split: &ExtensionSplit) -> Result<usize> {
        let n = self.n();
        if n > MAX_PARTIES || n + self.e() > 64 {
            return Err(Error::Resource {
                what: format!("enumerating subsets of {n} coordinates"),
                needed: 1u128 << n.min(127),
                limit: 1u128 << MAX_PARTIES,
            });
        }
        let ext = split
            .accessible()
            .iter()
            .fold(0u64, |m, &i| m | 1 << (n + i));
        let all_authorized = |tau: usize| {
            subsets::of_size(n, tau)
                .collect::<Vec<_>>()
                .par_iter()
                .all(|&j| self.big.is_authorized_mask(j | ext))
        };
        Ok((0..=n).find(|&tau| all_authorized(tau)).unwrap_or(n + 1))
    }
}
