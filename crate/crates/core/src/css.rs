//! CSS codes as quantum secret sharing schemes.
//!
//! A CSS code of `C0` over `C1` encodes the basis state `|s⟩` as the uniform
//! superposition over the coset `s·G_{C0/C1} + C1`. Everything about its
//! access structure follows from ranks of column submatrices of `G_{C0}` and
//! `G_{C1}`, so no amplitudes live here.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{LinearCode, NestedPair};
use crate::error::{Error, Result};
use crate::subsets;

/// Largest party count accepted by exhaustive subset classification.
pub const MAX_PARTIES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    pair: NestedPair,
    wt_primal: usize,
    wt_dual: usize,
}

/// Guaranteed thresholds and costs of the one-qudit-per-party scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QssParams {
    pub n: usize,
    pub t: usize,
    pub z: usize,
    /// Secret size in qudits.
    pub m: usize,
    /// Qudits per share.
    pub w: usize,
    pub cc_t: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetStatus {
    Authorized,
    Unauthorized,
    Intermediate,
}

/// Classification of every subset of parties. Sets are 0-based index lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessReport {
    pub n: usize,
    pub gamma: Vec<Vec<usize>>,
    pub adversary: Vec<Vec<usize>>,
    pub intermediate: Vec<Vec<usize>>,
    pub t_min: usize,
    pub z_max: usize,
    #[serde(skip)]
    statuses: Vec<SetStatus>,
}

/// A broken structural law with the subsets that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawViolation {
    pub law: String,
    pub sets: Vec<Vec<usize>>,
}

impl CssCode {
    pub fn new(c0: LinearCode, c1: LinearCode) -> Result<Self> {
        Self::from_pair(NestedPair::new(c0, c1)?)
    }

    pub fn from_pair(pair: NestedPair) -> Result<Self> {
        if !pair.is_strict() {
            return Err(Error::Domain(
                "CSS code needs a strict subcode (C1 = C0 encodes nothing)".into(),
            ));
        }
        let wt_primal = pair.weight()?;
        let wt_dual = pair.dual().weight()?;
        Ok(CssCode {
            pair,
            wt_primal,
            wt_dual,
        })
    }

    pub fn pair(&self) -> &NestedPair {
        &self.pair
    }

    pub fn n(&self) -> usize {
        self.pair.c0().n()
    }

    /// Number of encoded qudits, `k0 - k1`.
    pub fn k(&self) -> usize {
        self.pair.quotient().rows()
    }

    /// `wt(C0 \ C1)`.
    pub fn primal_weight(&self) -> usize {
        self.wt_primal
    }

    /// `wt(C1^⊥ \ C0^⊥)`.
    pub fn dual_weight(&self) -> usize {
        self.wt_dual
    }

    pub fn delta(&self) -> usize {
        self.wt_primal.min(self.wt_dual)
    }

    /// One basis term of the encoding: `s·G_{C0/C1} + r·G_{C1}`.
    pub fn encode_term(&self, s: &[u32], r: &[u32]) -> Result<Vec<u32>> {
        let f = self.pair.c0().field();
        let a = self.pair.quotient().combine_rows(s)?;
        let b = self.pair.c1().gen().combine_rows(r)?;
        Ok(a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect())
    }

    pub fn is_authorized(&self, set: &[usize]) -> bool {
        if set.iter().any(|&i| i >= self.n()) {
            return false;
        }
        self.is_authorized_mask(subsets::from_indices(set))
    }

    /// Rank test on a coordinate bitmask: the secret is fully visible on the
    /// set, and the complement carries no information beyond `C1`.
    pub fn is_authorized_mask(&self, mask: u64) -> bool {
        let n = self.n();
        let g0 = self.pair.c0().gen();
        let g1 = self.pair.c1().gen();
        let rest = subsets::complement(mask, n);
        let inside = g0.columns_by_mask(mask).rank() - g1.columns_by_mask(mask).rank();
        if inside != self.k() {
            return false;
        }
        g0.columns_by_mask(rest).rank() == g1.columns_by_mask(rest).rank()
    }

    /// Status of a coordinate set; unauthorized means the complement is
    /// authorized (pure-state encoding).
    pub fn status_mask(&self, mask: u64) -> SetStatus {
        if self.is_authorized_mask(mask) {
            SetStatus::Authorized
        } else if self.is_authorized_mask(subsets::complement(mask, self.n())) {
            SetStatus::Unauthorized
        } else {
            SetStatus::Intermediate
        }
    }

    /// Thresholds guaranteed by the code distance alone.
    pub fn thresholds(&self) -> QssParams {
        let n = self.n();
        let delta = self.delta();
        let t = (n + 1).saturating_sub(delta);
        QssParams {
            n,
            t,
            z: delta.saturating_sub(1),
            m: self.k(),
            w: 1,
            cc_t: t,
        }
    }

    /// Classifies every subset of coordinates.
    pub fn classify_subsets(&self) -> Result<AccessReport> {
        let groups: Vec<Vec<usize>> = (0..self.n()).map(|i| vec![i]).collect();
        self.classify_groups(&groups)
    }

    /// Classifies every subset of parties, party `j` holding the coordinates
    /// `groups[j]`. A party set is unauthorized when the complement of its
    /// coordinates (among all `n`) is authorized.
    pub fn classify_groups(&self, groups: &[Vec<usize>]) -> Result<AccessReport> {
        let parties = groups.len();
        if parties > MAX_PARTIES {
            return Err(Error::Resource {
                what: format!("classifying all subsets of {parties} parties"),
                needed: 1u128 << parties,
                limit: 1u128 << MAX_PARTIES,
            });
        }
        if self.n() > 64 {
            return Err(Error::Resource {
                what: format!("coordinate masks for length {}", self.n()),
                needed: self.n() as u128,
                limit: 64,
            });
        }
        let group_masks: Vec<u64> = groups
            .iter()
            .map(|g| {
                if let Some(&bad) = g.iter().find(|&&c| c >= self.n()) {
                    return Err(Error::Index {
                        index: bad,
                        len: self.n(),
                    });
                }
                Ok(subsets::from_indices(g))
            })
            .collect::<Result<_>>()?;
        let coords = |party_mask: u64| -> u64 {
            group_masks
                .iter()
                .enumerate()
                .filter(|(j, _)| party_mask >> j & 1 == 1)
                .fold(0, |m, (_, g)| m | g)
        };
        let n = self.n();
        let statuses: Vec<SetStatus> = (0..1u64 << parties)
            .into_par_iter()
            .map(|pm| {
                let cm = coords(pm);
                if self.is_authorized_mask(cm) {
                    SetStatus::Authorized
                } else if self.is_authorized_mask(subsets::complement(cm, n)) {
                    SetStatus::Unauthorized
                } else {
                    SetStatus::Intermediate
                }
            })
            .collect();
        Ok(AccessReport::from_statuses(parties, statuses))
    }
}

impl AccessReport {
    pub fn from_statuses(n: usize, statuses: Vec<SetStatus>) -> Self {
        assert_eq!(statuses.len(), 1 << n);
        let mut gamma = Vec::new();
        let mut adversary = Vec::new();
        let mut intermediate = Vec::new();
        for mask in subsets::by_size(n) {
            let set = subsets::to_indices(mask);
            match statuses[mask as usize] {
                SetStatus::Authorized => gamma.push(set),
                SetStatus::Unauthorized => adversary.push(set),
                SetStatus::Intermediate => intermediate.push(set),
            }
        }
        let all_of_size = |k: usize, s: SetStatus| {
            subsets::of_size(n, k).all(|m| statuses[m as usize] == s)
        };
        let t_min = (0..=n)
            .rev()
            .take_while(|&k| all_of_size(k, SetStatus::Authorized))
            .last()
            .unwrap_or(n + 1);
        let z_max = (0..=n)
            .take_while(|&k| all_of_size(k, SetStatus::Unauthorized))
            .last()
            .unwrap_or(0);
        AccessReport {
            n,
            gamma,
            adversary,
            intermediate,
            t_min,
            z_max,
            statuses,
        }
    }

    pub fn status(&self, set: &[usize]) -> SetStatus {
        self.status_mask(subsets::from_indices(set))
    }

    pub fn status_mask(&self, mask: u64) -> SetStatus {
        self.statuses[mask as usize]
    }

    /// Checks monotonicity of the access structure, the absence of disjoint
    /// authorized sets, complement duality and `t_min + z_max = n`.
    pub fn structural_violations(&self) -> Vec<LawViolation> {
        let n = self.n;
        let full = subsets::full(n);
        let st = &self.statuses;
        let auth = |m: u64| st[m as usize] == SetStatus::Authorized;
        let mut out = Vec::new();
        let mut push = |law: &str, sets: &[u64]| {
            out.push(LawViolation {
                law: law.into(),
                sets: sets.iter().map(|&m| subsets::to_indices(m)).collect(),
            })
        };

        'mono: for m in 0..=full {
            if auth(m) {
                for j in 0..n {
                    let sup = m | 1 << j;
                    if !auth(sup) {
                        push("monotonicity", &[m, sup]);
                        break 'mono;
                    }
                }
            }
        }
        'disjoint: for a in 0..=full {
            if auth(a) {
                let rest = full & !a;
                // every subset of the complement
                let mut b = rest;
                loop {
                    if auth(b) {
                        push("no_disjoint_authorized", &[a, b]);
                        break 'disjoint;
                    }
                    if b == 0 {
                        break;
                    }
                    b = (b - 1) & rest;
                }
            }
        }
        for m in 0..=full {
            let c = full & !m;
            if auth(m) != (st[c as usize] == SetStatus::Unauthorized) {
                push("complement_duality", &[m, c]);
                break;
            }
        }
        if self.t_min + self.z_max != n {
            push("party_count", &[]);
        }
        out
    }

    /// Whether adding `l` turns some disjoint unauthorized set authorized.
    pub fn is_significant(&self, l: &[usize]) -> bool {
        let lm = subsets::from_indices(l);
        let rest = subsets::complement(lm, self.n);
        let mut y = rest;
        loop {
            if self.status_mask(y) == SetStatus::Unauthorized
                && self.status_mask(y | lm) == SetStatus::Authorized
            {
                return true;
            }
            if y == 0 {
                return false;
            }
            y = (y - 1) & rest;
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linalg::FqMatrix;

    fn code(q: u32, rows: &[&[i64]]) -> LinearCode {
        LinearCode::new(FqMatrix::from_ints(Field::new(q).unwrap(), rows).unwrap()).unwrap()
    }

    pub(crate) fn css312() -> CssCode {
        CssCode::new(code(3, &[&[1, 1, 1], &[0, 1, 2]]), code(3, &[&[1, 1, 1]])).unwrap()
    }

    #[test]
    fn construction_examples() {
        let c = css312();
        assert_eq!((c.n(), c.k(), c.delta()), (3, 1, 2));
        assert_eq!((c.primal_weight(), c.dual_weight()), (2, 2));

        let f2 = Field::new(2).unwrap();
        let c = CssCode::new(LinearCode::full(f2, 2), LinearCode::zero(f2, 2)).unwrap();
        assert_eq!((c.n(), c.k(), c.delta()), (2, 2, 1));

        let rs = code(3, &[&[1, 1, 1], &[0, 1, 2]]);
        assert!(matches!(CssCode::new(rs.clone(), rs), Err(Error::Domain(_))));
    }

    #[test]
    fn authorized_examples() {
        let c = css312();
        // G0 on {1,2}: [[1,1],[0,1]] rank 2; G1: [[1,1]] rank 1; complement {3}: ranks 1, 1
        assert!(c.is_authorized(&[0, 1]));
        assert!(c.is_authorized(&[0, 1, 2]));
        assert!(!c.is_authorized(&[]));
        assert!(!c.is_authorized(&[2]));
    }

    #[test]
    fn classify_312() {
        let r = css312().classify_subsets().unwrap();
        assert_eq!((r.t_min, r.z_max), (2, 1));
        assert_eq!(r.gamma, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]);
        assert_eq!(r.adversary, vec![vec![], vec![0], vec![1], vec![2]]);
        assert!(r.intermediate.is_empty());
        assert!(r.structural_violations().is_empty());
        for a in &r.gamma {
            let comp: Vec<usize> = (0..3).filter(|i| !a.contains(i)).collect();
            assert_eq!(r.status(&comp), SetStatus::Unauthorized);
        }
    }

    #[test]
    fn thresholds_examples() {
        let p = css312().thresholds();
        assert_eq!((p.t, p.z, p.m, p.w, p.cc_t), (2, 1, 1, 1, 2));

        let f2 = Field::new(2).unwrap();
        let c = CssCode::new(LinearCode::full(f2, 2), LinearCode::zero(f2, 2)).unwrap();
        let p = c.thresholds();
        assert_eq!((p.t, p.z), (2, 0));
    }

    #[test]
    fn intermediate_sets_appear() {
        // [[2,2,1]]_2: each single qubit holds half the secret
        let f2 = Field::new(2).unwrap();
        let c0 = LinearCode::full(f2, 2);
        let c1 = LinearCode::zero(f2, 2);
        let r = CssCode::new(c0, c1).unwrap().classify_subsets().unwrap();
        assert_eq!(r.intermediate, vec![vec![0], vec![1]]);
        assert_eq!((r.t_min, r.z_max), (2, 0));
        assert!(r.structural_violations().is_empty());
    }

    #[test]
    fn party_guard() {
        let c = css312();
        let groups: Vec<Vec<usize>> = (0..21).map(|_| vec![0]).collect();
        assert!(matches!(c.classify_groups(&groups), Err(Error::Resource { .. })));
    }
}
