//! Communication-efficient QSS by concatenating an extended CSS code with a
//! CSS code.
//!
//! Layer 1 of every share holds the original coordinates of `v1` copies of
//! `ECSS(A1 + B2, B2, G_E)`; their `v1·e` extension coordinates are packed
//! into `v2` blocks of `a2` and stored in layer 2 under `CSS(A2 + B1, B1)`.
//! All of it is one matrix product `G_B0^T M` with the staircase message
//! matrix
//!
//! ```text
//!        v1    v2
//!  a1 [  S  |  0  ]   (the bottom a2 rows of the right block are D1)
//!     [     | D1  ]
//!  b2 [ R11 |  R2 ]
//!  e  [ R12 |     ]
//! ```
//!
//! where `D1` holds the entries of `R12`.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::codes::{LinearCode, NestedPair};
use crate::css::CssCode;
use crate::ecss::ExtendedCss;
use crate::error::{Condition, Error, Result};
use crate::gf::Field;
use crate::grs::{default_points, GrsBlocks, GrsSpec};
use crate::linalg::{complement_basis, solve_affine, FqMatrix};

/// Generator matrices for the six codes. Each must have full row rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeQssCodes {
    pub b0: FqMatrix,
    pub b1: FqMatrix,
    pub b2: FqMatrix,
    pub a1: FqMatrix,
    pub a2: FqMatrix,
    pub e: FqMatrix,
}

/// The five nested weights the thresholds depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeWeights {
    /// `wt((A2 + B1) \ B1)`.
    pub a2_b1: usize,
    /// `wt((A1 + B2) \ B2)`.
    pub a1_b2: usize,
    /// `wt(B1^⊥ \ B0^⊥)`.
    pub b1_dual: usize,
    /// `wt(B0 \ B1)`.
    pub b0_b1: usize,
    /// `wt(B2^⊥ \ (A1 + B2)^⊥)`.
    pub b2_dual: usize,
}

impl SchemeWeights {
    fn two_layer_min(&self) -> usize {
        self.a2_b1.min(self.a1_b2).min(self.b1_dual)
    }

    /// Smallest `t` the weights allow.
    pub fn t_bound(&self, n: usize) -> usize {
        (n + 1).saturating_sub(self.two_layer_min())
    }

    /// Smallest `d` the weights allow.
    pub fn d_bound(&self, n: usize) -> usize {
        (n + 1).saturating_sub(self.b0_b1.min(self.b2_dual))
    }

    /// Largest `z` the weights allow.
    pub fn z_bound(&self) -> usize {
        self.two_layer_min() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub holds: bool,
    pub detail: String,
}

/// Every construction condition, each evaluated on its own. Threshold
/// conditions are only evaluated once the nesting conditions hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub checks: Vec<ConditionCheck>,
    pub weights: Option<SchemeWeights>,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    fn first_error(&self) -> Option<Error> {
        self.violations()
            .next()
            .map(|c| Error::condition(c.condition, c.detail.clone()))
    }
}

/// Dimensions, block counts and costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CeQssParams {
    pub q: u32,
    pub n: usize,
    pub t: usize,
    pub d: usize,
    pub z: usize,
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
    pub a1: usize,
    pub a2: usize,
    pub e: usize,
    pub v1: usize,
    pub v2: usize,
    /// Secret size in qudits.
    pub m: usize,
    /// Qudits per share.
    pub w: usize,
    pub cc_t: usize,
    pub cc_d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeQssScheme {
    params: CeQssParams,
    weights: SchemeWeights,
    b0: LinearCode,
    b1: LinearCode,
    b2: LinearCode,
    a1: LinearCode,
    a2: LinearCode,
    e: LinearCode,
    /// `[G_{A1/A2}; G_A2; G_B2; G_E]`.
    stack: FqMatrix,
}

/// One basis term's classical data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageMatrix {
    pub s: FqMatrix,
    pub r11: FqMatrix,
    pub r12: FqMatrix,
    pub r2: FqMatrix,
}

/// Coordinates of party `j` in the concatenated code: `j·w .. j·w + v1` in
/// layer 1, then `v2` more in layer 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareLayout {
    pub n: usize,
    pub v1: usize,
    pub v2: usize,
}

/// Qudits downloaded from each accessed party.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryPlan {
    pub parties: Vec<usize>,
    pub downloads: Vec<usize>,
}

impl RecoveryPlan {
    pub fn total(&self) -> usize {
        self.downloads.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: usize,
    pub bound: Ratio<u64>,
    pub satisfied: bool,
    pub tight: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub storage: BoundCheck,
    pub cc_t: BoundCheck,
    pub cc_d: BoundCheck,
    /// `CC(d) < CC(t)`.
    pub efficient: bool,
}

impl ShareLayout {
    pub fn w(&self) -> usize {
        self.v1 + self.v2
    }

    pub fn layer1(&self, j: usize) -> std::ops::Range<usize> {
        j * self.w()..j * self.w() + self.v1
    }

    pub fn layer2(&self, j: usize) -> std::ops::Range<usize> {
        j * self.w() + self.v1..(j + 1) * self.w()
    }

    /// All coordinates of each party, for grouped access checks.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|j| (j * self.w()..(j + 1) * self.w()).collect())
            .collect()
    }
}

fn check(condition: Condition, holds: bool, detail: String) -> ConditionCheck {
    ConditionCheck {
        condition,
        holds,
        detail,
    }
}

fn codes_of(codes: &CeQssCodes) -> Result<[LinearCode; 6]> {
    let n = codes.b0.cols();
    let field = codes.b0.field();
    let all = [&codes.b0, &codes.b1, &codes.b2, &codes.a1, &codes.a2, &codes.e];
    if let Some(g) = all.iter().find(|g| g.cols() != n) {
        return Err(Error::Dimension(format!(
            "generator of length {} next to length {n}",
            g.cols()
        )));
    }
    if let Some(g) = all.iter().find(|g| g.field() != field) {
        return Err(Error::FieldMismatch(field.q(), g.field().q()));
    }
    let mut out = Vec::with_capacity(6);
    for g in all {
        out.push(LinearCode::new(g.clone())?);
    }
    Ok(out.try_into().expect("six codes"))
}

/// Evaluates every construction condition.
pub fn check_conditions(codes: &CeQssCodes, t: usize, d: usize, z: usize) -> Result<ConditionReport> {
    let [b0, b1, b2, a1, a2, e] = codes_of(codes)?;
    let n = b0.n();
    let mut checks = vec![check(
        Condition::Thresholds,
        z < t && t < d && d <= n,
        format!("need 0 <= z < t < d <= n, got z={z}, t={t}, d={d}, n={n}"),
    )];

    let b_chain = b2.is_subcode_of(&b1) && b1.is_subcode_of(&b0) && b2.k() < b1.k() && b1.k() < b0.k();
    checks.push(check(
        Condition::BChain,
        b_chain,
        format!("dims b2={}, b1={}, b0={}", b2.k(), b1.k(), b0.k()),
    ));

    let a1_b1 = a1.sum(&b1)?;
    let a_ok = a2.is_subcode_of(&a1)
        && a1.is_subcode_of(&b0)
        && a1.k() < b0.k()
        && a1_b1.same_code(&b0)
        && a1_b1.k() == a1.k() + b1.k()
        && a2.k() > 0;
    checks.push(check(
        Condition::AComplement,
        a_ok,
        format!("dims a2={}, a1={}, dim(A1+B1)={}", a2.k(), a1.k(), a1_b1.k()),
    ));

    let b2_e = b2.sum(&e)?;
    let e_ok = e.is_subcode_of(&b1) && b2_e.same_code(&b1) && b2_e.k() == b2.k() + e.k();
    checks.push(check(
        Condition::EComplement,
        e_ok,
        format!("dims b2={}, e={}, dim(B2+E)={}", b2.k(), e.k(), b2_e.k()),
    ));

    if !(b_chain && a_ok && e_ok) {
        return Ok(ConditionReport {
            checks,
            weights: None,
        });
    }

    let weights = SchemeWeights {
        a2_b1: NestedPair::new(a2.sum(&b1)?, b1.clone())?.weight()?,
        a1_b2: NestedPair::new(a1.sum(&b2)?, b2.clone())?.weight()?,
        b1_dual: NestedPair::new(b1.dual(), b0.dual())?.weight()?,
        b0_b1: NestedPair::new(b0.clone(), b1.clone())?.weight()?,
        b2_dual: NestedPair::new(b2.dual(), a1.sum(&b2)?.dual())?.weight()?,
    };
    let (tb, db, zb) = (weights.t_bound(n), weights.d_bound(n), weights.z_bound());
    checks.push(check(
        Condition::TThreshold,
        t >= tb,
        format!(
            "t={t}; wt((A2+B1)\\B1)={}, wt((A1+B2)\\B2)={}, wt(B1^⊥\\B0^⊥)={} need t >= {tb}",
            weights.a2_b1, weights.a1_b2, weights.b1_dual
        ),
    ));
    checks.push(check(
        Condition::DThreshold,
        d >= db,
        format!(
            "d={d}; wt(B0\\B1)={}, wt(B2^⊥\\(A1+B2)^⊥)={} need d >= {db}",
            weights.b0_b1, weights.b2_dual
        ),
    ));
    checks.push(check(
        Condition::ZThreshold,
        z <= zb,
        format!("z={z}; the weights allow at most {zb}"),
    ));
    let (a2k, extra) = (a2.k(), b1.k() - b2.k());
    checks.push(check(
        Condition::CostRatio,
        d * a2k < t * (a2k + extra),
        format!("need d·a2 < t·(a2+b1-b2), got {} vs {}", d * a2k, t * (a2k + extra)),
    ));
    Ok(ConditionReport {
        checks,
        weights: Some(weights),
    })
}

impl CeQssScheme {
    pub fn build(codes: &CeQssCodes, t: usize, d: usize, z: usize) -> Result<Self> {
        let report = check_conditions(codes, t, d, z)?;
        if let Some(err) = report.first_error() {
            return Err(err);
        }
        let weights = report
            .weights
            .ok_or_else(|| Error::Invariant("weights missing after checks passed".into()))?;
        let [b0, b1, b2, a1, a2, e] = codes_of(codes)?;

        let stack = complement_basis(a1.gen(), a2.gen())?
            .vstack(a2.gen())?
            .vstack(b2.gen())?
            .vstack(e.gen())?;
        if !stack.same_row_space(b0.gen()) {
            return Err(Error::Invariant("stacked generator does not span B0".into()));
        }

        let (a1k, a2k, b1k, b2k, ek) = (a1.k(), a2.k(), b1.k(), b2.k(), e.k());
        let g = a2k.gcd(&ek);
        let (v1, v2) = (a2k / g, ek / g);
        let params = CeQssParams {
            q: b0.field().q(),
            n: b0.n(),
            t,
            d,
            z,
            b0: b0.k(),
            b1: b1k,
            b2: b2k,
            a1: a1k,
            a2: a2k,
            e: ek,
            v1,
            v2,
            m: a1k * v1,
            w: v1 + v2,
            cc_t: t * (v1 + v2),
            cc_d: d * v1,
        };
        Ok(CeQssScheme {
            params,
            weights,
            b0,
            b1,
            b2,
            a1,
            a2,
            e,
            stack,
        })
    }

    pub fn params(&self) -> &CeQssParams {
        &self.params
    }

    pub fn weights(&self) -> &SchemeWeights {
        &self.weights
    }

    pub fn field(&self) -> Field {
        self.b0.field()
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// `(B0, B1, B2, A1, A2, E)`.
    pub fn codes(&self) -> [&LinearCode; 6] {
        [&self.b0, &self.b1, &self.b2, &self.a1, &self.a2, &self.e]
    }

    /// `[G_{A1/A2}; G_A2; G_B2; G_E]`, the generator of `B0` the encoding uses.
    pub fn stacked_generator(&self) -> &FqMatrix {
        &self.stack
    }

    pub fn layout(&self) -> ShareLayout {
        ShareLayout {
            n: self.params.n,
            v1: self.params.v1,
            v2: self.params.v2,
        }
    }

    fn rows(&self, start: usize, end: usize) -> FqMatrix {
        self.stack.row_range(start, end)
    }

    fn g_a1(&self) -> FqMatrix {
        self.rows(0, self.params.a1)
    }

    fn g_a2(&self) -> FqMatrix {
        let p = &self.params;
        self.rows(p.a1 - p.a2, p.a1)
    }

    fn g_b1(&self) -> FqMatrix {
        self.rows(self.params.a1, self.params.b0)
    }

    fn g_b2(&self) -> FqMatrix {
        let p = &self.params;
        self.rows(p.a1, p.a1 + p.b2)
    }

    fn g_e(&self) -> FqMatrix {
        let p = &self.params;
        self.rows(p.a1 + p.b2, p.b0)
    }

    /// `G_B0^T M`, one row per party: `v1` layer-1 then `v2` layer-2 symbols.
    pub fn encode_classical(&self, msg: &MessageMatrix) -> Result<FqMatrix> {
        let m = msg.assemble(&self.params)?;
        self.stack.transpose().mul(&m)
    }

    pub fn plan_d(&self, parties: &[usize]) -> RecoveryPlan {
        RecoveryPlan {
            parties: parties.to_vec(),
            downloads: vec![self.params.v1; parties.len()],
        }
    }

    pub fn plan_t(&self, parties: &[usize]) -> RecoveryPlan {
        RecoveryPlan {
            parties: parties.to_vec(),
            downloads: vec![self.params.w; parties.len()],
        }
    }

    fn check_parties(&self, parties: &[usize], min: usize, symbols: &FqMatrix, cols: usize) -> Result<()> {
        let n = self.n();
        if let Some(&bad) = parties.iter().find(|&&j| j >= n) {
            return Err(Error::Index { index: bad, len: n });
        }
        let mut sorted = parties.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != parties.len() || parties.len() < min {
            return Err(Error::Domain(format!(
                "need at least {min} distinct parties, got {parties:?}"
            )));
        }
        if symbols.rows() != parties.len() || symbols.cols() < cols {
            return Err(Error::Dimension(format!(
                "expected {}×{cols} symbols, got {}×{}",
                parties.len(),
                symbols.rows(),
                symbols.cols()
            )));
        }
        Ok(())
    }

    /// Recovers `S` from layer 1 of at least `d` parties. Row `i` of
    /// `layer1` belongs to `parties[i]`.
    pub fn recover_from_d(&self, parties: &[usize], layer1: &FqMatrix) -> Result<FqMatrix> {
        let p = self.params;
        self.check_parties(parties, p.d, layer1, p.v1)?;
        let a = restricted_transpose(&self.stack, parties)?;
        let mut s = FqMatrix::zeros(self.field(), p.a1, p.v1);
        for c in 0..p.v1 {
            let y = column(layer1, c);
            let sol = solve_unique_prefix(&a, &y, p.a1, "layer 1")?;
            for (i, &v) in sol.iter().enumerate() {
                s.set(i, c, v);
            }
        }
        Ok(s)
    }

    /// Recovers `S` from both layers of at least `t` parties: layer 2 gives
    /// `D1` and hence `R12`, which is then cancelled from layer 1.
    pub fn recover_from_t(&self, parties: &[usize], shares: &FqMatrix) -> Result<FqMatrix> {
        let p = self.params;
        let f = self.field();
        self.check_parties(parties, p.t, shares, p.w)?;

        let l2 = restricted_transpose(&self.g_a2().vstack(&self.g_b1())?, parties)?;
        let mut d1 = FqMatrix::zeros(f, p.a2, p.v2);
        for c in 0..p.v2 {
            let y = column(shares, p.v1 + c);
            let sol = solve_unique_prefix(&l2, &y, p.a2, "layer 2")?;
            for (i, &v) in sol.iter().enumerate() {
                d1.set(i, c, v);
            }
        }
        let r12 = unpack_d1(&d1, p.e, p.v1)?;

        let ge_t = restricted_transpose(&self.g_e(), parties)?;
        let cancel = ge_t.mul(&r12)?;
        let l1 = restricted_transpose(&self.g_a1().vstack(&self.g_b2())?, parties)?;
        let mut s = FqMatrix::zeros(f, p.a1, p.v1);
        for c in 0..p.v1 {
            let y: Vec<u32> = (0..parties.len())
                .map(|i| f.sub(shares.get(i, c), cancel.get(i, c)))
                .collect();
            let sol = solve_unique_prefix(&l1, &y, p.a1, "layer 1 residual")?;
            for (i, &v) in sol.iter().enumerate() {
                s.set(i, c, v);
            }
        }
        Ok(s)
    }

    /// The whole encoding as one CSS code on `n·(v1 + v2)` coordinates in
    /// party-major order (see [`ShareLayout`]). Secret rows are the entries
    /// of `S`; randomness rows are the entries of `R11`, `R12` and `R2`, with
    /// each `R12` entry also written at its `D1` position.
    pub fn as_css(&self) -> Result<CssCode> {
        let p = self.params;
        let f = self.field();
        let layout = self.layout();
        let len = p.n * p.w;
        // Row r of G_B0 placed in message column c.
        let placed = |r: usize, c: usize, out: &mut Vec<u32>| {
            for j in 0..p.n {
                let at = j * p.w + c;
                out[at] = f.add(out[at], self.stack.get(r, j));
            }
        };
        let mut secret = Vec::new();
        for r in 0..p.a1 {
            for c in 0..p.v1 {
                let mut row = vec![0; len];
                placed(r, c, &mut row);
                secret.push(row);
            }
        }
        let mut random = Vec::new();
        for r in 0..p.b2 {
            for c in 0..p.v1 {
                let mut row = vec![0; len];
                placed(p.a1 + r, c, &mut row);
                random.push(row);
            }
        }
        for r in 0..p.e {
            for c in 0..p.v1 {
                let mut row = vec![0; len];
                placed(p.a1 + p.b2 + r, c, &mut row);
                let (dr, dc) = d1_position(r, c, p.e, p.a2);
                placed(p.a1 - p.a2 + dr, p.v1 + dc, &mut row);
                random.push(row);
            }
        }
        for r in 0..p.b1 {
            for c in 0..p.v2 {
                let mut row = vec![0; len];
                placed(p.a1 + r, p.v1 + c, &mut row);
                random.push(row);
            }
        }
        debug_assert_eq!(layout.w() * layout.n, len);
        let quotient = FqMatrix::from_rows(f, len, &secret)?;
        let c1 = LinearCode::new(FqMatrix::from_rows(f, len, &random)?)?;
        CssCode::from_pair(NestedPair::from_quotient(quotient, c1)?)
    }
}

impl MessageMatrix {
    pub fn zeros(field: Field, p: &CeQssParams) -> Self {
        MessageMatrix {
            s: FqMatrix::zeros(field, p.a1, p.v1),
            r11: FqMatrix::zeros(field, p.b2, p.v1),
            r12: FqMatrix::zeros(field, p.e, p.v1),
            r2: FqMatrix::zeros(field, p.b1, p.v2),
        }
    }

    /// Fills the blocks in the order `S, R11, R12, R2`, each row-major.
    pub fn from_flat(field: Field, p: &CeQssParams, values: &[u32]) -> Result<Self> {
        let sizes = [p.a1 * p.v1, p.b2 * p.v1, p.e * p.v1, p.b1 * p.v2];
        let total: usize = sizes.iter().sum();
        if values.len() != total {
            return Err(Error::Dimension(format!(
                "message needs {total} symbols, got {}",
                values.len()
            )));
        }
        let mut at = 0;
        let mut take = |rows: usize, cols: usize| {
            let m = FqMatrix::from_flat(field, rows, cols, values[at..at + rows * cols].to_vec());
            at += rows * cols;
            m
        };
        Ok(MessageMatrix {
            s: take(p.a1, p.v1)?,
            r11: take(p.b2, p.v1)?,
            r12: take(p.e, p.v1)?,
            r2: take(p.b1, p.v2)?,
        })
    }

    /// `R12` rearranged into `a2 × v2`: read column-major, write column-major.
    pub fn d1(&self, a2: usize, v2: usize) -> Result<FqMatrix> {
        let (e, v1) = (self.r12.rows(), self.r12.cols());
        if e * v1 != a2 * v2 {
            return Err(Error::Dimension(format!(
                "R12 is {e}×{v1}, D1 is {a2}×{v2}"
            )));
        }
        let mut d1 = FqMatrix::zeros(self.r12.field(), a2, v2);
        for c in 0..v1 {
            for r in 0..e {
                let (dr, dc) = d1_position(r, c, e, a2);
                d1.set(dr, dc, self.r12.get(r, c));
            }
        }
        Ok(d1)
    }

    /// The `b0 × (v1 + v2)` staircase matrix.
    pub fn assemble(&self, p: &CeQssParams) -> Result<FqMatrix> {
        let shapes = [
            (&self.s, p.a1, p.v1, "S"),
            (&self.r11, p.b2, p.v1, "R11"),
            (&self.r12, p.e, p.v1, "R12"),
            (&self.r2, p.b1, p.v2, "R2"),
        ];
        for (m, r, c, name) in shapes {
            if m.rows() != r || m.cols() != c {
                return Err(Error::Dimension(format!(
                    "{name} must be {r}×{c}, got {}×{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let f = self.s.field();
        let d1 = self.d1(p.a2, p.v2)?;
        let mut m = FqMatrix::zeros(f, p.b0, p.w);
        let mut put = |src: &FqMatrix, r0: usize, c0: usize| {
            for i in 0..src.rows() {
                for j in 0..src.cols() {
                    m.set(r0 + i, c0 + j, src.get(i, j));
                }
            }
        };
        put(&self.s, 0, 0);
        put(&d1, p.a1 - p.a2, p.v1);
        put(&self.r11, p.a1, 0);
        put(&self.r12, p.a1 + p.b2, 0);
        put(&self.r2, p.a1, p.v1);
        Ok(m)
    }
}

/// Where `R12[r][c]` lands in `D1`.
fn d1_position(r: usize, c: usize, e: usize, a2: usize) -> (usize, usize) {
    let k = c * e + r;
    (k % a2, k / a2)
}

fn unpack_d1(d1: &FqMatrix, e: usize, v1: usize) -> Result<FqMatrix> {
    let mut r12 = FqMatrix::zeros(d1.field(), e, v1);
    for c in 0..v1 {
        for r in 0..e {
            let (dr, dc) = d1_position(r, c, e, d1.rows());
            r12.set(r, c, d1.get(dr, dc));
        }
    }
    Ok(r12)
}

/// `(G^(J))^T` with the columns of `J` in the given order.
fn restricted_transpose(g: &FqMatrix, parties: &[usize]) -> Result<FqMatrix> {
    g.transpose().select_rows(parties)
}

fn column(m: &FqMatrix, c: usize) -> Vec<u32> {
    (0..m.rows()).map(|i| m.get(i, c)).collect()
}

/// Solves `a x = y` and returns the first `k` unknowns, which must be
/// determined uniquely.
fn solve_unique_prefix(a: &FqMatrix, y: &[u32], k: usize, what: &str) -> Result<Vec<u32>> {
    let sol = solve_affine(a, y)?
        .ok_or_else(|| Error::Integrity(format!("{what} symbols match no encoding")))?;
    if (0..sol.kernel.rows()).any(|i| sol.kernel.row(i)[..k].iter().any(|&x| x != 0)) {
        return Err(Error::Invariant(format!(
            "{what} does not determine the unknowns uniquely"
        )));
    }
    Ok(sol.particular[..k].to_vec())
}

/// The GRS instantiation on the given points: `b0 = d`, `b1 = z`,
/// `b2 = z - d + t`, `e = d - t`, `a1 = d - z`, `a2 = t - z`.
pub fn grs_codes(field: Field, points: Vec<u32>, t: usize, d: usize, z: usize) -> Result<CeQssCodes> {
    if !(0 < z && z < t && t < d && d <= t + z) {
        return Err(Error::Domain(format!(
            "GRS construction needs 0 < z < t < d <= t + z, got t={t}, d={d}, z={z}"
        )));
    }
    let blocks = GrsBlocks {
        a1_over_a2: d - t,
        a2: t - z,
        b2: z + t - d,
        e: d - t,
    };
    let spec = GrsSpec::new(field, points, blocks)?;
    let s = spec.stack();
    let a1 = s.a1_over_a2.vstack(&s.a2)?;
    let b1 = s.b2.vstack(&s.e)?;
    Ok(CeQssCodes {
        b0: spec.vandermonde(),
        b1,
        b2: s.b2,
        a1,
        a2: s.a2,
        e: s.e,
    })
}

pub fn grs_scheme(field: Field, points: Vec<u32>, t: usize, d: usize, z: usize) -> Result<CeQssScheme> {
    CeQssScheme::build(&grs_codes(field, points, t, d, z)?, t, d, z)
}

/// The optimal scheme with `n = t + z` parties at points `1..=n`.
pub fn optimal_grs(q: u32, t: usize, d: usize, z: usize) -> Result<CeQssScheme> {
    if !(0 < z && z < t && t < d && d <= t + z) {
        return Err(Error::Domain(format!(
            "optimal construction needs 0 < z < t < d <= t + z, got t={t}, d={d}, z={z}"
        )));
    }
    let field = Field::new(q)?;
    let points = default_points(field, t + z)?;
    grs_scheme(field, points, t, d, z)
}

/// Layer 1 as an extended CSS code: `F0 = A1 + B2`, `F1 = B2`, extension
/// rows `G_E`. With every extension qudit accessible its threshold is the
/// layer-1 part of the `t` bound; with none it is the `d` bound.
pub fn inner_ecss(codes: &CeQssCodes) -> Result<ExtendedCss> {
    let [_, _, b2, a1, _, e] = codes_of(codes)?;
    ExtendedCss::new(a1.sum(&b2)?, b2, e.gen().clone())
}

/// Storage and communication costs against their lower bounds.
pub fn bounds_report(p: &CeQssParams) -> BoundsReport {
    let bound = |name: &str, value: usize, num: usize, den: usize| {
        let bound = Ratio::new(num as u64, den as u64);
        let v = Ratio::from_integer(value as u64);
        BoundCheck {
            name: name.into(),
            value,
            bound,
            satisfied: v >= bound,
            tight: v == bound,
        }
    };
    BoundsReport {
        storage: bound("storage", p.n * p.w, p.n * p.m, p.t - p.z),
        cc_t: bound("cc_t", p.cc_t, p.t * p.m, p.t - p.z),
        cc_d: bound("cc_d", p.cc_d, p.d * p.m, p.d - p.z),
        efficient: p.cc_d < p.cc_t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn inner_thresholds_match_weights() {
        for (q, t, d, z) in [(5, 2, 3, 1), (7, 3, 4, 2), (7, 3, 5, 2), (11, 4, 6, 3)] {
            let n = t + z;
            let codes = grs_codes(f(q), (1..=n as u32).collect(), t, d, z).unwrap();
            let s = CeQssScheme::build(&codes, t, d, z).unwrap();
            let x = inner_ecss(&codes).unwrap();
            let w = s.weights();
            assert_eq!(x.tau_none().unwrap(), w.d_bound(n));
            assert_eq!(x.tau_full().unwrap(), n + 1 - w.a1_b2.min(w.b1_dual));
            assert!(x.tau_full().unwrap() <= t && x.tau_none().unwrap() <= d);
        }
    }

    #[test]
    fn small_optimal_parameters() {
        let s = optimal_grs(5, 2, 3, 1).unwrap();
        let p = s.params();
        assert_eq!((p.n, p.v1, p.v2, p.m, p.w, p.cc_t, p.cc_d), (3, 1, 1, 2, 2, 4, 3));
        assert_eq!((p.b0, p.b1, p.b2, p.a1, p.a2, p.e), (3, 1, 0, 2, 1, 1));
        let b = bounds_report(p);
        assert_eq!(b.storage.bound, Ratio::from_integer(6));
        assert_eq!(b.cc_t.bound, Ratio::from_integer(4));
        assert_eq!(b.cc_d.bound, Ratio::from_integer(3));
        assert!(b.storage.tight && b.cc_t.tight && b.cc_d.tight && b.efficient);
    }

    #[test]
    fn larger_optimal_parameters() {
        let p = *optimal_grs(7, 3, 5, 2).unwrap().params();
        assert_eq!((p.n, p.m, p.w, p.cc_t, p.cc_d), (5, 3, 3, 9, 5));
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(optimal_grs(4, 2, 3, 1).unwrap_err().code(), "field");
        assert_eq!(optimal_grs(3, 2, 3, 1).unwrap_err().code(), "field");
        assert_eq!(optimal_grs(5, 2, 2, 1).unwrap_err().code(), "domain");
        assert_eq!(optimal_grs(11, 2, 5, 1).unwrap_err().code(), "domain");
    }

    #[test]
    fn extra_party_breaks_d_threshold() {
        let err = grs_scheme(f(5), vec![1, 2, 3, 4], 2, 3, 1).unwrap_err();
        assert!(matches!(err, Error::Condition { .. }));
        let codes = grs_codes(f(5), vec![1, 2, 3, 4], 2, 3, 1).unwrap();
        let report = check_conditions(&codes, 2, 3, 1).unwrap();
        let failed: Vec<_> = report.violations().map(|c| c.condition).collect();
        assert!(failed.contains(&Condition::TThreshold));
        assert!(failed.contains(&Condition::DThreshold));
    }

    #[test]
    fn individual_conditions() {
        let base = grs_codes(f(5), vec![1, 2, 3], 2, 3, 1).unwrap();
        let code_of = |codes: &CeQssCodes, t, d, z| CeQssScheme::build(codes, t, d, z).unwrap_err().code();

        // equal B2 and B1
        let mut c = base.clone();
        c.b2 = c.b1.clone();
        assert_eq!(code_of(&c, 2, 3, 1), "b_chain");

        // A1 overlapping B1
        let mut c = base.clone();
        c.a1 = FqMatrix::from_ints(f(5), &[&[1, 4, 4], &[1, 2, 3]]).unwrap();
        assert_eq!(code_of(&c, 2, 3, 1), "a_complement");

        // E not spanning B1 together with B2
        let mut c = base.clone();
        c.e = FqMatrix::from_ints(f(5), &[&[1, 1, 1]]).unwrap();
        assert_eq!(code_of(&c, 2, 3, 1), "e_complement");

        assert_eq!(code_of(&base, 2, 3, 2), "thresholds");
        assert_eq!(code_of(&base, 1, 3, 0), "t_threshold");
        assert_eq!(code_of(&base, 2, 4, 1), "thresholds");
    }

    #[test]
    fn cost_ratio_boundary() {
        // a2 = e = 1 and d = 2t: the ratio holds with equality
        let field = f(7);
        let v = |start, end| crate::grs::vandermonde_rows(field, &[1, 2, 3, 4], start, end);
        let codes = CeQssCodes {
            b0: v(0, 3),
            b1: v(2, 3),
            b2: v(0, 0),
            a1: v(0, 2),
            a2: v(1, 2),
            e: v(2, 3),
        };
        let report = check_conditions(&codes, 2, 4, 0).unwrap();
        let ratio = report
            .checks
            .iter()
            .find(|c| c.condition == Condition::CostRatio)
            .unwrap();
        assert!(!ratio.holds);
    }

    fn sweep_messages(s: &CeQssScheme, mut visit: impl FnMut(&MessageMatrix)) {
        let p = *s.params();
        let field = s.field();
        let total = p.a1 * p.v1 + (p.b2 + p.e) * p.v1 + p.b1 * p.v2;
        let q = field.q();
        let mut values = vec![0u32; total];
        loop {
            visit(&MessageMatrix::from_flat(field, &p, &values).unwrap());
            let mut i = 0;
            while i < total {
                values[i] += 1;
                if values[i] < q {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if i == total {
                break;
            }
        }
    }

    #[test]
    fn layer_one_column_example() {
        let s = optimal_grs(5, 2, 3, 1).unwrap();
        let field = f(5);
        let msg = MessageMatrix::from_flat(field, s.params(), &[2, 3, 4, 1]).unwrap();
        let shares = s.encode_classical(&msg).unwrap();
        for (j, x) in [1u32, 2, 3].into_iter().enumerate() {
            let l1 = field.reduce(2 + 3 * x as i64 + 4 * (x * x) as i64);
            let l2 = field.reduce(4 * x as i64 + (x * x) as i64);
            assert_eq!(shares.row(j), &[l1, l2]);
        }
    }

    #[test]
    fn zero_message_gives_zero_shares() {
        let s = optimal_grs(7, 3, 5, 2).unwrap();
        let msg = MessageMatrix::zeros(s.field(), s.params());
        assert!(s.encode_classical(&msg).unwrap().is_zero());
    }

    #[test]
    fn exhaustive_round_trips() {
        let s = optimal_grs(5, 2, 3, 1).unwrap();
        let p = *s.params();
        let mut cases = 0;
        sweep_messages(&s, |msg| {
            let shares = s.encode_classical(msg).unwrap();
            let all: Vec<usize> = (0..p.n).collect();
            let layer1 = FqMatrix::from_rows(s.field(), p.v1, &all.iter().map(|&j| shares.row(j)[..p.v1].to_vec()).collect::<Vec<_>>()).unwrap();
            assert_eq!(s.recover_from_d(&all, &layer1).unwrap(), msg.s);
            for set in subsets::of_size(p.n, p.t) {
                let js = subsets::to_indices(set);
                let sub = shares.select_rows(&js).unwrap();
                assert_eq!(s.recover_from_t(&js, &sub).unwrap(), msg.s);
            }
            cases += 1;
        });
        assert_eq!(cases, 625);
    }

    #[test]
    fn layer_two_ignores_secret() {
        let s = optimal_grs(7, 3, 5, 2).unwrap();
        let p = *s.params();
        let field = s.field();
        let mut a = MessageMatrix::zeros(field, &p);
        a.r12.set(0, 0, 3);
        let mut b = a.clone();
        b.s.set(1, 0, 5);
        let (sa, sb) = (s.encode_classical(&a).unwrap(), s.encode_classical(&b).unwrap());
        for j in 0..p.n {
            assert_eq!(sa.row(j)[p.v1..], sb.row(j)[p.v1..]);
            assert_ne!(sa.row(j)[..p.v1], sb.row(j)[..p.v1]);
        }
    }

    #[test]
    fn d1_is_a_relabeling() {
        let field = f(7);
        let p = CeQssParams {
            q: 7,
            n: 0,
            t: 0,
            d: 0,
            z: 0,
            b0: 0,
            b1: 4,
            b2: 0,
            a1: 2,
            a2: 2,
            e: 4,
            v1: 1,
            v2: 2,
            m: 2,
            w: 3,
            cc_t: 0,
            cc_d: 0,
        };
        let mut msg = MessageMatrix::zeros(field, &p);
        for r in 0..4 {
            msg.r12.set(r, 0, r as u32 + 1);
        }
        let d1 = msg.d1(2, 2).unwrap();
        assert_eq!(d1.row_vecs(), vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(unpack_d1(&d1, 4, 1).unwrap(), msg.r12);
    }

    #[test]
    fn tampered_shares_are_rejected() {
        let s = optimal_grs(7, 3, 4, 2).unwrap();
        let p = *s.params();
        let mut msg = MessageMatrix::zeros(s.field(), &p);
        msg.s.set(0, 0, 1);
        let shares = s.encode_classical(&msg).unwrap();
        let all: Vec<usize> = (0..p.n).collect();
        let mut l1 = FqMatrix::zeros(s.field(), p.n, p.v1);
        for j in 0..p.n {
            for c in 0..p.v1 {
                l1.set(j, c, shares.get(j, c));
            }
        }
        assert_eq!(s.recover_from_d(&all, &l1).unwrap(), msg.s);
        l1.set(0, 0, s.field().add(l1.get(0, 0), 1));
        assert_eq!(s.recover_from_d(&all, &l1).unwrap_err().code(), "integrity");
        assert_eq!(s.recover_from_d(&all[..2], &l1).unwrap_err().code(), "domain");
    }

    #[test]
    fn plans_match_costs() {
        let s = optimal_grs(7, 3, 5, 2).unwrap();
        let p = s.params();
        assert_eq!(s.plan_d(&[0, 1, 2, 3, 4]).total(), p.cc_d);
        assert_eq!(s.plan_t(&[0, 2, 4]).total(), p.cc_t);
        let layout = s.layout();
        assert_eq!(layout.layer1(1), 3..4);
        assert_eq!(layout.layer2(1), 4..6);
    }

    #[test]
    fn grouped_access_structure() {
        let s = optimal_grs(5, 2, 3, 1).unwrap();
        let p = *s.params();
        let css = s.as_css().unwrap();
        assert_eq!(css.n(), p.n * p.w);
        assert_eq!(css.k(), p.m);
        let report = css.classify_groups(&s.layout().groups()).unwrap();
        assert!(report.structural_violations().is_empty());
        for set in subsets::by_size(p.n) {
            let size = set.count_ones() as usize;
            if size >= p.t {
                assert_eq!(report.status_mask(set), crate::css::SetStatus::Authorized);
            }
            if size <= p.z {
                assert_eq!(report.status_mask(set), crate::css::SetStatus::Unauthorized);
            }
        }

        // layer 1 of any d parties alone is authorized
        let layout = s.layout();
        let layer1: Vec<usize> = (0..p.n).flat_map(|j| layout.layer1(j)).collect();
        assert!(css.is_authorized(&layer1));
        let two: Vec<usize> = (0..2).flat_map(|j| layout.layer1(j)).collect();
        assert!(!css.is_authorized(&two));
    }

    #[test]
    fn css_view_matches_encoding() {
        let s = optimal_grs(7, 3, 5, 2).unwrap();
        let p = *s.params();
        let css = s.as_css().unwrap();
        let field = s.field();
        let total = p.a1 * p.v1 + (p.b2 + p.e) * p.v1 + p.b1 * p.v2;
        let values: Vec<u32> = (0..total as u32).map(|i| (i * 3 + 1) % 7).collect();
        let msg = MessageMatrix::from_flat(field, &p, &values).unwrap();
        let shares = s.encode_classical(&msg).unwrap();
        let flat: Vec<u32> = (0..p.n).flat_map(|j| shares.row(j).to_vec()).collect();
        assert!(css.pair().c0().contains(&flat));
        let mut secret_only = msg.clone();
        secret_only.r11 = FqMatrix::zeros(field, p.b2, p.v1);
        secret_only.r12 = FqMatrix::zeros(field, p.e, p.v1);
        secret_only.r2 = FqMatrix::zeros(field, p.b1, p.v2);
        let diff: Vec<u32> = {
            let a = s.encode_classical(&secret_only).unwrap();
            (0..p.n)
                .flat_map(|j| (0..p.w).map(move |c| (j, c)))
                .map(|(j, c)| field.sub(shares.get(j, c), a.get(j, c)))
                .collect()
        };
        assert!(css.pair().c1().contains(&diff));
    }
}
