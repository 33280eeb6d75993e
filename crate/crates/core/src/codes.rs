//! Linear codes, nested pairs and their minimum distances.
//!
//! Code equality is row-space equality; generator matrices are only
//! canonicalized where an operation has to build a new basis.

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{complement_basis, FqMatrix};
use crate::subsets;

/// Default cap on the work done by minimum-distance searches: codewords
/// enumerated, or coordinate subsets scanned.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// An `[n, k]_q` linear code given by a full-row-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    gen: FqMatrix,
}

/// How a minimum distance is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMethod {
    /// Cheaper of the two routes below that fits the budget.
    Auto,
    /// Walk every codeword.
    Enumerate,
    /// Smallest support `W` on which the shortened codes differ.
    Support,
}

pub fn hamming_weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

impl LinearCode {
    /// Wraps a generator matrix; it must have full row rank.
    pub fn new(gen: FqMatrix) -> Result<Self> {
        let rank = gen.rank();
        if rank != gen.rows() {
            return Err(Error::Domain(format!(
                "generator has {} rows but rank {rank}",
                gen.rows()
            )));
        }
        Ok(LinearCode { gen })
    }

    /// Code spanned by the rows of `m`, keeping the first independent rows.
    pub fn spanned_by(m: &FqMatrix) -> Self {
        let empty = FqMatrix::zeros(m.field(), 0, m.cols());
        let gen = complement_basis(m, &empty).expect("empty matrix is always nested");
        LinearCode { gen }
    }

    pub fn zero(field: Field, n: usize) -> Self {
        LinearCode {
            gen: FqMatrix::zeros(field, 0, n),
        }
    }

    pub fn full(field: Field, n: usize) -> Self {
        LinearCode {
            gen: FqMatrix::identity(field, n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.gen.field()
    }

    #[inline]
    pub fn gen(&self) -> &FqMatrix {
        &self.gen
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().q(), other.field().q()));
        }
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "code lengths {} and {} differ",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.n() && self.gen.row_space_contains(v)
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.field() == other.field()
            && self.n() == other.n()
            && other.gen.row_space_includes(&self.gen)
    }

    /// Row-space equality.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.is_subcode_of(other) && other.is_subcode_of(self)
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode {
            gen: self.gen.null_space(),
        }
    }

    /// `C^A`: codewords restricted to the coordinates in `a`.
    pub fn puncture(&self, a: &[usize]) -> Result<LinearCode> {
        Ok(Self::spanned_by(&self.gen.column_submatrix(a)?))
    }

    /// `C_A`: codewords vanishing outside `a`, restricted to `a`.
    pub fn shorten(&self, a: &[usize]) -> Result<LinearCode> {
        let keep = sorted_checked(a, self.n())?;
        let outside: Vec<usize> = (0..self.n()).filter(|i| !keep.contains(i)).collect();
        // coefficient vectors x with x·G vanishing on the outside coordinates
        let coeffs = self.gen.column_submatrix(&outside)?.transpose().null_space();
        let sub = coeffs.mul(&self.gen)?;
        Ok(Self::spanned_by(&sub.column_submatrix(&keep)?))
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(LinearCode {
            gen: self.gen.vstack(&other.gen)?.row_basis(),
        })
    }

    /// Minimum distance; `n + 1` for the zero code.
    pub fn weight(&self) -> Result<usize> {
        self.weight_with(WeightMethod::Auto, DEFAULT_BUDGET)
    }

    pub fn weight_with(&self, method: WeightMethod, budget: u128) -> Result<usize> {
        let zero = LinearCode::zero(self.field(), self.n());
        let pair = NestedPair {
            c0: self.clone(),
            c1: zero,
            quotient: self.gen.clone(),
        };
        pair.weight_with(method, budget)
    }
}

fn sorted_checked(a: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut v = a.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&i| i >= n) {
        return Err(Error::Index { index: bad, len: n });
    }
    Ok(v)
}

/// A pair `C1 ⊆ C0` with a fixed generator of the complement `C0 / C1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedPair {
    c0: LinearCode,
    c1: LinearCode,
    quotient: FqMatrix,
}

impl NestedPair {
    pub fn new(c0: LinearCode, c1: LinearCode) -> Result<Self> {
        c0.check_compatible(&c1)?;
        if !c1.is_subcode_of(&c0) {
            return Err(Error::Domain("subcode is not contained in the code".into()));
        }
        let quotient = complement_basis(c0.gen(), c1.gen())?;
        Ok(NestedPair { c0, c1, quotient })
    }

    /// Builds `C0` as the span of `[quotient; G_C1]`, which must have full rank.
    pub fn from_quotient(quotient: FqMatrix, c1: LinearCode) -> Result<Self> {
        let g0 = quotient.vstack(c1.gen())?;
        let c0 = LinearCode::new(g0).map_err(|_| {
            Error::Domain("quotient rows are not independent modulo the subcode".into())
        })?;
        Ok(NestedPair { c0, c1, quotient })
    }

    pub fn c0(&self) -> &LinearCode {
        &self.c0
    }

    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    /// Generator of the complement, `G_{C0/C1}`.
    pub fn quotient(&self) -> &FqMatrix {
        &self.quotient
    }

    pub fn is_strict(&self) -> bool {
        self.quotient.rows() > 0
    }

    /// `(C1^⊥, C0^⊥)`, the dual pair.
    pub fn dual(&self) -> NestedPair {
        NestedPair::new(self.c1.dual(), self.c0.dual()).expect("duals reverse inclusion")
    }

    /// `wt(C0 \ C1)`; `n + 1` when the codes are equal.
    pub fn weight(&self) -> Result<usize> {
        self.weight_with(WeightMethod::Auto, DEFAULT_BUDGET)
    }

    pub fn weight_with(&self, method: WeightMethod, budget: u128) -> Result<usize> {
        let n = self.c0.n();
        let enum_cost = (self.c0.field().q() as u128).checked_pow(self.c0.k() as u32);
        let support_cost = 1u128.checked_shl(n as u32).filter(|_| n < 64);
        let fits = |c: Option<u128>| c.filter(|&c| c <= budget);
        let chosen = match method {
            WeightMethod::Enumerate => fits(enum_cost).map(|_| WeightMethod::Enumerate),
            WeightMethod::Support => fits(support_cost).map(|_| WeightMethod::Support),
            WeightMethod::Auto => match (fits(enum_cost), fits(support_cost)) {
                (Some(e), Some(s)) if e <= s.saturating_mul(n.max(1) as u128) => {
                    Some(WeightMethod::Enumerate)
                }
                (_, Some(_)) => Some(WeightMethod::Support),
                (Some(_), None) => Some(WeightMethod::Enumerate),
                (None, None) => None,
            },
        };
        match chosen {
            Some(WeightMethod::Enumerate) => Ok(self.weight_by_enumeration()),
            Some(_) => Ok(self.weight_by_support()),
            None => Err(Error::Resource {
                what: format!(
                    "minimum distance of a [{n}, {}] code over F_{}",
                    self.c0.k(),
                    self.c0.field().q()
                ),
                needed: enum_cost
                    .unwrap_or(u128::MAX)
                    .min(support_cost.unwrap_or(u128::MAX)),
                limit: budget,
            }),
        }
    }

    /// Odometer walk over `[quotient; G_C1]` coefficient vectors, updating the
    /// codeword one row addition at a time.
    fn weight_by_enumeration(&self) -> usize {
        let n = self.c0.n();
        let f = self.c0.field();
        let q = f.q();
        let basis = self.quotient.vstack(self.c1.gen()).expect("same length");
        let k = basis.rows();
        let nq = self.quotient.rows();
        let mut digits = vec![0u32; k];
        let mut word = vec![0u32; n];
        let mut nonzero_quotient = 0usize;
        let mut best = n + 1;
        loop {
            let mut i = 0;
            loop {
                if i == k {
                    return best;
                }
                let row = basis.row(i);
                for (w, &r) in word.iter_mut().zip(row) {
                    *w = f.add(*w, r);
                }
                digits[i] += 1;
                if digits[i] == q {
                    digits[i] = 0;
                    if i < nq {
                        nonzero_quotient -= 1;
                    }
                    i += 1;
                } else {
                    if digits[i] == 1 && i < nq {
                        nonzero_quotient += 1;
                    }
                    break;
                }
            }
            if nonzero_quotient > 0 {
                best = best.min(hamming_weight(&word));
            }
        }
    }

    /// Smallest `|W|` with `(C0)_W ≠ (C1)_W`, using
    /// `dim C_W = dim C - rank G_C^(complement of W)`.
    fn weight_by_support(&self) -> usize {
        let n = self.c0.n();
        let (k0, k1) = (self.c0.k(), self.c1.k());
        for w in 1..=n {
            for mask in subsets::of_size(n, w) {
                let rest = subsets::complement(mask, n);
                let r0 = self.c0.gen.columns_by_mask(rest).rank();
                let r1 = self.c1.gen.columns_by_mask(rest).rank();
                if k0 - r0 > k1 - r1 {
                    return w;
                }
            }
        }
        n + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn code(q: u32, rows: &[&[i64]]) -> LinearCode {
        LinearCode::new(FqMatrix::from_ints(fld(q), rows).unwrap()).unwrap()
    }

    fn rs3() -> LinearCode {
        // evaluations of 1 and x at points 0, 1, 2
        code(3, &[&[1, 1, 1], &[0, 1, 2]])
    }

    #[test]
    fn rejects_rank_deficient_generators() {
        let m = FqMatrix::from_ints(fld(5), &[&[1, 2, 3], &[2, 4, 6]]).unwrap();
        assert!(LinearCode::new(m.clone()).is_err());
        assert_eq!(LinearCode::spanned_by(&m).k(), 1);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(LinearCode::full(fld(2), 3).dual().k(), 0);
        let d = code(3, &[&[1, 1, 1]]).dual();
        assert_eq!(d.k(), 2);
        assert!(d.contains(&[1, 2, 0]) && d.contains(&[0, 1, 2]));
        let d = LinearCode::zero(fld(5), 4).dual();
        assert!(d.same_code(&LinearCode::full(fld(5), 4)));
        assert!(rs3().dual().dual().same_code(&rs3()));
    }

    #[test]
    fn puncture_examples() {
        let c = rs3();
        assert!(c.puncture(&[0, 1, 2]).unwrap().same_code(&c));
        let p = code(3, &[&[1, 1, 1]]).puncture(&[0, 1]).unwrap();
        assert!(p.same_code(&code(3, &[&[1, 1]])));
        assert!(c.puncture(&[5]).is_err());
    }

    #[test]
    fn shorten_examples() {
        let c = rs3();
        assert!(c.shorten(&[0, 1, 2]).unwrap().same_code(&c));
        let s = LinearCode::full(fld(5), 3).shorten(&[0, 2]).unwrap();
        assert!(s.same_code(&LinearCode::full(fld(5), 2)));
        // a(1,1,1) + b(0,1,2) vanishes at coordinate 2 iff a = b, giving (1,2,0)
        let s = c.shorten(&[0, 1]).unwrap();
        assert!(s.same_code(&code(3, &[&[1, 2]])));
    }

    #[test]
    fn sum_examples() {
        let c = rs3();
        assert!(c.sum(&LinearCode::zero(fld(3), 3)).unwrap().same_code(&c));
        assert!(c.sum(&c).unwrap().same_code(&c));
        let s = code(3, &[&[1, 1, 1]]).sum(&code(3, &[&[0, 1, 2]])).unwrap();
        assert_eq!(s.k(), 2);
        assert!(c.sum(&LinearCode::zero(fld(3), 4)).is_err());
        assert!(c.sum(&LinearCode::zero(fld(5), 3)).is_err());
    }

    #[test]
    fn weight_examples() {
        for method in [WeightMethod::Enumerate, WeightMethod::Support] {
            let w = |c: &LinearCode| c.weight_with(method, DEFAULT_BUDGET).unwrap();
            assert_eq!(w(&LinearCode::full(fld(7), 4)), 1);
            assert_eq!(w(&code(3, &[&[1, 1, 1]])), 3);
            assert_eq!(w(&rs3()), 2);
            assert_eq!(w(&LinearCode::zero(fld(3), 5)), 6);
        }
    }

    #[test]
    fn nested_weight_examples() {
        for method in [WeightMethod::Enumerate, WeightMethod::Support] {
            let pair = NestedPair::new(LinearCode::full(fld(5), 3), code(5, &[&[1, 4, 4]])).unwrap();
            assert_eq!(pair.weight_with(method, DEFAULT_BUDGET).unwrap(), 1);
            let pair = NestedPair::new(rs3(), code(3, &[&[1, 1, 1]])).unwrap();
            assert_eq!(pair.weight_with(method, DEFAULT_BUDGET).unwrap(), 2);
            let pair = NestedPair::new(rs3(), rs3()).unwrap();
            assert!(!pair.is_strict());
            assert_eq!(pair.weight_with(method, DEFAULT_BUDGET).unwrap(), 4);
        }
    }

    #[test]
    fn nesting_is_checked() {
        let err = NestedPair::new(code(3, &[&[1, 1, 1]]), code(3, &[&[0, 1, 2]]));
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let big = LinearCode::full(fld(13), 30);
        let err = big.weight_with(WeightMethod::Auto, 1 << 20);
        assert!(matches!(err, Err(Error::Resource { .. })));
        let err = rs3().weight_with(WeightMethod::Enumerate, 4);
        assert!(matches!(err, Err(Error::Resource { limit: 4, .. })));
    }
}
