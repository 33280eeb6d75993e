//! Dense matrices over a prime field.
//!
//! Coordinates are 0-based. Every canonical form produced here (reduced
//! row-echelon form, kernel bases, complements) is deterministic so that
//! generator matrices derived from the same inputs are byte-identical.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FqMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// Row-equivalent matrix in reduced row-echelon form (same shape as input).
    pub reduced: FqMatrix,
    pub rank: usize,
    /// Pivot columns, strictly increasing.
    pub pivots: Vec<usize>,
}

/// One solution of `A x = b` plus a basis of the kernel of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<u32>,
    pub kernel: FqMatrix,
}

impl FqMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FqMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.q();
        }
        m
    }

    pub fn from_flat(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&v| v >= field.q()) {
            return Err(Error::Domain(format!(
                "entry {bad} is not a residue of {field}"
            )));
        }
        Ok(FqMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix with `cols` columns from a list of rows.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_flat(field, rows.len(), cols, data)
    }

    /// Convenience constructor reducing arbitrary integers mod q.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let reduced: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.reduce(v)).collect())
            .collect();
        Self::from_rows(field, cols, &reduced)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_field(&self, other: &FqMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let q = f.q() as u64;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u64 * other.get(k, j) as u64) % q;
                }
                out.data[i * other.cols + j] = acc as u32;
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `coeffs · self`.
    pub fn combine_rows(&self, coeffs: &[u32]) -> Result<Vec<u32>> {
        if coeffs.len() != self.rows {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} rows",
                coeffs.len(),
                self.rows
            )));
        }
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, v));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector: `self · x`.
    pub fn apply(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} columns over {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FqMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "cannot join {} rows beside {}",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(FqMatrix {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<FqMatrix> {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            if i >= self.rows {
                return Err(Error::Index {
                    index: i,
                    len: self.rows,
                });
            }
            data.extend_from_slice(self.row(i));
        }
        Ok(FqMatrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        })
    }

    pub fn row_range(&self, start: usize, end: usize) -> FqMatrix {
        let idx: Vec<usize> = (start..end).collect();
        self.select_rows(&idx).expect("row range in bounds")
    }

    /// The submatrix on the columns in `cols` (sorted, deduplicated).
    pub fn column_submatrix(&self, cols: &[usize]) -> Result<FqMatrix> {
        let mut idx = cols.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Index {
                index: bad,
                len: self.cols,
            });
        }
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(idx.iter().map(|&c| row[c]));
        }
        Ok(FqMatrix {
            field: self.field,
            rows: self.rows,
            cols: idx.len(),
            data,
        })
    }

    /// Column submatrix for a coordinate bitmask; bits beyond `cols` are ignored.
    pub(crate) fn columns_by_mask(&self, mask: u64) -> FqMatrix {
        let idx: Vec<usize> = (0..self.cols).filter(|&c| mask >> c & 1 == 1).collect();
        self.column_submatrix(&idx).expect("mask in range")
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if factor != 0 {
                        m.axpy_row(i, r, f.neg(factor));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            reduced: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        EchelonBasis::from_matrix(self).rank()
    }

    /// The nonzero rows of the reduced row-echelon form: a canonical basis
    /// of the row space.
    pub fn row_basis(&self) -> FqMatrix {
        let Rref { reduced, rank, .. } = self.rref();
        reduced.row_range(0, rank)
    }

    /// Basis of `{x : self · xᵀ = 0}` in reduced row-echelon form.
    pub fn null_space(&self) -> FqMatrix {
        let f = self.field;
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = FqMatrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            basis.set(k, fc, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(k, pc, f.neg(reduced.get(i, fc)));
            }
        }
        basis.row_basis()
    }

    pub fn row_space_contains(&self, v: &[u32]) -> bool {
        EchelonBasis::from_matrix(self).contains(v)
    }

    /// True when the row space of `other` lies inside the row space of `self`.
    pub fn row_space_includes(&self, other: &FqMatrix) -> bool {
        let basis = EchelonBasis::from_matrix(self);
        (0..other.rows).all(|i| basis.contains(other.row(i)))
    }

    pub fn same_row_space(&self, other: &FqMatrix) -> bool {
        self.cols == other.cols
            && self.row_space_includes(other)
            && other.row_space_includes(self)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: u32) {
        let f = self.field;
        for v in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *v = f.mul(*v, s);
        }
    }

    /// row[dst] += s * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, s: u32) {
        let f = self.field;
        for j in 0..self.cols {
            let v = f.add(self.get(dst, j), f.mul(s, self.get(src, j)));
            self.data[dst * self.cols + j] = v;
        }
    }
}

/// Generator of a complement of `rowspace(g1)` inside `rowspace(g0)`.
///
/// Rows are taken greedily from `g0` in order, skipping any row already in
/// the span of `g1` and the rows chosen so far.
pub fn complement_basis(g0: &FqMatrix, g1: &FqMatrix) -> Result<FqMatrix> {
    if g0.field != g1.field {
        return Err(Error::FieldMismatch(g0.field.q(), g1.field.q()));
    }
    if g0.cols != g1.cols {
        return Err(Error::Dimension(format!(
            "lengths {} and {} differ",
            g0.cols, g1.cols
        )));
    }
    if !g0.row_space_includes(g1) {
        return Err(Error::Domain(
            "row space of the subcode generator is not contained in the code".into(),
        ));
    }
    let mut span = EchelonBasis::from_matrix(g1);
    let mut chosen = Vec::new();
    for i in 0..g0.rows {
        if span.insert(g0.row(i)) {
            chosen.push(i);
        }
    }
    g0.select_rows(&chosen)
}

/// Solves `a · x = b`. Returns `None` when the system is inconsistent.
pub fn solve_affine(a: &FqMatrix, b: &[u32]) -> Result<Option<AffineSolution>> {
    if b.len() != a.rows {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows
        )));
    }
    let f = a.field;
    if let Some(bad) = b.iter().find(|&&v| v >= f.q()) {
        return Err(Error::Domain(format!("entry {bad} is not a residue of {f}")));
    }
    let rhs = FqMatrix {
        field: f,
        rows: a.rows,
        cols: 1,
        data: b.to_vec(),
    };
    let aug = a.hstack(&rhs)?;
    let Rref {
        reduced, pivots, ..
    } = aug.rref();
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut particular = vec![0u32; a.cols];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = reduced.get(i, a.cols);
    }
    Ok(Some(AffineSolution {
        particular,
        kernel: a.null_space(),
    }))
}

/// Incrementally built echelon basis used for span membership.
#[derive(Debug, Clone)]
pub(crate) struct EchelonBasis {
    field: Field,
    len: usize,
    /// (pivot column, row with 1 at the pivot)
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub(crate) fn new(field: Field, len: usize) -> Self {
        EchelonBasis {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub(crate) fn from_matrix(m: &FqMatrix) -> Self {
        let mut b = Self::new(m.field, m.cols);
        for i in 0..m.rows {
            b.insert(m.row(i));
        }
        b
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.len);
        let f = self.field;
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            let c = w[*p];
            if c != 0 {
                let s = f.neg(c);
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(s, y));
                }
            }
        }
        w
    }

    pub(crate) fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub(crate) fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[p]).expect("nonzero");
        for x in &mut w {
            *x = f.mul(*x, inv);
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in &mut self.rows {
            let c = row[p];
            if c != 0 {
                let s = f.neg(c);
                for (x, &y) in row.iter_mut().zip(&w) {
                    *x = f.add(*x, f.mul(s, y));
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqMatrix[{}; {}x{}]", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "\n  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    q: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
}

impl Serialize for FqMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            q: self.field.q(),
            rows: self.rows,
            cols: self.cols,
            entries: self.row_vecs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FqMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MatrixRepr::deserialize(d)?;
        let field = Field::new(r.q).map_err(D::Error::custom)?;
        if r.entries.len() != r.rows {
            return Err(D::Error::custom(format!(
                "{} rows listed, header says {}",
                r.entries.len(),
                r.rows
            )));
        }
        FqMatrix::from_rows(field, r.cols, &r.entries).map_err(D::Error::custom)
    }
}
