//! Stacked Vandermonde generators for the GRS instantiation.
//!
//! Row `r` of the stack evaluates `x^r` at the points. Any run of consecutive
//! rows generates a generalized Reed-Solomon code (the shift by `x^start` is a
//! nonzero column multiplier because every point is nonzero), so every block
//! union used by the construction is MDS.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::FqMatrix;

/// Row-block sizes of the stack, top to bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrsBlocks {
    pub a1_over_a2: usize,
    pub a2: usize,
    pub b2: usize,
    pub e: usize,
}

impl GrsBlocks {
    pub fn b0(&self) -> usize {
        self.a1_over_a2 + self.a2 + self.b2 + self.e
    }

    pub fn a1(&self) -> usize {
        self.a1_over_a2 + self.a2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsSpec {
    field: Field,
    points: Vec<u32>,
    blocks: GrsBlocks,
}

/// The four generator blocks `G_{A1/A2}`, `G_{A2}`, `G_{B2}`, `G_E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsStack {
    pub a1_over_a2: FqMatrix,
    pub a2: FqMatrix,
    pub b2: FqMatrix,
    pub e: FqMatrix,
}

/// The points `1, 2, ..., n`.
pub fn default_points(field: Field, n: usize) -> Result<Vec<u32>> {
    if (field.q() as usize) < n + 1 {
        return Err(Error::Field(format!(
            "{field} has fewer than {n} nonzero points"
        )));
    }
    Ok((1..=n as u32).collect())
}

impl GrsSpec {
    pub fn new(field: Field, points: Vec<u32>, blocks: GrsBlocks) -> Result<Self> {
        let n = points.len();
        if let Some(&p) = points.iter().find(|&&p| p == 0 || p >= field.q()) {
            return Err(Error::Domain(format!(
                "evaluation point {p} is not a nonzero element of {field}"
            )));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::Domain("evaluation points are not distinct".into()));
        }
        if blocks.b0() > n {
            return Err(Error::Domain(format!(
                "{} stacked rows exceed length {n}",
                blocks.b0()
            )));
        }
        Ok(GrsSpec {
            field,
            points,
            blocks,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn blocks(&self) -> GrsBlocks {
        self.blocks
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// The full `b0 × n` stack.
    pub fn vandermonde(&self) -> FqMatrix {
        vandermonde_rows(self.field, &self.points, 0, self.blocks.b0())
    }

    pub fn stack(&self) -> GrsStack {
        let b = self.blocks;
        let cuts = [
            0,
            b.a1_over_a2,
            b.a1(),
            b.a1() + b.b2,
            b.b0(),
        ];
        let block = |i: usize| vandermonde_rows(self.field, &self.points, cuts[i], cuts[i + 1]);
        GrsStack {
            a1_over_a2: block(0),
            a2: block(1),
            b2: block(2),
            e: block(3),
        }
    }
}

/// Rows `x^start, ..., x^(end-1)` evaluated at `points`.
pub fn vandermonde_rows(field: Field, points: &[u32], start: usize, end: usize) -> FqMatrix {
    let mut m = FqMatrix::zeros(field, end.saturating_sub(start), points.len());
    for (i, r) in (start..end).enumerate() {
        for (j, &x) in points.iter().enumerate() {
            m.set(i, j, field.pow(x, r as u64));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{LinearCode, NestedPair};

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn blocks(a1_over_a2: usize, a2: usize, b2: usize, e: usize) -> GrsBlocks {
        GrsBlocks {
            a1_over_a2,
            a2,
            b2,
            e,
        }
    }

    #[test]
    fn vandermonde_examples() {
        let spec = GrsSpec::new(f(5), vec![1, 2, 3], blocks(1, 1, 0, 1)).unwrap();
        let v = spec.vandermonde();
        assert_eq!(v.row_vecs(), vec![vec![1, 1, 1], vec![1, 2, 3], vec![1, 4, 4]]);

        let spec = GrsSpec::new(f(7), vec![1, 2, 3, 4], blocks(1, 0, 0, 0)).unwrap();
        assert_eq!(spec.vandermonde().row_vecs(), vec![vec![1, 1, 1, 1]]);

        let spec = GrsSpec::new(f(7), vec![1, 2, 3, 4, 5, 6], blocks(2, 2, 1, 1)).unwrap();
        assert_eq!(spec.vandermonde().rank(), 6);
    }

    #[test]
    fn stack_example() {
        // t = 2, z = 1, d = 3: a1 = 2, a2 = 1, b2 = 0, e = 1
        let spec = GrsSpec::new(f(5), default_points(f(5), 3).unwrap(), blocks(1, 1, 0, 1)).unwrap();
        let s = spec.stack();
        assert_eq!(s.a1_over_a2.row_vecs(), vec![vec![1, 1, 1]]);
        assert_eq!(s.a2.row_vecs(), vec![vec![1, 2, 3]]);
        assert_eq!(s.b2.rows(), 0);
        assert_eq!(s.e.row_vecs(), vec![vec![1, 4, 4]]);

        let spec = GrsSpec::new(f(7), vec![1, 2, 3, 4], blocks(1, 1, 1, 0)).unwrap();
        assert_eq!(spec.stack().e.rows(), 0);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GrsSpec::new(f(5), vec![0, 1, 2], blocks(1, 0, 0, 0)).is_err());
        assert!(GrsSpec::new(f(5), vec![1, 1, 2], blocks(1, 0, 0, 0)).is_err());
        assert!(GrsSpec::new(f(5), vec![1, 2], blocks(1, 1, 1, 0)).is_err());
        assert!(default_points(f(5), 5).is_err());
    }

    // Singleton equality for every run of consecutive rows, and the nested
    // bound used by the optimal construction.
    #[test]
    fn consecutive_blocks_are_mds() {
        for (q, n) in [(5u32, 4usize), (7, 6), (7, 5)] {
            let field = f(q);
            let pts = default_points(field, n).unwrap();
            for start in 0..n {
                for end in start + 1..=n {
                    let g = vandermonde_rows(field, &pts, start, end);
                    let code = LinearCode::new(g).unwrap();
                    let k = end - start;
                    assert_eq!(code.weight().unwrap(), n - k + 1, "rows {start}..{end}");
                }
            }
            for k0 in 1..=n {
                for k1 in 0..k0 {
                    let c0 = LinearCode::new(vandermonde_rows(field, &pts, 0, k0)).unwrap();
                    let c1 = LinearCode::new(vandermonde_rows(field, &pts, 0, k1)).unwrap();
                    let w = NestedPair::new(c0, c1).unwrap().weight().unwrap();
                    assert!(w >= n - k0 + 1);
                }
            }
        }
    }
}
