//! Prime fields F_q.
//!
//! Elements are stored as canonical residues `0..q`. Matrices and codes carry
//! raw `u32` residues together with a [`Field`]; [`Fe`] is the checked,
//! self-describing element type used at API boundaries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime field F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    q: u32,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = q as u64;
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Field(format!("{q} is not prime")));
        }
        Ok(Field { q })
    }

    /// Smallest prime field with at least `min` elements.
    pub fn smallest_at_least(min: u32) -> Self {
        let mut q = min.max(2);
        while !is_prime(q) {
            q += 1;
        }
        Field { q }
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a % self.q == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.q as i64, (a % self.q) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.q;
        let mut b = base % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    pub fn elem(self, value: u32) -> Result<Fe> {
        Fe::new(self, value)
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Field::new(q)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.q
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// A field element tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fe {
    value: u32,
    field: Field,
}

/// Binary operation selector for [`Fe::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

impl Fe {
    pub fn new(field: Field, value: u32) -> Result<Self> {
        if value >= field.q {
            return Err(Error::Domain(format!(
                "{value} is not a canonical residue of {field}"
            )));
        }
        Ok(Fe { value, field })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn arith(self, other: Fe, op: Op) -> Result<Fe> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q, other.field.q));
        }
        let f = self.field;
        let value = match op {
            Op::Add => f.add(self.value, other.value),
            Op::Sub => f.sub(self.value, other.value),
            Op::Mul => f.mul(self.value, other.value),
        };
        Ok(Fe { value, field: f })
    }

    pub fn add(self, other: Fe) -> Result<Fe> {
        self.arith(other, Op::Add)
    }

    pub fn sub(self, other: Fe) -> Result<Fe> {
        self.arith(other, Op::Sub)
    }

    pub fn mul(self, other: Fe) -> Result<Fe> {
        self.arith(other, Op::Mul)
    }

    pub fn inv(self) -> Result<Fe> {
        Ok(Fe {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(q: u32, v: u32) -> Fe {
        Field::new(q).unwrap().elem(v).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(fe(5, 3).add(fe(5, 4)).unwrap().value(), 2);
        assert_eq!(fe(5, 2).mul(fe(5, 4)).unwrap().value(), 3);
        assert_eq!(fe(2, 0).mul(fe(2, 0)).unwrap().value(), 0);
        assert_eq!(fe(7, 2).sub(fe(7, 5)).unwrap().value(), 4);
    }

    #[test]
    fn inverse_examples() {
        for q in [2, 3, 5, 7, 11, 13] {
            assert_eq!(fe(q, 1).inv().unwrap().value(), 1);
        }
        assert_eq!(fe(5, 2).inv().unwrap().value(), 3);
        assert_eq!(fe(5, 4).inv().unwrap().value(), 4);
        assert_eq!(fe(5, 0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(Field::new(4), Err(Error::Field(_))));
        assert!(matches!(Field::new(1), Err(Error::Field(_))));
        assert!(matches!(Field::new(0), Err(Error::Field(_))));
        assert!(Field::new(5).unwrap().elem(5).is_err());
        assert_eq!(
            fe(5, 1).add(fe(7, 1)),
            Err(Error::FieldMismatch(5, 7))
        );
    }

    #[test]
    fn smallest_prime() {
        assert_eq!(Field::smallest_at_least(4).q(), 5);
        assert_eq!(Field::smallest_at_least(8).q(), 11);
        assert_eq!(Field::smallest_at_least(7).q(), 7);
    }

    proptest! {
        #[test]
        fn field_axioms(qi in 0usize..6, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
            let q = [2u32, 3, 5, 7, 11, 13][qi];
            let f = Field::new(q).unwrap();
            let (a, b, c) = (a % q, b % q, c % q);
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                prop_assert_eq!(f.inv(a).unwrap(), f.pow(a, (q - 2) as u64));
            }
        }
    }
}
