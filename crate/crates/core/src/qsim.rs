//! Dense qudit state vectors, partial traces and von Neumann entropies.
//!
//! Basis index digits are base `q` with qudit 0 as the most significant
//! digit. Entropies are in base-`q` units, so one maximally mixed qudit has
//! entropy 1.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::css::{CssCode, SetStatus};
use crate::error::{Error, Result};
use crate::linalg::FqMatrix;
use crate::subsets;

/// Default cap on `q^N` for a dense state.
pub const DEFAULT_MAX_DIM: u128 = 1 << 24;
/// Cap on the dimension of a reduced density matrix.
pub const MAX_MARGINAL_DIM: u128 = 1 << 14;
/// Tolerance for entropy comparisons.
pub const ENTROPY_TOL: f64 = 1e-6;
/// Eigenvalues below this are treated as zero.
pub const EIGEN_CUTOFF: f64 = 1e-12;

const NORM_TOL: f64 = 1e-12;

/// The dense-state cap, overridable with `CEQSS_MAX_DIM`.
pub fn max_dim() -> u128 {
    std::env::var("CEQSS_MAX_DIM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

fn dim_of(q: u32, n: usize) -> Option<u128> {
    (q as u128).checked_pow(n as u32)
}

fn guard(q: u32, n: usize, limit: u128, what: &str) -> Result<usize> {
    match dim_of(q, n) {
        Some(d) if d <= limit => Ok(d as usize),
        d => Err(Error::Resource {
            what: format!("{what} of {n} qudits over F_{q}"),
            needed: d.unwrap_or(u128::MAX),
            limit,
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    q: u32,
    num_qudits: usize,
    amps: Vec<Complex64>,
}

/// A reduced density matrix, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    q: u32,
    dim: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

/// Uniform superposition over `offset + rowspace(gen)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetState {
    offset: Vec<u32>,
    gen: FqMatrix,
}

/// Entropy-based status of one party set with the quantities behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyVerdict {
    pub status: SetStatus,
    pub s_r: f64,
    pub s_w: f64,
    pub s_rw: f64,
    /// Distance to the condition that fired, or to the nearer one.
    pub residual: f64,
}

impl DenseState {
    pub fn new(q: u32, num_qudits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = guard(q, num_qudits, max_dim(), "dense state")?;
        if amps.len() != dim {
            return Err(Error::Dimension(format!(
                "{num_qudits} qudits over F_{q} need {dim} amplitudes, got {}",
                amps.len()
            )));
        }
        let state = DenseState {
            q,
            num_qudits,
            amps,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!("state has norm {norm}")));
        }
        Ok(state)
    }

    pub fn basis(q: u32, num_qudits: usize, index: usize) -> Result<Self> {
        let dim = guard(q, num_qudits, max_dim(), "dense state")?;
        if index >= dim {
            return Err(Error::Index { index, len: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(q, num_qudits, amps)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn num_qudits(&self) -> usize {
        self.num_qudits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Indices and values of the nonzero amplitudes.
    pub fn nonzero(&self) -> Vec<(usize, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, &a)| (i, a))
            .collect()
    }

    /// Base-`q` digits of a basis index, qudit 0 first.
    pub fn digits(&self, mut index: usize) -> Vec<u32> {
        let q = self.q as usize;
        let mut d = vec![0; self.num_qudits];
        for slot in d.iter_mut().rev() {
            *slot = (index % q) as u32;
            index /= q;
        }
        d
    }

    /// Reduced state on `keep` (sorted, duplicates dropped).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.num_qudits) {
            return Err(Error::Index {
                index: bad,
                len: self.num_qudits,
            });
        }
        let dim = guard(self.q, keep.len(), MAX_MARGINAL_DIM, "reduced state")?;
        let kept: Vec<bool> = (0..self.num_qudits).map(|i| keep.contains(&i)).collect();
        let q = self.q as usize;

        let mut groups: HashMap<usize, Vec<(usize, Complex64)>> = HashMap::new();
        for (idx, a) in self.nonzero() {
            let (mut k, mut env) = (0usize, 0usize);
            for (i, digit) in self.digits(idx).into_iter().enumerate() {
                if kept[i] {
                    k = k * q + digit as usize;
                } else {
                    env = env * q + digit as usize;
                }
            }
            groups.entry(env).or_default().push((k, a));
        }
        let mut entries: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for group in groups.values() {
            for &(i, a) in group {
                for &(j, b) in group {
                    *entries.entry((i, j)).or_default() += a * b.conj();
                }
            }
        }
        Ok(DensityMatrix {
            q: self.q,
            dim,
            entries,
        })
    }

    /// Entropy of the qudits in `set`, computed on whichever of the set and
    /// its complement is smaller (the global state is pure).
    pub fn subset_entropy(&self, set: &[usize]) -> Result<f64> {
        let n = self.num_qudits;
        let mask = subsets::from_indices(set);
        let side = if 2 * mask.count_ones() as usize > n {
            subsets::to_indices(subsets::complement(mask, n))
        } else {
            subsets::to_indices(mask)
        };
        self.partial_trace(&side)?.entropy()
    }

    /// Classifies the party set `x` (indices among the encoded qudits, which
    /// follow the `m` reference qudits).
    pub fn classify_by_entropy(&self, x: &[usize], m: usize) -> Result<EntropyVerdict> {
        let r: Vec<usize> = (0..m).collect();
        let w: Vec<usize> = x.iter().map(|&i| i + m).collect();
        let rw: Vec<usize> = r.iter().chain(&w).copied().collect();
        let s_r = self.subset_entropy(&r)?;
        let s_w = self.subset_entropy(&w)?;
        let s_rw = self.subset_entropy(&rw)?;
        let auth = (s_rw - s_w + s_r).abs();
        let unauth = (s_rw - s_w - s_r).abs();
        let status = match (auth < ENTROPY_TOL, unauth < ENTROPY_TOL) {
            (true, true) => {
                return Err(Error::Invariant(format!(
                    "both entropy conditions hold for {x:?} (S(R) = {s_r})"
                )))
            }
            (true, false) => SetStatus::Authorized,
            (false, true) => SetStatus::Unauthorized,
            (false, false) => SetStatus::Intermediate,
        };
        let residual = match status {
            SetStatus::Authorized => auth,
            SetStatus::Unauthorized => unauth,
            SetStatus::Intermediate => auth.min(unauth),
        };
        Ok(EntropyVerdict {
            status,
            s_r,
            s_w,
            s_rw,
            residual,
        })
    }

    /// Verdicts for every subset of parties, indexed by party bitmask; party
    /// `j` holds the encoded qudits `groups[j]`.
    pub fn classify_groups_by_entropy(&self, groups: &[Vec<usize>], m: usize) -> Result<Vec<EntropyVerdict>> {
        let parties = groups.len();
        if parties > crate::css::MAX_PARTIES {
            return Err(Error::Resource {
                what: format!("classifying all subsets of {parties} parties"),
                needed: 1u128 << parties,
                limit: 1u128 << crate::css::MAX_PARTIES,
            });
        }
        (0..1u64 << parties)
            .into_par_iter()
            .map(|pm| {
                let coords: Vec<usize> = subsets::to_indices(pm)
                    .into_iter()
                    .flat_map(|j| groups[j].iter().copied())
                    .collect();
                self.classify_by_entropy(&coords, m)
            })
            .collect()
    }

    /// Whether `S(W_L) >= m`, the entropy any significant set must carry.
    pub fn significant_set_check(&self, l: &[usize], m: usize) -> Result<bool> {
        let w: Vec<usize> = l.iter().map(|&i| i + m).collect();
        Ok(self.subset_entropy(&w)? >= m as f64 - ENTROPY_TOL)
    }
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries.get(&(i, j)).copied().unwrap_or_default()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (&(i, j), &v) in &self.entries {
            m[(i, j)] = v;
        }
        m
    }

    /// Wraps a dense matrix on qudits of dimension `q`.
    pub fn from_dense(q: u32, m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!("{}×{} matrix", m.nrows(), m.ncols())));
        }
        let mut entries = BTreeMap::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)].norm_sqr() > 0.0 {
                    entries.insert((i, j), m[(i, j)]);
                }
            }
        }
        Ok(DensityMatrix {
            q,
            dim: m.nrows(),
            entries,
        })
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.entries
            .iter()
            .all(|(&(i, j), v)| (v - self.get(j, i).conj()).norm() <= tol)
    }

    /// Eigenvalues, descending. The matrix is split into blocks along its
    /// nonzero pattern and each block is diagonalized on its own.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(NORM_TOL) {
            return Err(Error::Domain("density matrix is not Hermitian".into()));
        }
        let mut parent: HashMap<usize, usize> = HashMap::new();
        fn find(parent: &mut HashMap<usize, usize>, x: usize) -> usize {
            let p = *parent.entry(x).or_insert(x);
            if p == x {
                return x;
            }
            let root = find(parent, p);
            parent.insert(x, root);
            root
        }
        for (&(i, j), v) in &self.entries {
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let nodes: Vec<usize> = parent.keys().copied().collect();
        for x in nodes {
            let root = find(&mut parent, x);
            blocks.entry(root).or_default().push(x);
        }
        let mut eig = Vec::new();
        for mut idx in blocks.into_values() {
            idx.sort_unstable();
            let k = idx.len();
            let block = DMatrix::from_fn(k, k, |a, b| self.get(idx[a], idx[b]));
            eig.extend(block.symmetric_eigenvalues().iter().copied());
        }
        eig.sort_by(|a, b| b.total_cmp(a));
        if let Some(&low) = eig.last() {
            if low < -1e-10 {
                return Err(Error::Domain(format!("negative eigenvalue {low}")));
            }
        }
        Ok(eig)
    }

    /// `-Σ λ log_q λ` over eigenvalues above the cutoff.
    pub fn entropy(&self) -> Result<f64> {
        let s: f64 = self
            .spectrum()?
            .into_iter()
            .filter(|&l| l > EIGEN_CUTOFF)
            .map(|l| -l * l.ln())
            .sum();
        Ok((s / (self.q as f64).ln()).max(0.0))
    }
}

impl CosetState {
    pub fn new(offset: Vec<u32>, gen: FqMatrix) -> Result<Self> {
        if offset.len() != gen.cols() {
            return Err(Error::Dimension(format!(
                "offset of length {} for generator with {} columns",
                offset.len(),
                gen.cols()
            )));
        }
        let gen = gen.row_basis();
        Ok(CosetState { offset, gen })
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn gen(&self) -> &FqMatrix {
        &self.gen
    }

    /// The amplitudes: `q^(-k/2)` on each of the `q^k` coset elements.
    pub fn expand(&self) -> Result<DenseState> {
        let field = self.gen.field();
        let q = field.q();
        let n = self.n();
        let dim = guard(q, n, max_dim(), "dense state")?;
        let k = self.gen.rows();
        let count = guard(q, k, max_dim(), "coset enumeration")?;
        let amp = Complex64::new((count as f64).powf(-0.5), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let mut coeffs = vec![0u32; k];
        let mut v = self.offset.clone();
        for step in 0..count {
            let idx = v.iter().fold(0usize, |acc, &d| acc * q as usize + d as usize);
            amps[idx] = amp;
            if step + 1 == count {
                break;
            }
            // odometer increment, updating v by one row per carry
            let mut i = 0;
            loop {
                coeffs[i] += 1;
                let row = self.gen.row(i);
                for (x, &g) in v.iter_mut().zip(row) {
                    *x = field.add(*x, g);
                }
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
        DenseState::new(q, n, amps)
    }

    /// Entropy of the marginal on `a`: `rank G^(A) + rank G^(Ā) - rank G`.
    pub fn coset_entropy(&self, a: &[usize]) -> f64 {
        let n = self.n();
        let mask = subsets::from_indices(a) & subsets::full(n);
        let rest = subsets::complement(mask, n);
        let ra = self.gen.columns_by_mask(mask).rank();
        let rb = self.gen.columns_by_mask(rest).rank();
        (ra + rb - self.gen.rows()) as f64
    }
}

/// Generator `[[I_m, G_{C0/C1}], [0, G_C1]]` of the reference-entangled
/// encoding, reference qudits first.
pub fn reference_generator(code: &CssCode) -> Result<FqMatrix> {
    let pair = code.pair();
    let field = pair.c0().field();
    let m = code.k();
    let top = FqMatrix::identity(field, m).hstack(pair.quotient())?;
    let bottom = FqMatrix::zeros(field, pair.c1().k(), m).hstack(pair.c1().gen())?;
    top.vstack(&bottom)
}

/// `q^(-m/2) Σ_s |s⟩_R ⊗ Enc|s⟩` for a maximally mixed secret.
pub fn entangle_reference(code: &CssCode) -> Result<DenseState> {
    let g = reference_generator(code)?;
    CosetState::new(vec![0; g.cols()], g)?.expand()
}
