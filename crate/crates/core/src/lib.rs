//! Communication-efficient quantum secret sharing (CE-QSS) from extended CSS
//! codes.
//!
//! The crate is layered bottom-up:
//!
//! - [`gf`], [`linalg`]: prime-field arithmetic and dense matrices over F_q.
//! - [`codes`]: linear codes, nested pairs, duals, punctured and shortened
//!   codes, minimum distances.
//! - [`grs`]: the stacked Vandermonde generator used by the optimal construction.
//! - [`css`]: CSS codes viewed as secret sharing schemes and their access
//!   structures (rank test).
//! - [`ecss`]: extended CSS codes and the recovery thresholds with partial
//!   access to extension qudits.
//! - [`ceqss`]: the two-layer staircase scheme, its classical encoder and
//!   erasure recovery, costs and optimality bounds.
//! - [`qsim`]: dense qudit simulation and entropy-based access checks.
//! - [`demo`]: the three-party F_5 staircase example.

pub mod ceqss;
pub mod codes;
pub mod css;
pub mod demo;
pub mod ecss;
pub mod error;
pub mod gf;
pub mod grs;
pub mod linalg;
pub mod qsim;
pub mod subsets;

pub use codes::{LinearCode, NestedPair, WeightMethod};
pub use error::{Condition, Error, Result};
pub use gf::{Fe, Field};
pub use linalg::FqMatrix;
