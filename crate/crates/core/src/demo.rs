//! A three-party classical communication-efficient secret sharing example
//! over F_5 with `t = 2` and `d = 3`.
//!
//! | party | layer 1            | layer 2     |
//! |-------|--------------------|-------------|
//! | 1     | s + r1 + r2        | r2 + r3     |
//! | 2     | s + 2r1 + 4r2      | r2 + 2r3    |
//! | 3     | s + 3r1 + 4r2      | r2 + 3r3    |
//!
//! Two parties send both layers (4 symbols); all three send layer 1 only
//! (3 symbols).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{solve_affine, FqMatrix};

pub const Q: u32 = 5;
/// Evaluation points of the three parties.
pub const POINTS: [u32; 3] = [1, 2, 3];
/// Symbols downloaded from two parties.
pub const CC_TWO: usize = 4;
/// Symbols downloaded from three parties.
pub const CC_THREE: usize = 3;

/// `(s, r1, r2, r3)` and the expected layers.
pub const GOLDEN: [([u32; 4], [u32; 3], [u32; 3]); 6] = [
    ([3, 1, 4, 2], [3, 1, 2], [1, 3, 0]),
    ([0, 1, 1, 1], [2, 1, 2], [2, 3, 4]),
    ([1, 0, 0, 0], [1, 1, 1], [0, 0, 0]),
    ([4, 4, 4, 4], [2, 3, 2], [3, 2, 1]),
    ([2, 3, 0, 1], [0, 3, 1], [1, 2, 3]),
    ([1, 2, 3, 4], [1, 2, 4], [2, 1, 0]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseShares {
    pub layer1: [u32; 3],
    pub layer2: [u32; 3],
}

/// The two accessed parties' four symbols after one recovery step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryStep {
    pub labels: [String; 4],
    pub values: [u32; 4],
    /// Which of the four cells this step rewrote.
    pub changed: [bool; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPartyRecovery {
    pub parties: [usize; 2],
    pub secret: u32,
    pub steps: Vec<RecoveryStep>,
}

/// Outcome of the exhaustive checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReport {
    pub golden_ok: bool,
    pub two_party_cases: usize,
    pub two_party_ok: bool,
    pub three_party_cases: usize,
    pub three_party_ok: bool,
    pub secrecy_ok: bool,
    pub cc_two: usize,
    pub cc_three: usize,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.golden_ok && self.two_party_ok && self.three_party_ok && self.secrecy_ok
    }
}

fn field() -> Field {
    Field::new(Q).expect("5 is prime")
}

pub fn demo_encode(s: u32, r1: u32, r2: u32, r3: u32) -> StaircaseShares {
    let f = field();
    let (s, r1, r2, r3) = (s % Q, r1 % Q, r2 % Q, r3 % Q);
    let l1 = POINTS.map(|x| f.add(f.add(s, f.mul(r1, x)), f.mul(r2, f.mul(x, x))));
    let l2 = POINTS.map(|x| f.add(r2, f.mul(r3, x)));
    StaircaseShares {
        layer1: l1,
        layer2: l2,
    }
}

fn term(coef: u32, var: &str) -> String {
    if coef == 1 {
        var.to_string()
    } else {
        format!("{coef}{var}")
    }
}

fn layer1_label(x: u32) -> String {
    let f = field();
    format!("s+{}+{}", term(x, "r1"), term(f.mul(x, x), "r2"))
}

fn layer2_label(x: u32) -> String {
    format!("r2+{}", term(x, "r3"))
}

/// Recovers `s` from both layers of parties `i` and `j` (0-based): decode
/// layer 2 for `r2`, cancel `r2` from layer 1, then solve for `s`.
pub fn demo_recover_two(i: usize, j: usize, a: (u32, u32), b: (u32, u32)) -> Result<TwoPartyRecovery> {
    if i == j || i > 2 || j > 2 {
        return Err(Error::Domain(format!("need two distinct parties among 0..3, got {i} and {j}")));
    }
    let f = field();
    let (xi, xj) = (POINTS[i], POINTS[j]);
    let dx = f.inv(f.sub(xi, xj))?;
    let mut steps = vec![RecoveryStep {
        labels: [layer1_label(xi), layer1_label(xj), layer2_label(xi), layer2_label(xj)],
        values: [a.0, b.0, a.1, b.1],
        changed: [false, false, true, true],
    }];

    let r3 = f.mul(f.sub(a.1, b.1), dx);
    let r2 = f.sub(a.1, f.mul(r3, xi));
    steps.push(RecoveryStep {
        labels: [layer1_label(xi), layer1_label(xj), "r2".into(), "r3".into()],
        values: [a.0, b.0, r2, r3],
        changed: [true, true, true, false],
    });

    let ui = f.sub(a.0, f.mul(r2, f.mul(xi, xi)));
    let uj = f.sub(b.0, f.mul(r2, f.mul(xj, xj)));
    steps.push(RecoveryStep {
        labels: [format!("s+{}", term(xi, "r1")), format!("s+{}", term(xj, "r1")), "r2".into(), "r3".into()],
        values: [ui, uj, r2, r3],
        changed: [true, true, false, false],
    });

    let r1 = f.mul(f.sub(ui, uj), dx);
    let s = f.sub(ui, f.mul(r1, xi));
    steps.push(RecoveryStep {
        labels: ["s".into(), "r1".into(), "r2".into(), "r3".into()],
        values: [s, r1, r2, r3],
        changed: [false, false, false, false],
    });
    Ok(TwoPartyRecovery {
        parties: [i, j],
        secret: s,
        steps,
    })
}

/// Recovers `(s, r1, r2)` from the three layer-1 symbols.
pub fn demo_recover_three(layer1: [u32; 3]) -> Result<[u32; 3]> {
    let f = field();
    let rows: Vec<Vec<u32>> = POINTS.iter().map(|&x| vec![1, x, f.mul(x, x)]).collect();
    let a = FqMatrix::from_rows(f, 3, &rows)?;
    let sol = solve_affine(&a, &layer1)?
        .ok_or_else(|| Error::Integrity("layer-1 symbols match no encoding".into()))?;
    if sol.kernel.rows() != 0 {
        return Err(Error::Invariant("layer-1 system is singular".into()));
    }
    Ok([sol.particular[0], sol.particular[1], sol.particular[2]])
}

/// For each party, how often each `(layer1, layer2)` pair occurs over all
/// randomness, per secret: `counts[party][s][layer1 * 5 + layer2]`.
pub fn single_party_counts() -> Vec<Vec<Vec<usize>>> {
    let mut counts = vec![vec![vec![0usize; 25]; Q as usize]; 3];
    for s in 0..Q {
        for (r1, r2, r3) in randomness() {
            let sh = demo_encode(s, r1, r2, r3);
            for (p, c) in counts.iter_mut().enumerate() {
                c[s as usize][(sh.layer1[p] * Q + sh.layer2[p]) as usize] += 1;
            }
        }
    }
    counts
}

/// Every single party sees the same distribution of its share for every
/// secret.
pub fn demo_secrecy_check() -> bool {
    single_party_counts()
        .iter()
        .all(|per_s| per_s.iter().all(|c| c == &per_s[0]))
}

fn randomness() -> impl Iterator<Item = (u32, u32, u32)> {
    (0..Q).flat_map(|a| (0..Q).flat_map(move |b| (0..Q).map(move |c| (a, b, c))))
}

/// Golden tuples, both recovery paths on all `5^4` tuples, and secrecy.
pub fn demo_verify() -> DemoReport {
    let golden_ok = GOLDEN.iter().all(|&(t, l1, l2)| {
        let sh = demo_encode(t[0], t[1], t[2], t[3]);
        sh.layer1 == l1 && sh.layer2 == l2
    });
    let tuples: Vec<[u32; 4]> = (0..Q)
        .flat_map(|s| randomness().map(move |(a, b, c)| [s, a, b, c]))
        .collect();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let two_party_ok = tuples.par_iter().all(|t| {
        let sh = demo_encode(t[0], t[1], t[2], t[3]);
        pairs.iter().all(|&(i, j)| {
            demo_recover_two(i, j, (sh.layer1[i], sh.layer2[i]), (sh.layer1[j], sh.layer2[j]))
                .map(|r| r.secret == t[0])
                .unwrap_or(false)
        })
    });
    let three_party_ok = tuples.par_iter().all(|t| {
        let sh = demo_encode(t[0], t[1], t[2], t[3]);
        demo_recover_three(sh.layer1).map(|r| r[0] == t[0]).unwrap_or(false)
    });
    DemoReport {
        golden_ok,
        two_party_cases: tuples.len() * pairs.len(),
        two_party_ok,
        three_party_cases: tuples.len(),
        three_party_ok,
        secrecy_ok: demo_secrecy_check(),
        cc_two: 2 * 2,
        cc_three: 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_shares() {
        assert_eq!(
            demo_encode(0, 0, 0, 0),
            StaircaseShares {
                layer1: [0; 3],
                layer2: [0; 3]
            }
        );
        for (t, l1, l2) in GOLDEN {
            let sh = demo_encode(t[0], t[1], t[2], t[3]);
            assert_eq!((sh.layer1, sh.layer2), (l1, l2), "{t:?}");
        }
    }

    #[test]
    fn step_tables() {
        let sh = demo_encode(3, 1, 4, 2);
        let rec = demo_recover_two(0, 1, (sh.layer1[0], sh.layer2[0]), (sh.layer1[1], sh.layer2[1])).unwrap();
        assert_eq!(rec.secret, 3);
        let labels: Vec<_> = rec.steps.iter().map(|s| s.labels.clone()).collect();
        assert_eq!(labels[0], ["s+r1+r2", "s+2r1+4r2", "r2+r3", "r2+2r3"]);
        assert_eq!(labels[1], ["s+r1+r2", "s+2r1+4r2", "r2", "r3"]);
        assert_eq!(labels[2], ["s+r1", "s+2r1", "r2", "r3"]);
        assert_eq!(labels[3], ["s", "r1", "r2", "r3"]);
        assert_eq!(rec.steps[1].values, [3, 1, 4, 2]);
        assert_eq!(rec.steps[2].values, [4, 0, 4, 2]);
        assert_eq!(rec.steps[3].values, [3, 1, 4, 2]);
        assert_eq!(layer1_label(3), "s+3r1+4r2");
    }

    #[test]
    fn three_party_recovery() {
        for s in 0..Q {
            for (a, b, c) in randomness() {
                let sh = demo_encode(s, a, b, c);
                assert_eq!(demo_recover_three(sh.layer1).unwrap(), [s, a, b]);
            }
        }
        assert_eq!(demo_recover_three([0; 3]).unwrap(), [0; 3]);
    }

    #[test]
    fn single_parties_learn_nothing() {
        let counts = single_party_counts();
        for per_s in &counts {
            for c in per_s {
                assert!(c.iter().all(|&k| k == 5));
            }
        }
        assert!(demo_secrecy_check());
    }

    #[test]
    fn two_parties_see_the_secret() {
        // the pair (0, 1) determines s, so its view differs between secrets
        let mut views = vec![std::collections::BTreeSet::new(); Q as usize];
        for s in 0..Q {
            for (a, b, c) in randomness() {
                let sh = demo_encode(s, a, b, c);
                views[s as usize].insert((sh.layer1[0], sh.layer2[0], sh.layer1[1], sh.layer2[1]));
            }
        }
        assert!(views[0].is_disjoint(&views[1]));
    }

    #[test]
    fn full_verification() {
        let r = demo_verify();
        assert!(r.passed());
        assert_eq!((r.two_party_cases, r.three_party_cases), (1875, 625));
        assert_eq!((r.cc_two, r.cc_three), (CC_TWO, CC_THREE));
    }
}
