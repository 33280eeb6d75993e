//! Rendering for the `demo` subcommand.

use ceqss_core::demo::{
    demo_encode, demo_recover_three, demo_recover_two, demo_verify, DemoReport, StaircaseShares,
    TwoPartyRecovery, GOLDEN, Q,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write;

#[derive(Debug, Clone, Serialize)]
pub struct DemoRun {
    pub seed: u64,
    /// `(s, r1, r2, r3)`.
    pub message: [u32; 4],
    pub shares: StaircaseShares,
    pub two_party: Vec<TwoPartyRecovery>,
    pub three_party: [u32; 3],
    pub golden: Vec<GoldenRow>,
    pub report: DemoReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenRow {
    pub message: [u32; 4],
    pub layer1: [u32; 3],
    pub layer2: [u32; 3],
    pub matches: bool,
}

pub fn run(seed: u64) -> ceqss_core::Result<DemoRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let message = [0; 4].map(|_| rng.gen_range(0..Q));
    let shares = demo_encode(message[0], message[1], message[2], message[3]);
    let two_party = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| {
            demo_recover_two(
                i,
                j,
                (shares.layer1[i], shares.layer2[i]),
                (shares.layer1[j], shares.layer2[j]),
            )
        })
        .collect::<ceqss_core::Result<Vec<_>>>()?;
    let three_party = demo_recover_three(shares.layer1)?;
    let golden = GOLDEN
        .iter()
        .map(|&(m, l1, l2)| {
            let sh = demo_encode(m[0], m[1], m[2], m[3]);
            GoldenRow {
                message: m,
                layer1: sh.layer1,
                layer2: sh.layer2,
                matches: sh.layer1 == l1 && sh.layer2 == l2,
            }
        })
        .collect();
    Ok(DemoRun {
        seed,
        message,
        shares,
        two_party,
        three_party,
        golden,
        report: demo_verify(),
    })
}

fn cell(label: &str, value: u32, changed: bool) -> String {
    let mark = if changed { "*" } else { " " };
    format!("{:>16} = {value}{mark}", label)
}

pub fn render(d: &DemoRun) -> String {
    let mut s = String::new();
    let [m0, m1, m2, m3] = d.message;
    writeln!(s, "staircase sharing over F_{Q}, t = 2, d = 3, seed {}", d.seed).unwrap();
    writeln!(s, "message: s = {m0}, r1 = {m1}, r2 = {m2}, r3 = {m3}").unwrap();
    writeln!(s).unwrap();
    writeln!(s, "party | layer 1 | layer 2").unwrap();
    for p in 0..3 {
        writeln!(s, "{:>5} | {:>7} | {:>7}", p + 1, d.shares.layer1[p], d.shares.layer2[p]).unwrap();
    }
    for rec in &d.two_party {
        let [i, j] = rec.parties;
        writeln!(s).unwrap();
        writeln!(s, "parties {} and {} (4 symbols)", i + 1, j + 1).unwrap();
        for (n, step) in rec.steps.iter().enumerate() {
            let cells: Vec<String> = (0..4)
                .map(|c| cell(&step.labels[c], step.values[c], step.changed[c]))
                .collect();
            writeln!(s, "step {n}: {}", cells.join(" |")).unwrap();
        }
        writeln!(s, "secret: {}", rec.secret).unwrap();
    }
    let [x, y, z] = d.three_party;
    writeln!(s).unwrap();
    writeln!(s, "parties 1, 2 and 3 (3 symbols, layer 1 only): s = {x}, r1 = {y}, r2 = {z}").unwrap();
    writeln!(s).unwrap();
    writeln!(s, "golden shares (s, r1, r2, r3) -> layer 1 | layer 2").unwrap();
    for g in &d.golden {
        writeln!(
            s,
            "{:?} -> {:?} | {:?} {}",
            g.message,
            g.layer1,
            g.layer2,
            if g.matches { "ok" } else { "MISMATCH" }
        )
        .unwrap();
    }
    let r = &d.report;
    writeln!(s).unwrap();
    writeln!(s, "two-party recoveries: {} ({})", r.two_party_cases, verdict(r.two_party_ok)).unwrap();
    writeln!(s, "three-party recoveries: {} ({})", r.three_party_cases, verdict(r.three_party_ok)).unwrap();
    writeln!(s, "single-party secrecy: {}", verdict(r.secrecy_ok)).unwrap();
    writeln!(s, "download cost: 2 parties {}, 3 parties {}", r.cc_two, r.cc_three).unwrap();
    writeln!(s, "{}", if r.passed() { "PASS" } else { "FAIL" }).unwrap();
    s
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "failed"
    }
}
