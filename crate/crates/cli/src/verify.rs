//! Verification suites over a resolved descriptor.

use ceqss_core::ceqss::{bounds_report, check_conditions, inner_ecss, BoundsReport, CeQssScheme, ConditionCheck};
use ceqss_core::css::{LawViolation, SetStatus, MAX_PARTIES};
use ceqss_core::ecss::ExtensionSplit;
use ceqss_core::qsim::entangle_reference;
use ceqss_core::subsets;
use ceqss_core::{Condition, Error, LinearCode};
use serde::Serialize;

use crate::descriptor::Resolved;
use crate::failure::Failure;

#[derive(Debug, Clone, Copy, Default)]
pub struct Suites {
    pub access: bool,
    pub simulate: bool,
    pub tau: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Costs {
    pub m: usize,
    pub w: usize,
    pub cc_t: usize,
    pub cc_d: usize,
}

/// A failed check and the party set (1-based) that shows it.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub parties: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AccessSummary {
    pub parties: usize,
    pub authorized: usize,
    pub unauthorized: usize,
    pub intermediate: usize,
    pub t_min: usize,
    pub z_max: usize,
    pub authorized_sets: Vec<Vec<usize>>,
    pub unauthorized_sets: Vec<Vec<usize>>,
    pub intermediate_sets: Vec<Vec<usize>>,
    pub law_violations: Vec<LawViolation>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub qudits: usize,
    pub sets: usize,
    pub mismatches: usize,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitCheck {
    /// Accessible extension rows, 1-based.
    pub accessible: Vec<usize>,
    pub tau: usize,
    pub oracle: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauSummary {
    pub tau_full: usize,
    pub tau_none: usize,
    pub splits: Vec<SplitCheck>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub descriptor_hash: String,
    pub passed: bool,
    pub conditions: Vec<ConditionCheck>,
    pub costs: Option<Costs>,
    pub bounds: Option<BoundsReport>,
    pub access: Option<AccessSummary>,
    pub simulation: Option<SimulationSummary>,
    pub tau: Option<TauSummary>,
    pub counterexample: Option<Counterexample>,
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn guard_parties(n: usize) -> Result<(), Error> {
    if n > MAX_PARTIES {
        return Err(Error::Resource {
            what: format!("classifying all subsets of {n} parties"),
            needed: 1u128 << n,
            limit: 1u128 << MAX_PARTIES,
        });
    }
    Ok(())
}

pub fn costs(scheme: &CeQssScheme) -> Costs {
    let p = scheme.params();
    Costs {
        m: p.m,
        w: p.w,
        cc_t: p.cc_t,
        cc_d: p.cc_d,
    }
}

pub fn run(r: &Resolved, suites: Suites) -> Result<VerificationReport, Failure> {
    let report = check_conditions(&r.codes, r.t, r.d, r.z)?;
    let mut out = VerificationReport {
        descriptor_hash: r.hash.clone(),
        passed: report.all_hold(),
        conditions: report.checks.clone(),
        costs: None,
        bounds: None,
        access: None,
        simulation: None,
        tau: None,
        counterexample: None,
    };
    if !out.passed {
        out.counterexample = threshold_witness(r, &report.checks)?;
        return Ok(out);
    }
    let scheme = CeQssScheme::build(&r.codes, r.t, r.d, r.z)?;
    let bounds = bounds_report(scheme.params());
    out.passed &= bounds.storage.satisfied && bounds.cc_t.satisfied && bounds.cc_d.satisfied;
    out.costs = Some(costs(&scheme));
    out.bounds = Some(bounds);

    if suites.access || suites.simulate {
        guard_parties(scheme.n())?;
    }
    let css = if suites.access || suites.simulate {
        Some(scheme.as_css()?)
    } else {
        None
    };
    let groups = scheme.layout().groups();
    let first = |c: Option<Counterexample>, out: &mut VerificationReport| {
        if out.counterexample.is_none() {
            out.counterexample = c;
        }
    };

    if suites.access {
        let (summary, c) = access(r, &scheme, css.as_ref().unwrap(), &groups)?;
        out.passed &= summary.passed;
        out.access = Some(summary);
        first(c, &mut out);
    }
    if suites.simulate {
        let (summary, c) = simulate(css.as_ref().unwrap(), &groups)?;
        out.passed &= summary.passed;
        out.simulation = Some(summary);
        first(c, &mut out);
    }
    if suites.tau {
        let (summary, c) = tau(r)?;
        out.passed &= summary.passed;
        out.tau = Some(summary);
        first(c, &mut out);
    }
    Ok(out)
}

fn access(
    r: &Resolved,
    scheme: &CeQssScheme,
    css: &ceqss_core::css::CssCode,
    groups: &[Vec<usize>],
) -> Result<(AccessSummary, Option<Counterexample>), Failure> {
    let n = scheme.n();
    let rep = css.classify_groups(groups)?;
    let mut counter = None;
    let mut note = |check: &str, mask: u64, detail: String| {
        if counter.is_none() {
            counter = Some(Counterexample {
                check: check.into(),
                parties: one_based(&subsets::to_indices(mask)),
                detail,
            });
        }
    };
    let (mut auth, mut unauth, mut inter) = (0, 0, 0);
    let mut intermediate_sets = Vec::new();
    for mask in subsets::by_size(n) {
        let size = mask.count_ones() as usize;
        let status = rep.status_mask(mask);
        match status {
            SetStatus::Authorized => auth += 1,
            SetStatus::Unauthorized => unauth += 1,
            SetStatus::Intermediate => {
                inter += 1;
                intermediate_sets.push(one_based(&subsets::to_indices(mask)));
            }
        }
        if size >= r.t && status != SetStatus::Authorized {
            note("t_access", mask, format!("{size} parties are {status:?}"));
        }
        if size <= r.z && status != SetStatus::Unauthorized {
            note("z_secrecy", mask, format!("{size} parties are {status:?}"));
        }
    }
    // d parties recover from layer 1 alone.
    let inner = inner_ecss(&r.codes)?;
    for mask in subsets::of_size(n, r.d) {
        if !inner.big().is_authorized(&subsets::to_indices(mask)) {
            note("d_access", mask, "layer 1 does not determine the secret".into());
        }
    }
    let laws = rep.structural_violations();
    if let Some(v) = laws.first() {
        let mask = v.sets.first().map_or(0, |s| subsets::from_indices(s));
        note(&v.law, mask, "structural law broken".into());
    }
    let summary = AccessSummary {
        parties: n,
        authorized: auth,
        unauthorized: unauth,
        intermediate: inter,
        t_min: rep.t_min,
        z_max: rep.z_max,
        authorized_sets: rep.gamma.iter().map(|s| one_based(s)).collect(),
        unauthorized_sets: rep.adversary.iter().map(|s| one_based(s)).collect(),
        intermediate_sets,
        law_violations: laws,
        passed: counter.is_none(),
    };
    Ok((summary, counter))
}

fn simulate(
    css: &ceqss_core::css::CssCode,
    groups: &[Vec<usize>],
) -> Result<(SimulationSummary, Option<Counterexample>), Failure> {
    let rank = css.classify_groups(groups)?;
    let state = entangle_reference(css)?;
    let verdicts = state.classify_groups_by_entropy(groups, css.k())?;
    let mut counter = None;
    let mut mismatches = 0;
    let mut max_residual = 0f64;
    for (mask, v) in verdicts.iter().enumerate() {
        let want = rank.status_mask(mask as u64);
        if v.status != SetStatus::Intermediate {
            max_residual = max_residual.max(v.residual);
        }
        if v.status != want {
            mismatches += 1;
            if counter.is_none() {
                counter = Some(Counterexample {
                    check: "entropy_vs_rank".into(),
                    parties: one_based(&subsets::to_indices(mask as u64)),
                    detail: format!("entropy says {:?}, ranks say {want:?}", v.status),
                });
            }
        }
    }
    let summary = SimulationSummary {
        qudits: state.num_qudits(),
        sets: verdicts.len(),
        mismatches,
        max_residual,
        passed: mismatches == 0,
    };
    Ok((summary, counter))
}

fn tau(r: &Resolved) -> Result<(TauSummary, Option<Counterexample>), Failure> {
    let x = inner_ecss(&r.codes)?;
    let e = x.e();
    let masks: Vec<u64> = if e <= 8 {
        (0..1u64 << e).collect()
    } else {
        (0..=e).map(subsets::full).collect()
    };
    let mut counter = None;
    let mut splits = Vec::with_capacity(masks.len());
    for mask in masks {
        let split = ExtensionSplit::new(e, &subsets::to_indices(mask))?;
        let tau = x.tau(&split)?;
        let oracle = x.tau_oracle(&split)?;
        if tau != oracle && counter.is_none() {
            counter = Some(Counterexample {
                check: "tau_oracle".into(),
                parties: Vec::new(),
                detail: format!(
                    "accessible rows {:?}: formula {tau}, oracle {oracle}",
                    one_based(split.accessible())
                ),
            });
        }
        splits.push(SplitCheck {
            accessible: one_based(split.accessible()),
            tau,
            oracle,
        });
    }
    let (tau_full, tau_none) = (x.tau_full()?, x.tau_none()?);
    if counter.is_none() && (tau_full > r.t || tau_none > r.d) {
        counter = Some(Counterexample {
            check: "tau_thresholds".into(),
            parties: Vec::new(),
            detail: format!("tau_full {tau_full} vs t {}, tau_none {tau_none} vs d {}", r.t, r.d),
        });
    }
    let summary = TauSummary {
        tau_full,
        tau_none,
        splits,
        passed: counter.is_none(),
    };
    Ok((summary, counter))
}

/// For a failed `t` or `d` threshold, the first party set of that size the
/// rank test rejects.
fn threshold_witness(r: &Resolved, checks: &[ConditionCheck]) -> Result<Option<Counterexample>, Failure> {
    let failed = |c: Condition| checks.iter().any(|x| x.condition == c && !x.holds);
    let n = r.codes.b0.cols();
    if n > MAX_PARTIES {
        return Ok(None);
    }
    let Ok(inner) = inner_ecss(&r.codes) else {
        return Ok(None);
    };
    let e = inner.e();
    let witness = |check: &str, mask: u64, detail: &str| Counterexample {
        check: check.into(),
        parties: one_based(&subsets::to_indices(mask)),
        detail: detail.into(),
    };
    if failed(Condition::TThreshold) {
        let layer2 = LinearCode::spanned_by(&r.codes.a2.vstack(&r.codes.b1)?);
        let b1 = LinearCode::spanned_by(&r.codes.b1);
        let k2 = layer2.k() - b1.k();
        for mask in subsets::of_size(n, r.t) {
            let j = subsets::to_indices(mask);
            let mut with_ext = j.clone();
            with_ext.extend(n..n + e);
            if !inner.big().is_authorized(&with_ext) {
                return Ok(Some(witness("t_threshold", mask, "layer 1 fails with layer 2 decoded")));
            }
            let rank = |c: &LinearCode| c.gen().column_submatrix(&j).map(|m| m.rank());
            if rank(&layer2)? - rank(&b1)? < k2 {
                return Ok(Some(witness("t_threshold", mask, "layer 2 cannot be decoded")));
            }
        }
    }
    if failed(Condition::DThreshold) {
        for mask in subsets::of_size(n, r.d) {
            if !inner.big().is_authorized(&subsets::to_indices(mask)) {
                return Ok(Some(witness("d_threshold", mask, "layer 1 alone fails")));
            }
        }
    }
    Ok(None)
}
