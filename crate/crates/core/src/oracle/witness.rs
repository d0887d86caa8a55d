//! Search for profiles in which an intermediary strictly prefers full
//! diffusion over withholding some neighbors.
//!
//! The search walks the given market first and then variants in which one
//! buyer is re-homed under the intermediary at zero cost, since a witness may
//! need a different neighbor structure. For each market it tries the truthful
//! profile, then profiles where a downstream buyer bids high enough to win,
//! combined with each direct buyer of the intermediary sweeping its bid grid.

use std::collections::BTreeSet;

use crate::allocation::welfare_table;
use crate::error::Result;
use crate::market::{build_market, AgentId, AgentRecord, Market, ReportProfile};
use crate::mechanisms::Mechanism;
use crate::scalar::Scalar;

use super::deviation::{bid_breakpoints, subsets_of};
use super::{Counterexample, Status, VerificationReport, Violation};

/// A profile where declaring every neighbor strictly beats declaring `subset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S = f64> {
    pub agent: AgentId,
    /// The buyer moved under `agent`, when the given market had no witness.
    pub rehomed: Option<AgentId>,
    pub market: Market<S>,
    pub profile: ReportProfile<S>,
    pub subset: BTreeSet<AgentId>,
    pub full_utility: S,
    pub subset_utility: S,
}

/// Intermediaries on some buyer's cheapest truthful path.
pub fn eligible_positions<S: Scalar>(m: &Market<S>) -> BTreeSet<AgentId> {
    welfare_table(m, &m.truthful_profile())
        .path
        .values()
        .flat_map(|t| t.agents().iter().filter(|a| m.is_intermediary(a)).cloned())
        .collect()
}

/// `m` with buyer `z` detached from its owners and attached to `i` at cost 0.
fn rehome<S: Scalar>(m: &Market<S>, z: &AgentId, i: &AgentId) -> Result<Market<S>> {
    let records = m.records().into_iter().map(|mut r| {
        r.true_neighbors.remove(z);
        if &r.id == i {
            r.true_neighbors.insert(z.clone());
        }
        r
    });
    let costs = m
        .cost_entries()
        .filter(|(a, b, _)| *a != z && *b != z)
        .map(|(a, b, w)| (a.clone(), b.clone(), w))
        .chain(std::iter::once((i.clone(), z.clone(), S::zero())))
        .collect::<Vec<_>>();
    build_market(
        records.collect::<Vec<AgentRecord<S>>>(),
        m.seller_neighbors().clone(),
        costs,
        m.item_count(),
    )
}

/// Buyers whose cheapest truthful path passes through `i`.
fn downstream<S: Scalar>(m: &Market<S>, i: &AgentId) -> Vec<AgentId> {
    welfare_table(m, &m.truthful_profile())
        .path
        .into_iter()
        .filter(|(_, t)| t.agents().contains(i))
        .map(|(j, _)| j)
        .collect()
}

fn candidate_profiles<S: Scalar>(m: &Market<S>, i: &AgentId) -> Vec<ReportProfile<S>> {
    let truthful = m.truthful_profile();
    let values: S = m.agents().filter_map(|r| r.true_value).sum();
    let costs: S = m.cost_entries().map(|(_, _, w)| w).sum();
    let high = S::one() + S::lit(2) * (values + costs);
    let eps = S::from_f64(1e-3).unwrap_or_else(S::zero);
    let direct: Vec<AgentId> = m
        .true_neighbors(i)
        .into_iter()
        .flatten()
        .filter(|n| m.is_buyer(n))
        .cloned()
        .collect();

    let mut out = vec![truthful.clone()];
    for y in downstream(m, i) {
        let lifted = truthful.with_bid(&y, high);
        out.push(lifted.clone());
        for x in direct.iter().filter(|x| **x != y) {
            for b in bid_breakpoints(m, &lifted, x, eps) {
                out.push(lifted.with_bid(x, b));
            }
        }
    }
    out
}

fn witness_in<S: Scalar>(
    m: &Market<S>,
    i: &AgentId,
    mech: Mechanism,
    max_degree: usize,
) -> Option<(ReportProfile<S>, BTreeSet<AgentId>, S, S)> {
    let tol = S::tolerance();
    let full = m.true_neighbors(i)?;
    let (family, _) = subsets_of(full, max_degree);
    for q in candidate_profiles(m, i) {
        let u_full = mech.utility(m, &q, i);
        if u_full <= tol {
            continue;
        }
        for s in family.iter().filter(|s| s.len() < full.len()) {
            let u = mech.utility(m, &q.with_declared(i, s.clone()), i);
            if u >= -tol && u_full > u + tol {
                return Some((q, s.clone(), u_full, u));
            }
        }
    }
    None
}

/// Looks for a non-degeneracy witness for intermediary `i`, first in `m` and
/// then in re-homed variants of `m`.
pub fn find_witness<S: Scalar>(
    m: &Market<S>,
    i: &AgentId,
    mech: Mechanism,
    max_degree: usize,
) -> Option<Witness<S>> {
    if !m.is_intermediary(i) {
        return None;
    }
    let wrap = |market: Market<S>,
                rehomed: Option<AgentId>,
                found: (ReportProfile<S>, BTreeSet<AgentId>, S, S)| Witness {
        agent: i.clone(),
        rehomed,
        market,
        profile: found.0,
        subset: found.1,
        full_utility: found.2,
        subset_utility: found.3,
    };
    if let Some(found) = witness_in(m, i, mech, max_degree) {
        return Some(wrap(m.clone(), None, found));
    }
    let owned = m.true_neighbors(i)?;
    for z in m.buyers() {
        if owned.contains(z) || m.seller_neighbors().contains(z) {
            continue;
        }
        let Ok(variant) = rehome(m, z, i) else {
            continue;
        };
        if let Some(found) = witness_in(&variant, i, mech, max_degree) {
            return Some(wrap(variant, Some(z.clone()), found));
        }
    }
    None
}

fn fmt_set(set: &BTreeSet<AgentId>) -> String {
    let items: Vec<&str> = set.iter().map(AgentId::as_str).collect();
    format!("{{{}}}", items.join(","))
}

/// Every eligible intermediary of `m` has a witness under `mech`.
pub fn check_non_degenerate<S: Scalar>(
    m: &Market<S>,
    mech: Mechanism,
    max_degree: usize,
) -> VerificationReport {
    let mut report = VerificationReport::new("nondegenerate", Some(mech));
    for i in eligible_positions(m) {
        report.trials += 1;
        match find_witness(m, &i, mech, max_degree) {
            Some(w) => {
                let moved = w
                    .rehomed
                    .as_ref()
                    .map(|z| format!(" with {z} moved under {i}"))
                    .unwrap_or_default();
                report.notes.push(format!(
                    "{i}: full {} > {} declaring {}{moved}",
                    w.full_utility,
                    w.subset_utility,
                    fmt_set(&w.subset)
                ));
            }
            None => {
                let v = Violation::NoWitness { agent: i.clone() };
                let cx = Counterexample::new(m, &m.truthful_profile(), Some(mech), v, S::zero());
                report.violate(Status::Fail, cx);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;
    use crate::market::ids;
    use crate::oracle::DEFAULT_MAX_DEGREE;

    #[test]
    fn eligible_positions_on_fig1() {
        assert_eq!(eligible_positions(&fig1()), ids(["A", "B", "C", "D", "E"]));
    }

    #[test]
    fn b_under_cna_is_witnessed_in_the_truthful_market() {
        let m = fig1();
        let w = find_witness(&m, &"B".into(), Mechanism::Cna, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(w.rehomed, None);
        assert_eq!(w.profile, m.truthful_profile());
        assert_eq!(w.full_utility, 3.0);
        assert_eq!(w.subset_utility, 0.0);
    }

    #[test]
    fn e_under_vcg_drops_e2() {
        let m = fig1();
        let p = m.truthful_profile();
        let e = AgentId::from("E");
        assert_eq!(Mechanism::Vcg.utility(&m, &p, &e), 1.0);
        let dropped = p.with_declared(&e, ids(["e1"]));
        assert_eq!(Mechanism::Vcg.utility(&m, &dropped, &e), 0.0);
        assert!(find_witness(&m, &e, Mechanism::Vcg, DEFAULT_MAX_DEGREE).is_some());
    }

    #[test]
    fn c_needs_a_rehomed_buyer_under_cna() {
        let m = fig1();
        let w = find_witness(&m, &"C".into(), Mechanism::Cna, DEFAULT_MAX_DEGREE).unwrap();
        assert!(w.rehomed.is_some());
        assert!(w.market.is_tree());
    }

    #[test]
    fn studied_mechanisms_pass_and_constant_fails() {
        let m = fig1();
        for mech in [Mechanism::Cna, Mechanism::Vcg] {
            let r = check_non_degenerate(&m, mech, DEFAULT_MAX_DEGREE);
            assert!(r.passed(), "{mech}: {:?}", r.counterexample);
            assert_eq!(r.notes.len(), 5);
        }
        let r = check_non_degenerate(&m, Mechanism::ConstantReward, DEFAULT_MAX_DEGREE);
        assert!(r.failed());
        assert!(r.counterexample.unwrap().replay::<f64>().unwrap());
    }
}
