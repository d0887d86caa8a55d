//! Property checks over finite deviation spaces.
//!
//! Each check pairs a scan with a per-case evaluator; the evaluators are what
//! [`replay`] runs, so a recorded counterexample is re-judged by exactly the
//! code that produced it.

use std::collections::BTreeSet;

use crate::allocation::{efficient_allocation, welfare_table, Transaction};
use crate::error::{Error, Result};
use crate::format::ReportDoc;
use crate::market::{AgentId, AgentKind, Market, Report, ReportProfile};
use crate::mechanisms::{Mechanism, MechanismOutcome};
use crate::scalar::Scalar;

use super::deviation::{opponent_profiles, DeviationSpace, OpponentMode};
use super::witness::find_witness;
use super::{Counterexample, Status, VerificationReport, Violation, DEFAULT_MAX_DEGREE};

/// Bisection stops once the bracket is this narrow.
pub const DEFAULT_RESOLUTION: f64 = 1e-6;

pub(crate) fn true_report<S: Scalar>(m: &Market<S>, k: &AgentId) -> Option<Report<S>> {
    let r = m.agent(k)?;
    Some(match r.kind {
        AgentKind::Buyer => Report::Bid(r.true_value.unwrap_or_else(S::zero)),
        AgentKind::Intermediary => Report::Neighbors(r.true_neighbors.clone()),
    })
}

/// `q` with agent `k` reporting truthfully.
fn truthful_for<S: Scalar>(m: &Market<S>, q: &ReportProfile<S>, k: &AgentId) -> ReportProfile<S> {
    match true_report(m, k) {
        Some(r) => q.with_report(k, r),
        None => q.clone(),
    }
}

// Properties proved only for tree markets are recorded, not asserted, on
// general graphs.
fn tree_only_status<S: Scalar>(m: &Market<S>) -> Status {
    if m.is_tree() {
        Status::Fail
    } else {
        Status::Inconclusive
    }
}

fn ic_status<S: Scalar>(m: &Market<S>, mech: Mechanism) -> Status {
    match mech {
        Mechanism::Cna => tree_only_status(m),
        _ => Status::Fail,
    }
}

fn note_general_graph<S: Scalar>(report: &mut VerificationReport, m: &Market<S>) {
    if report.status == Status::Inconclusive && !m.is_tree() {
        report
            .notes
            .push("violation on a non-tree market recorded as inconclusive".to_owned());
    }
}

fn ids_vec(set: &BTreeSet<AgentId>) -> Vec<AgentId> {
    set.iter().cloned().collect()
}

fn require_mech(mech: Option<Mechanism>) -> Result<Mechanism> {
    mech.ok_or_else(|| Error::InvalidConfig("counterexample names no mechanism".to_owned()))
}

// ---- per-case evaluators -------------------------------------------------

/// Utility gained by `k` switching from its true report to `dev`.
fn deviation_gain<S: Scalar>(
    m: &Market<S>,
    base: &ReportProfile<S>,
    mech: Mechanism,
    k: &AgentId,
    dev: &Report<S>,
) -> S {
    let truthful = mech.utility(m, base, k);
    let deviating = mech.utility(m, &base.with_report(k, dev.clone()), k);
    deviating - truthful
}

fn wins_at<S: Scalar>(
    m: &Market<S>,
    q: &ReportProfile<S>,
    mech: Mechanism,
    j: &AgentId,
    bid: S,
) -> bool {
    mech.wins(m, &q.with_bid(j, bid), j)
}

fn bid_ceiling<S: Scalar>(m: &Market<S>, q: &ReportProfile<S>) -> S {
    let bids: S = m
        .agents()
        .filter_map(|r| q.bid(&r.id))
        .map(|b| b.abs())
        .sum();
    let costs: S = m.cost_entries().map(|(_, _, w)| w).sum();
    (S::one() + bids + costs) * S::lit(2)
}

/// Smallest bid at which `j` wins given the others' reports in `q`, located by
/// bisection to within `resolution`. `None` when no bid wins.
pub fn critical_bid<S: Scalar>(
    m: &Market<S>,
    mech: Mechanism,
    q: &ReportProfile<S>,
    j: &AgentId,
    resolution: S,
) -> Option<S> {
    if wins_at(m, q, mech, j, S::zero()) {
        return Some(S::zero());
    }
    let mut hi = bid_ceiling(m, q);
    if !wins_at(m, q, mech, j, hi) {
        return None;
    }
    let mut lo = S::zero();
    for _ in 0..200 {
        if hi - lo <= resolution {
            break;
        }
        let mid = (lo + hi).half();
        if !(mid > lo && mid < hi) {
            break;
        }
        if wins_at(m, q, mech, j, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `(critical bid, payment)` for a buyer who wins at `bid`.
fn critical_pair<S: Scalar>(
    m: &Market<S>,
    q: &ReportProfile<S>,
    mech: Mechanism,
    j: &AgentId,
    bid: S,
    resolution: S,
) -> (S, S) {
    let at = q.with_bid(j, bid);
    let critical = critical_bid(m, mech, q, j, resolution).unwrap_or_else(|| bid_ceiling(m, q));
    (critical, mech.payment(m, &at, j))
}

fn declared_payment<S: Scalar>(
    m: &Market<S>,
    q: &ReportProfile<S>,
    mech: Mechanism,
    i: &AgentId,
    declared: &BTreeSet<AgentId>,
) -> S {
    mech.payment(m, &q.with_declared(i, declared.clone()), i)
}

fn revenue_named<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>, name: &str) -> Result<S> {
    if name == "zero" {
        return Ok(S::zero());
    }
    let mech = Mechanism::parse(name)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown mechanism `{name}`")))?;
    Ok(mech.run(m, p).revenue)
}

fn path_slack<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    o: &MechanismOutcome<S>,
    t: &Transaction<S>,
    shared: bool,
) -> S {
    let plain: S = t.agents().iter().map(|k| o.payment(k)).sum();
    if shared {
        let weighted: S = t
            .agents()
            .iter()
            .map(|k| {
                let n = o.allocation.through_count.get(k).copied().unwrap_or(1);
                o.payment(k) / S::from_usize(n).expect("small count")
            })
            .sum();
        return weighted - plain;
    }
    let without_first = p
        .without(t.first_agent())
        .expect("first agent is not the seller");
    let bound = welfare_table(m, &without_first).kth(m.item_count());
    plain - t.cost - bound
}

/// `|per-path aggregate - target|`; the target is the allocation-graph sum
/// `sum x_k - C`, or the revenue when `against_revenue`.
fn aggregation_gap<S: Scalar>(o: &MechanismOutcome<S>, against_revenue: bool) -> S {
    let counts = &o.allocation.through_count;
    let per_path: S = o
        .allocation
        .transactions
        .iter()
        .map(|t| {
            let share: S = t
                .agents()
                .iter()
                .map(|k| o.payment(k) / S::from_usize(counts[k]).expect("small count"))
                .sum();
            share - t.cost
        })
        .sum();
    let target = if against_revenue {
        o.revenue
    } else {
        counts.keys().map(|k| o.payment(k)).sum::<S>() - o.cost
    };
    (per_path - target).abs()
}

/// Re-judges a recorded violation; `true` when it still holds.
pub(crate) fn replay<S: Scalar>(
    m: &Market<S>,
    q: &ReportProfile<S>,
    mech: Option<Mechanism>,
    violation: &Violation,
) -> Result<bool> {
    let tol = S::tolerance();
    Ok(match violation {
        Violation::ProfitableDeviation { agent, deviation } => {
            let mech = require_mech(mech)?;
            deviation_gain(m, q, mech, agent, &deviation.to_report()) > tol
        }
        Violation::NegativeUtility { agent } => require_mech(mech)?.utility(m, q, agent) < -tol,
        Violation::NonMonotone {
            agent,
            winning_bid,
            losing_bid,
        } => {
            let mech = mech.unwrap_or(Mechanism::Vcg);
            wins_at(m, q, mech, agent, S::from_decimal(*winning_bid))
                && !wins_at(m, q, mech, agent, S::from_decimal(*losing_bid))
        }
        Violation::CriticalBid {
            agent,
            bid,
            resolution,
            ..
        } => {
            let mech = require_mech(mech)?;
            let res = S::from_decimal(*resolution);
            let bid = S::from_decimal(*bid);
            if !wins_at(m, q, mech, agent, bid) {
                return Ok(false);
            }
            let (critical, payment) = critical_pair(m, q, mech, agent, bid, res);
            (payment - critical).abs() > res + tol
        }
        Violation::LoserPays { agent, bid } => {
            let mech = require_mech(mech)?;
            let bid = S::from_decimal(*bid);
            let at = q.with_bid(agent, bid);
            !mech.wins(m, &at, agent) && mech.payment(m, &at, agent).abs() > tol
        }
        Violation::IntermediaryPayment {
            agent,
            larger,
            smaller,
        } => {
            let mech = require_mech(mech)?;
            let larger: BTreeSet<AgentId> = larger.iter().cloned().collect();
            let smaller: BTreeSet<AgentId> = smaller.iter().cloned().collect();
            let x_large = declared_payment(m, q, mech, agent, &larger);
            if larger == smaller {
                x_large > tol
            } else {
                x_large > declared_payment(m, q, mech, agent, &smaller) + tol
            }
        }
        Violation::NoWitness { agent } => {
            find_witness(m, agent, require_mech(mech)?, DEFAULT_MAX_DEGREE).is_none()
        }
        Violation::RevenueOrder { higher, lower } => {
            revenue_named(m, q, higher)? < revenue_named(m, q, lower)? - tol
        }
        Violation::PathBound { buyer, shared } => {
            let o = Mechanism::Cna.run(m, q);
            match o.allocation.transaction_of(buyer) {
                Some(t) => path_slack(m, q, &o, t, *shared) < -tol,
                None => false,
            }
        }
        Violation::WelfareMismatch { .. } => {
            let engine = crate::allocation::social_welfare(&efficient_allocation(m, q), q);
            let brute =
                super::brute::brute_force_allocation(m, q, super::brute::DEFAULT_BUYER_BOUND)?;
            !engine.approx_eq(crate::allocation::social_welfare(&brute, q))
        }
        Violation::Aggregation { against_revenue } => {
            aggregation_gap(&Mechanism::Cna.run(m, q), *against_revenue) > tol
        }
    })
}

// ---- scans ---------------------------------------------------------------

/// No agent gains by a deviation from `d`, against every opponent profile
/// produced by `mode`.
pub fn check_ic<S: Scalar>(
    m: &Market<S>,
    d: &DeviationSpace<S>,
    mech: Mechanism,
    mode: OpponentMode,
) -> VerificationReport {
    let mut report = VerificationReport::new("ic", Some(mech));
    report.sampled = mode.is_sampled();
    report.exhaustive = d.exhaustive;
    let status = ic_status(m, mech);
    let tol = S::tolerance();
    for q in opponent_profiles(m, d, mode) {
        for r in m.agents() {
            let k = &r.id;
            let base = truthful_for(m, &q, k);
            let truthful = mech.utility(m, &base, k);
            for dev in d.reports_for(m, &base, k) {
                report.trials += 1;
                let gain = mech.utility(m, &base.with_report(k, dev.clone()), k) - truthful;
                if gain > tol {
                    let v = Violation::ProfitableDeviation {
                        agent: k.clone(),
                        deviation: ReportDoc::from_report(&dev),
                    };
                    report.violate(status, Counterexample::new(m, &base, Some(mech), v, gain));
                }
            }
        }
    }
    note_general_graph(&mut report, m);
    report
}

/// Truthful utility is nonnegative for every agent and opponent profile.
pub fn check_ir<S: Scalar>(
    m: &Market<S>,
    d: &DeviationSpace<S>,
    mech: Mechanism,
    mode: OpponentMode,
) -> VerificationReport {
    let mut report = VerificationReport::new("ir", Some(mech));
    report.sampled = mode.is_sampled();
    let tol = S::tolerance();
    for q in opponent_profiles(m, d, mode) {
        for r in m.agents() {
            let base = truthful_for(m, &q, &r.id);
            report.trials += 1;
            let u = mech.utility(m, &base, &r.id);
            if u < -tol {
                let v = Violation::NegativeUtility {
                    agent: r.id.clone(),
                };
                report.violate(
                    Status::Fail,
                    Counterexample::new(m, &base, Some(mech), v, -u),
                );
            }
        }
    }
    report
}

/// A buyer who wins at some grid bid still wins at every higher grid bid,
/// under the efficient allocation.
pub fn check_value_monotonicity<S: Scalar>(
    m: &Market<S>,
    d: &DeviationSpace<S>,
    mode: OpponentMode,
) -> VerificationReport {
    let mut report = VerificationReport::new("monotone", None);
    report.sampled = mode.is_sampled();
    for q in opponent_profiles(m, d, mode) {
        for j in m.buyers() {
            let base = truthful_for(m, &q, j);
            let mut first_win: Option<S> = None;
            for b in d.bids_for(m, &base, j) {
                report.trials += 1;
                let wins = efficient_allocation(m, &base.with_bid(j, b)).is_winner(j);
                match (wins, first_win) {
                    (true, None) => first_win = Some(b),
                    (false, Some(w)) => {
                        let v = Violation::NonMonotone {
                            agent: j.clone(),
                            winning_bid: w.to_f64_lossy(),
                            losing_bid: b.to_f64_lossy(),
                        };
                        report.violate(Status::Fail, Counterexample::new(m, &base, None, v, b - w));
                    }
                    _ => {}
                }
            }
        }
    }
    report
}

/// Winners pay their critical bid and losers pay nothing; intermediary
/// payments are nonpositive and nonincreasing as the declared set grows.
pub fn check_payment_characterization<S: Scalar>(
    m: &Market<S>,
    d: &DeviationSpace<S>,
    mech: Mechanism,
    mode: OpponentMode,
    resolution: f64,
) -> VerificationReport {
    let mut report = VerificationReport::new("characterization", Some(mech));
    report.sampled = mode.is_sampled();
    report.exhaustive = d.exhaustive;
    let tol = S::tolerance();
    let res = S::from_decimal(resolution);
    let inter_status = ic_status(m, mech);
    for q in opponent_profiles(m, d, mode) {
        for j in m.buyers() {
            let base = truthful_for(m, &q, j);
            let critical =
                critical_bid(m, mech, &base, j, res).unwrap_or_else(|| bid_ceiling(m, &base));
            for b in d.bids_for(m, &base, j) {
                report.trials += 1;
                let at = base.with_bid(j, b);
                let x = mech.payment(m, &at, j);
                if mech.wins(m, &at, j) {
                    let gap = (x - critical).abs();
                    if gap > res + tol {
                        let v = Violation::CriticalBid {
                            agent: j.clone(),
                            bid: b.to_f64_lossy(),
                            critical_bid: critical.to_f64_lossy(),
                            payment: x.to_f64_lossy(),
                            resolution,
                        };
                        report.violate(
                            Status::Fail,
                            Counterexample::new(m, &base, Some(mech), v, gap),
                        );
                    }
                } else if x.abs() > tol {
                    let v = Violation::LoserPays {
                        agent: j.clone(),
                        bid: b.to_f64_lossy(),
                    };
                    report.violate(
                        Status::Fail,
                        Counterexample::new(m, &base, Some(mech), v, x.abs()),
                    );
                }
            }
        }
        for i in m.intermediaries() {
            let base = truthful_for(m, &q, i);
            let family = &d.intermediary_subsets[i];
            let payments: Vec<S> = family
                .iter()
                .map(|s| declared_payment(m, &base, mech, i, s))
                .collect();
            for (a, xa) in family.iter().zip(&payments) {
                report.trials += 1;
                if *xa > tol {
                    let v = Violation::IntermediaryPayment {
                        agent: i.clone(),
                        larger: ids_vec(a),
                        smaller: ids_vec(a),
                    };
                    report.violate(
                        inter_status,
                        Counterexample::new(m, &base, Some(mech), v, *xa),
                    );
                }
                for (b, xb) in family.iter().zip(&payments) {
                    if b.len() < a.len() && b.is_subset(a) && *xa > *xb + tol {
                        report.trials += 1;
                        let v = Violation::IntermediaryPayment {
                            agent: i.clone(),
                            larger: ids_vec(a),
                            smaller: ids_vec(b),
                        };
                        report.violate(
                            inter_status,
                            Counterexample::new(m, &base, Some(mech), v, *xa - *xb),
                        );
                    }
                }
            }
        }
    }
    note_general_graph(&mut report, m);
    report
}

/// CNA revenue is at least VCG revenue on every market; CNA at least VCG-WI
/// at least zero on tree markets, recorded only on general graphs.
pub fn check_revenue_chain<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> VerificationReport {
    let mut report = VerificationReport::new("revenue", None);
    let tol = S::tolerance();
    let cna = Mechanism::Cna.run(m, p).revenue;
    let vcg = Mechanism::Vcg.run(m, p).revenue;
    let wi = Mechanism::VcgWi.run(m, p).revenue;
    let chain_status = tree_only_status(m);
    for (higher, lower, hi, lo, status) in [
        ("cna", "vcg", cna, vcg, Status::Fail),
        ("cna", "vcg-wi", cna, wi, chain_status),
        ("vcg-wi", "zero", wi, S::zero(), chain_status),
    ] {
        report.trials += 1;
        if hi < lo - tol {
            let v = Violation::RevenueOrder {
                higher: higher.to_owned(),
                lower: lower.to_owned(),
            };
            report.violate(status, Counterexample::new(m, p, None, v, lo - hi));
        }
    }
    note_general_graph(&mut report, m);
    report
}

/// Per-path bounds and the per-path aggregation identity under CNA.
pub fn check_lemma1<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> VerificationReport {
    let mut report = VerificationReport::new("lemma1", Some(Mechanism::Cna));
    let tol = S::tolerance();
    let o = Mechanism::Cna.run(m, p);
    let bound_status = tree_only_status(m);
    for t in &o.allocation.transactions {
        for shared in [false, true] {
            report.trials += 1;
            let slack = path_slack(m, p, &o, t, shared);
            if slack < -tol {
                let v = Violation::PathBound {
                    buyer: t.buyer().clone(),
                    shared,
                };
                let status = if shared { Status::Fail } else { bound_status };
                report.violate(
                    status,
                    Counterexample::new(m, p, Some(Mechanism::Cna), v, -slack),
                );
            }
        }
    }
    for (against_revenue, status) in [(false, Status::Fail), (true, bound_status)] {
        report.trials += 1;
        let gap = aggregation_gap(&o, against_revenue);
        if gap > tol {
            let v = Violation::Aggregation { against_revenue };
            report.violate(
                status,
                Counterexample::new(m, p, Some(Mechanism::Cna), v, gap),
            );
        }
    }
    note_general_graph(&mut report, m);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig1_as};
    use crate::market::{build_market, ids, AgentRecord};
    use crate::scalar::Rational;

    fn space() -> DeviationSpace<f64> {
        DeviationSpace::breakpoints(&fig1(), DEFAULT_MAX_DEGREE, 1e-3)
    }

    #[test]
    fn fig1_studied_mechanisms_are_ic() {
        let m = fig1();
        let d = space();
        for mech in [Mechanism::Vcg, Mechanism::Cna] {
            let r = check_ic(&m, &d, mech, OpponentMode::Truthful);
            assert!(r.passed(), "{}: {:?}", mech, r.counterexample);
            assert!(r.trials > 100);
        }
    }

    #[test]
    fn fig1_vcg_integer_bid_grid() {
        let m = fig1();
        let grid: Vec<f64> = (0..=35).map(f64::from).collect();
        let d = DeviationSpace::uniform(&m, &grid, DEFAULT_MAX_DEGREE);
        assert!(check_ic(&m, &d, Mechanism::Vcg, OpponentMode::Truthful).passed());
    }

    #[test]
    fn fig1_b_truthful_is_best_among_subsets() {
        let m = fig1();
        let p = m.truthful_profile();
        let b = AgentId::from("B");
        let truthful = Mechanism::Cna.utility(&m, &p, &b);
        assert_eq!(truthful, 3.0);
        for s in &space().intermediary_subsets[&b] {
            assert!(Mechanism::Cna.utility(&m, &p.with_declared(&b, s.clone()), &b) <= truthful);
        }
    }

    #[test]
    fn first_price_fails_ic_with_replayable_counterexample() {
        let m = fig1();
        let r = check_ic(&m, &space(), Mechanism::FirstPrice, OpponentMode::Truthful);
        assert!(r.failed());
        let cx = r.counterexample.expect("counterexample");
        assert!(matches!(
            cx.violation,
            Violation::ProfitableDeviation { .. }
        ));
        assert!(cx.replay::<f64>().unwrap());
    }

    #[test]
    fn ir_holds_for_studied_and_fails_for_loser_fee() {
        let m = fig1();
        let d = space();
        for mech in Mechanism::STUDIED {
            assert!(check_ir(&m, &d, mech, OpponentMode::Truthful).passed());
        }
        let r = check_ir(&m, &d, Mechanism::LoserFee, OpponentMode::Truthful);
        assert!(r.failed());
        assert!(r.counterexample.unwrap().replay::<f64>().unwrap());
    }

    #[test]
    fn monotonicity_on_fig1() {
        let m = fig1();
        let r = check_value_monotonicity(&m, &space(), OpponentMode::Truthful);
        assert!(r.passed());
        let p = m.truthful_profile();
        let b1 = AgentId::from("b1");
        assert!(efficient_allocation(&m, &p.with_bid(&b1, 20.0)).is_winner(&b1));
        let d2 = AgentId::from("d2");
        let a = efficient_allocation(&m, &p.with_bid(&d2, 13.0));
        assert!(a.is_winner(&d2));
        assert!(!a.is_winner(&"e2".into()));
    }

    #[test]
    fn critical_bid_of_d1_is_its_payment() {
        let m = fig1();
        let p = m.truthful_profile();
        for mech in [Mechanism::Vcg, Mechanism::Cna] {
            let c = critical_bid(&m, mech, &p, &"d1".into(), 1e-6).unwrap();
            assert!((c - 12.0).abs() <= 1e-6, "{c}");
        }
        let exact: Market<Rational> = fig1_as();
        let c = critical_bid(
            &exact,
            Mechanism::Cna,
            &exact.truthful_profile(),
            &"d1".into(),
            Rational::new(1, 1_000_000),
        )
        .unwrap();
        // bisection approaches from above
        let gap = c - Rational::from_integer(12);
        assert!(gap >= Rational::from_integer(0) && gap <= Rational::new(1, 1_000_000));
    }

    #[test]
    fn characterization_on_fig1() {
        let m = fig1();
        let d = space();
        for mech in Mechanism::STUDIED {
            let r = check_payment_characterization(
                &m,
                &d,
                mech,
                OpponentMode::Truthful,
                DEFAULT_RESOLUTION,
            );
            assert!(r.passed(), "{mech}: {:?}", r.counterexample);
        }
        let r = check_payment_characterization(
            &m,
            &d,
            Mechanism::FirstPrice,
            OpponentMode::Truthful,
            DEFAULT_RESOLUTION,
        );
        assert!(r.failed());
        assert!(r.counterexample.unwrap().replay::<f64>().unwrap());
    }

    #[test]
    fn constant_reward_breaks_intermediary_condition() {
        let r = check_payment_characterization(
            &fig1(),
            &space(),
            Mechanism::ConstantReward,
            OpponentMode::Truthful,
            DEFAULT_RESOLUTION,
        );
        // paying 1 regardless of the declaration is fine here; the constant
        // control only fails non-degeneracy
        assert!(r.passed(), "{:?}", r.counterexample);
    }

    #[test]
    fn revenue_chain_on_fig1() {
        let m = fig1();
        assert!(check_revenue_chain(&m, &m.truthful_profile()).passed());
    }

    #[test]
    fn direct_buyers_only_cna_equals_vcg_wi() {
        let m = build_market(
            [
                AgentRecord::buyer("x", 4.0),
                AgentRecord::buyer("y", 7.0),
                AgentRecord::buyer("z", 1.0),
            ],
            ids(["x", "y", "z"]),
            ["x", "y", "z"].map(|b| (AgentId::seller(), AgentId::from(b), 0.0)),
            2,
        )
        .unwrap();
        let p = m.truthful_profile();
        assert_eq!(
            Mechanism::Cna.run(&m, &p).revenue,
            Mechanism::VcgWi.run(&m, &p).revenue
        );
        assert!(check_revenue_chain(&m, &p).passed());
    }

    #[test]
    fn lemma1_on_fig1() {
        let m = fig1();
        let p = m.truthful_profile();
        let r = check_lemma1(&m, &p);
        assert!(r.passed(), "{:?}", r.counterexample);
        let o = Mechanism::Cna.run(&m, &p);
        let t = o.allocation.transaction_of(&"d1".into()).unwrap();
        // X = 0 - 3 + 12 = 9, C = 2, bound 7
        assert_eq!(path_slack(&m, &p, &o, t, false), 0.0);
        let t = o.allocation.transaction_of(&"b1".into()).unwrap();
        assert_eq!(path_slack(&m, &p, &o, t, false), 3.0);
        assert_eq!(aggregation_gap(&o, true), 0.0);
    }

    #[test]
    fn replay_detects_fixed_cases() {
        let m = fig1();
        let p = m.truthful_profile();
        let v = Violation::RevenueOrder {
            higher: "vcg".into(),
            lower: "cna".into(),
        };
        let cx = Counterexample::new(&m, &p, None, v, 46.0);
        assert!(cx.replay::<f64>().unwrap());
        assert!(cx.replay::<Rational>().unwrap());
        let v = Violation::RevenueOrder {
            higher: "cna".into(),
            lower: "vcg".into(),
        };
        assert!(!Counterexample::new(&m, &p, None, v, 0.0)
            .replay::<f64>()
            .unwrap());
    }
}
