//! Payment rules: VCG, the critical neighborhood auction (CNA), VCG without
//! intermediaries (VCG-WI), and three deliberately broken controls used to
//! make sure the verification suites can fail.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::allocation::{
    efficient_allocation, social_welfare, total_cost, welfare_table, Allocation, Transaction,
};
use crate::error::{Error, Result};
use crate::market::{AgentId, AgentKind, Market, ReportProfile};
use crate::scalar::{cmp, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mechanism {
    Vcg,
    Cna,
    VcgWi,
    /// Control: efficient allocation, winners pay their own bid.
    FirstPrice,
    /// Control: buyers pay VCG, every valid intermediary receives 1.
    ConstantReward,
    /// Control: VCG, but losing valid buyers pay 1.
    LoserFee,
}

impl Mechanism {
    pub const STUDIED: [Mechanism; 3] = [Mechanism::Vcg, Mechanism::Cna, Mechanism::VcgWi];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Vcg => "vcg",
            Mechanism::Cna => "cna",
            Mechanism::VcgWi => "vcg-wi",
            Mechanism::FirstPrice => "first-price",
            Mechanism::ConstantReward => "constant",
            Mechanism::LoserFee => "loser-fee",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            Mechanism::Vcg,
            Mechanism::Cna,
            Mechanism::VcgWi,
            Mechanism::FirstPrice,
            Mechanism::ConstantReward,
            Mechanism::LoserFee,
        ]
        .into_iter()
        .find(|m| m.name() == name)
    }

    pub fn is_control(self) -> bool {
        matches!(
            self,
            Mechanism::FirstPrice | Mechanism::ConstantReward | Mechanism::LoserFee
        )
    }

    pub fn run<S: Scalar>(self, m: &Market<S>, p: &ReportProfile<S>) -> MechanismOutcome<S> {
        match self {
            Mechanism::Vcg => run_vcg(m, p),
            Mechanism::Cna => run_cna(m, p),
            Mechanism::VcgWi => run_vcg_wi(m, p),
            _ => {
                let allocation = efficient_allocation(m, p);
                let valid = m.valid_agents(p);
                let payments = all_agents(m)
                    .map(|k| {
                        let x = if valid.contains(k) {
                            self.payment_given(m, p, &allocation, k)
                        } else {
                            S::zero()
                        };
                        (k.clone(), x)
                    })
                    .collect();
                MechanismOutcome::assemble(self, m, p, allocation, valid, payments)
            }
        }
    }

    /// Payment of a single agent, without computing everyone else's.
    pub fn payment<S: Scalar>(self, m: &Market<S>, p: &ReportProfile<S>, k: &AgentId) -> S {
        if self == Mechanism::VcgWi {
            return run_vcg_wi(m, p)
                .payments
                .get(k)
                .copied()
                .unwrap_or_else(S::zero);
        }
        if !m.valid_agents(p).contains(k) {
            return S::zero();
        }
        let allocation = efficient_allocation(m, p);
        self.payment_given(m, p, &allocation, k)
    }

    /// Whether buyer `j` wins under this mechanism's allocation rule.
    pub fn wins<S: Scalar>(self, m: &Market<S>, p: &ReportProfile<S>, j: &AgentId) -> bool {
        match self {
            Mechanism::VcgWi => vcg_wi_winners(m, p).0.contains(j),
            _ => efficient_allocation(m, p).is_winner(j),
        }
    }

    /// Utility of agent `k` evaluated against its true type.
    pub fn utility<S: Scalar>(self, m: &Market<S>, p: &ReportProfile<S>, k: &AgentId) -> S {
        if self == Mechanism::VcgWi {
            return run_vcg_wi(m, p)
                .utilities
                .get(k)
                .copied()
                .unwrap_or_else(S::zero);
        }
        if !m.valid_agents(p).contains(k) {
            return S::zero();
        }
        let allocation = efficient_allocation(m, p);
        let x = self.payment_given(m, p, &allocation, k);
        utility_of(m, &allocation, k, x)
    }

    // `k` must be valid under `p`; `allocation` is the efficient allocation.
    fn payment_given<S: Scalar>(
        self,
        m: &Market<S>,
        p: &ReportProfile<S>,
        allocation: &Allocation<S>,
        k: &AgentId,
    ) -> S {
        let buyer = m.is_buyer(k);
        match self {
            Mechanism::Vcg => vcg_payment_given(m, p, allocation, k),
            Mechanism::Cna if buyer => vcg_payment_given(m, p, allocation, k),
            Mechanism::Cna => cna_intermediary_payment(m, p, allocation, k),
            Mechanism::FirstPrice if buyer && allocation.is_winner(k) => {
                p.bid(k).unwrap_or_else(S::zero)
            }
            Mechanism::FirstPrice => S::zero(),
            Mechanism::ConstantReward if buyer => vcg_payment_given(m, p, allocation, k),
            Mechanism::ConstantReward => -S::one(),
            Mechanism::LoserFee if buyer && !allocation.is_winner(k) => S::one(),
            Mechanism::LoserFee => vcg_payment_given(m, p, allocation, k),
            Mechanism::VcgWi => unreachable!("VCG-WI payments are computed by run_vcg_wi"),
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn all_agents<S: Scalar>(m: &Market<S>) -> impl Iterator<Item = &AgentId> {
    m.agents().map(|r| &r.id)
}

fn utility_of<S: Scalar>(m: &Market<S>, allocation: &Allocation<S>, k: &AgentId, x: S) -> S {
    match m.kind(k) {
        Some(AgentKind::Buyer) if allocation.is_winner(k) => {
            m.true_value(k).unwrap_or_else(S::zero) - x
        }
        _ => -x,
    }
}

/// Allocation, payments and derived quantities of one mechanism run.
#[derive(Clone, Debug, PartialEq)]
pub struct MechanismOutcome<S = f64> {
    pub mechanism: Mechanism,
    pub profile: ReportProfile<S>,
    pub allocation: Allocation<S>,
    pub valid: BTreeSet<AgentId>,
    /// Payment of every market agent; negative means the seller pays.
    pub payments: BTreeMap<AgentId, S>,
    /// Utilities against true types.
    pub utilities: BTreeMap<AgentId, S>,
    /// Sum of payments minus transaction cost.
    pub revenue: S,
    /// Winner bids minus transaction cost.
    pub welfare: S,
    pub cost: S,
    pub buyer_payments: S,
    pub intermediary_payments: S,
}

impl<S: Scalar> MechanismOutcome<S> {
    fn assemble(
        mechanism: Mechanism,
        m: &Market<S>,
        p: &ReportProfile<S>,
        allocation: Allocation<S>,
        valid: BTreeSet<AgentId>,
        payments: BTreeMap<AgentId, S>,
    ) -> Self {
        let utilities = payments
            .iter()
            .map(|(k, x)| (k.clone(), utility_of(m, &allocation, k, *x)))
            .collect();
        let cost = total_cost(&allocation);
        let welfare = social_welfare(&allocation, p);
        let by_kind = |kind: AgentKind| -> S {
            payments
                .iter()
                .filter(|(k, _)| m.kind(k) == Some(kind))
                .map(|(_, x)| *x)
                .sum()
        };
        let buyer_payments = by_kind(AgentKind::Buyer);
        let intermediary_payments = by_kind(AgentKind::Intermediary);
        let revenue = payments.values().copied().sum::<S>() - cost;
        MechanismOutcome {
            mechanism,
            profile: p.clone(),
            allocation,
            valid,
            payments,
            utilities,
            revenue,
            welfare,
            cost,
            buyer_payments,
            intermediary_payments,
        }
    }

    pub fn payment(&self, k: &AgentId) -> S {
        self.payments.get(k).copied().unwrap_or_else(S::zero)
    }

    pub fn utility(&self, k: &AgentId) -> S {
        self.utilities.get(k).copied().unwrap_or_else(S::zero)
    }
}

/// `W*(theta'_{-k}) - (W*(theta') - z_k * bid_k)` for a valid agent.
fn vcg_payment_given<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    allocation: &Allocation<S>,
    k: &AgentId,
) -> S {
    let welfare = social_welfare(allocation, p);
    let own = if allocation.is_winner(k) {
        p.bid(k).unwrap_or_else(S::zero)
    } else {
        S::zero()
    };
    let without = p.without(k).expect("non-seller agent");
    let welfare_without = social_welfare(&efficient_allocation(m, &without), &without);
    welfare_without - (welfare - own)
}

/// Efficient allocation; every valid agent pays the welfare loss it imposes
/// on the others.
pub fn run_vcg<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> MechanismOutcome<S> {
    let allocation = efficient_allocation(m, p);
    let valid = m.valid_agents(p);
    let payments = all_agents(m)
        .map(|k| {
            let x = if valid.contains(k) {
                vcg_payment_given(m, p, &allocation, k)
            } else {
                S::zero()
            };
            (k.clone(), x)
        })
        .collect();
    MechanismOutcome::assemble(Mechanism::Vcg, m, p, allocation, valid, payments)
}

/// A winner's VCG payment in critical-bid form: the K-th highest welfare
/// without the winner plus the cost of its own transaction.
pub fn vcg_winner_payment<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    j: &AgentId,
) -> Result<S> {
    let allocation = efficient_allocation(m, p);
    let t = allocation
        .transaction_of(j)
        .ok_or_else(|| Error::NotWinner(j.clone()))?;
    let without = p.without(j)?;
    Ok(welfare_table(m, &without).kth(m.item_count()) + t.cost)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalNeighborhood {
    pub owner: AgentId,
    pub members: BTreeSet<AgentId>,
}

fn critical_members<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    allocation: &Allocation<S>,
    i: &AgentId,
) -> BTreeSet<AgentId> {
    let declared = p.declared(i).cloned().unwrap_or_default();
    let nodes = allocation.nodes();
    declared
        .into_iter()
        .filter(|k| nodes.contains(k) || m.is_intermediary(k))
        .collect()
}

/// Declared neighbors in the efficient allocation graph, plus every declared
/// intermediary neighbor.
pub fn critical_neighborhood<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    i: &AgentId,
) -> Result<CriticalNeighborhood> {
    if !m.is_intermediary(i) {
        return Err(Error::NotIntermediary(i.clone()));
    }
    if !m.valid_agents(p).contains(i) {
        return Err(Error::InvalidAgent(i.clone()));
    }
    let allocation = efficient_allocation(m, p);
    Ok(CriticalNeighborhood {
        owner: i.clone(),
        members: critical_members(m, p, &allocation, i),
    })
}

/// `W^(K)(theta'_{-i}) - W^(K)(r'_i minus its critical neighborhood, theta'_{-i})`.
fn cna_intermediary_payment<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    allocation: &Allocation<S>,
    i: &AgentId,
) -> S {
    let k = m.item_count();
    let critical = critical_members(m, p, allocation, i);
    let declared = p.declared(i).cloned().unwrap_or_default();
    let kept: BTreeSet<AgentId> = declared.difference(&critical).cloned().collect();
    let without = p.without(i).expect("intermediary is not the seller");
    let withheld = p
        .restrict_neighbors(i, &kept)
        .expect("kept set is a subset of the declaration");
    welfare_table(m, &without).kth(k) - welfare_table(m, &withheld).kth(k)
}

/// Efficient allocation; buyers pay VCG, intermediaries are paid only for the
/// welfare their critical neighborhood adds at the K-th position.
pub fn run_cna<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> MechanismOutcome<S> {
    let allocation = efficient_allocation(m, p);
    let valid = m.valid_agents(p);
    let payments = all_agents(m)
        .map(|k| {
            let x = if !valid.contains(k) {
                S::zero()
            } else if m.is_buyer(k) {
                vcg_payment_given(m, p, &allocation, k)
            } else {
                cna_intermediary_payment(m, p, &allocation, k)
            };
            (k.clone(), x)
        })
        .collect();
    MechanismOutcome::assemble(Mechanism::Cna, m, p, allocation, valid, payments)
}

/// Winners and uniform price of the seller-only auction.
fn vcg_wi_winners<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> (Vec<AgentId>, S) {
    let mut direct: Vec<(AgentId, S)> = m
        .seller_neighbors()
        .iter()
        .filter_map(|j| p.bid(j).map(|b| (j.clone(), b)))
        .collect();
    direct.sort_by(|(ia, a), (ib, b)| cmp(b, a).then_with(|| m.rank(ia).cmp(&m.rank(ib))));
    let k = m.item_count();
    let price = direct.get(k).map(|(_, b)| *b).unwrap_or_else(S::zero);
    let winners = direct.into_iter().take(k).map(|(j, _)| j).collect();
    (winners, price)
}

/// Classical K-unit VCG among the seller's direct buyers: the top K bids win
/// and each pays the (K+1)-th highest bid. Intermediaries are ignored.
pub fn run_vcg_wi<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> MechanismOutcome<S> {
    let (winners, price) = vcg_wi_winners(m, p);
    let seller = AgentId::seller();
    let transactions = winners
        .iter()
        .map(|j| {
            Transaction::along(m, vec![seller.clone(), j.clone()])
                .expect("seller neighbor has a cost entry")
        })
        .collect();
    let allocation = Allocation::from_transactions(transactions);
    let valid = m.valid_agents(p);
    let payments = all_agents(m)
        .map(|k| {
            let x = if allocation.is_winner(k) {
                price
            } else {
                S::zero()
            };
            (k.clone(), x)
        })
        .collect();
    MechanismOutcome::assemble(Mechanism::VcgWi, m, p, allocation, valid, payments)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow<S = f64> {
    pub mechanism: Mechanism,
    pub welfare: S,
    pub revenue: S,
    pub buyer_payments: S,
    pub intermediary_payments: S,
    pub cost: S,
}

/// Side-by-side comparison of mechanisms run on the same instance.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComparisonTable<S = f64> {
    pub rows: Vec<SummaryRow<S>>,
}

pub const SUMMARY_COLUMNS: [&str; 6] = [
    "mechanism",
    "welfare",
    "revenue",
    "buyer_payments",
    "intermediary_payments",
    "cost",
];

impl<S: Scalar> ComparisonTable<S> {
    pub fn revenues(&self) -> Vec<S> {
        self.rows.iter().map(|r| r.revenue).collect()
    }
}

impl<S: Scalar> fmt::Display for ComparisonTable<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>12} {:>12} {:>14} {:>21} {:>10}",
            SUMMARY_COLUMNS[0],
            SUMMARY_COLUMNS[1],
            SUMMARY_COLUMNS[2],
            SUMMARY_COLUMNS[3],
            SUMMARY_COLUMNS[4],
            SUMMARY_COLUMNS[5]
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<12} {:>12.4} {:>12.4} {:>14.4} {:>21.4} {:>10.4}",
                r.mechanism.name(),
                r.welfare.to_f64_lossy(),
                r.revenue.to_f64_lossy(),
                r.buyer_payments.to_f64_lossy(),
                r.intermediary_payments.to_f64_lossy(),
                r.cost.to_f64_lossy()
            )?;
        }
        Ok(())
    }
}

pub fn outcome_summary<S: Scalar>(outcomes: &[MechanismOutcome<S>]) -> Result<ComparisonTable<S>> {
    if let Some(first) = outcomes.first() {
        let same = outcomes
            .iter()
            .all(|o| o.profile == first.profile && o.payments.keys().eq(first.payments.keys()));
        if !same {
            return Err(Error::MismatchedOutcomes);
        }
    }
    Ok(ComparisonTable {
        rows: outcomes
            .iter()
            .map(|o| SummaryRow {
                mechanism: o.mechanism,
                welfare: o.welfare,
                revenue: o.revenue,
                buyer_payments: o.buyer_payments,
                intermediary_payments: o.intermediary_payments,
                cost: o.cost,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig1_as};
    use crate::market::{build_market, ids, AgentRecord};
    use crate::scalar::Rational;

    fn id(s: &str) -> AgentId {
        AgentId::from(s)
    }

    #[test]
    fn fig1_critical_neighborhoods() {
        let m = fig1();
        let p = m.truthful_profile();
        let cn = |i: &str| critical_neighborhood(&m, &p, &id(i)).unwrap().members;
        assert_eq!(cn("B"), ids(["b1", "C", "E"]));
        assert_eq!(cn("D"), ids(["d1"]));
        assert_eq!(cn("C"), BTreeSet::new());
        assert_eq!(cn("A"), ids(["D"]));
        assert_eq!(
            critical_neighborhood(&m, &p, &id("b1")).unwrap_err(),
            Error::NotIntermediary(id("b1"))
        );
        let q = p.without(&id("B")).unwrap();
        assert_eq!(
            critical_neighborhood(&m, &q, &id("E")).unwrap_err(),
            Error::InvalidAgent(id("E"))
        );
    }

    #[test]
    fn fig1_vcg() {
        let m = fig1();
        let o = run_vcg(&m, &m.truthful_profile());
        let expect = [
            ("A", -21.0),
            ("B", -9.0),
            ("C", 0.0),
            ("D", -21.0),
            ("E", -1.0),
            ("b1", 11.0),
            ("d1", 12.0),
            ("e2", 11.0),
        ];
        for (k, x) in expect {
            assert_eq!(o.payment(&id(k)), x, "{k}");
        }
        for loser in ["s1", "s2", "s3", "s4", "a1", "b2", "c1", "d2", "e1"] {
            assert_eq!(o.payment(&id(loser)), 0.0);
        }
        assert_eq!(o.revenue, -22.0);
        assert_eq!(o.welfare, 51.0);
        assert_eq!(o.cost, 4.0);
    }

    #[test]
    fn fig1_vcg_winner_payment_matches_generic_form() {
        let m = fig1();
        let p = m.truthful_profile();
        let vcg = run_vcg(&m, &p);
        assert_eq!(vcg_winner_payment(&m, &p, &id("d1")).unwrap(), 12.0);
        assert_eq!(vcg_winner_payment(&m, &p, &id("b1")).unwrap(), 11.0);
        for j in &vcg.allocation.winners {
            assert_eq!(vcg_winner_payment(&m, &p, j).unwrap(), vcg.payment(j));
        }
        assert_eq!(
            vcg_winner_payment(&m, &p, &id("d2")).unwrap_err(),
            Error::NotWinner(id("d2"))
        );

        let solo = build_market(
            [AgentRecord::buyer("j", 5.0)],
            ids(["j"]),
            [(AgentId::seller(), id("j"), 0.0)],
            1,
        )
        .unwrap();
        let q = solo.truthful_profile();
        assert_eq!(vcg_winner_payment(&solo, &q, &id("j")).unwrap(), 0.0);
    }

    #[test]
    fn fig1_cna() {
        let m = fig1();
        let p = m.truthful_profile();
        let o = run_cna(&m, &p);
        assert_eq!(o.payment(&id("B")), -3.0);
        assert_eq!(o.payment(&id("D")), -3.0);
        for i in ["A", "C", "E"] {
            assert_eq!(o.payment(&id(i)), 0.0, "{i}");
        }
        let vcg = run_vcg(&m, &p);
        for j in m.buyers() {
            assert_eq!(o.payment(j), vcg.payment(j));
        }
        assert_eq!(o.revenue, 24.0);
        assert_eq!(o.allocation, vcg.allocation);
        assert_eq!(o.utility(&id("B")), 3.0);
        assert_eq!(o.utility(&id("d1")), 18.0);
    }

    #[test]
    fn fig1_vcg_wi() {
        let m = fig1();
        let p = m.truthful_profile();
        let o = run_vcg_wi(&m, &p);
        assert_eq!(o.allocation.winners, ids(["s2", "s3", "s4"]));
        for j in ["s2", "s3", "s4"] {
            assert_eq!(o.payment(&id(j)), 1.0);
        }
        assert_eq!(o.revenue, 3.0);
        for i in m.intermediaries() {
            assert_eq!(o.payment(i), 0.0);
        }

        let k1 = m.with_item_count(1).unwrap();
        let o = run_vcg_wi(&k1, &k1.truthful_profile());
        assert_eq!(o.allocation.winners, ids(["s2"]));
        assert_eq!(o.payment(&id("s2")), 2.0);
    }

    #[test]
    fn vcg_wi_without_competition_is_free() {
        let m = build_market(
            [AgentRecord::buyer("x", 4.0), AgentRecord::buyer("y", 2.0)],
            ids(["x", "y"]),
            [
                (AgentId::seller(), id("x"), 0.0),
                (AgentId::seller(), id("y"), 0.0),
            ],
            3,
        )
        .unwrap();
        let o = run_vcg_wi(&m, &m.truthful_profile());
        assert_eq!(o.allocation.winners.len(), 2);
        assert_eq!(o.payment(&id("x")), 0.0);
        assert_eq!(o.payment(&id("y")), 0.0);
        assert_eq!(o.revenue, 0.0);
    }

    #[test]
    fn summary_table() {
        let m = fig1();
        let p = m.truthful_profile();
        let outs: Vec<_> = Mechanism::STUDIED.iter().map(|x| x.run(&m, &p)).collect();
        let table = outcome_summary(&outs).unwrap();
        assert_eq!(table.revenues(), vec![-22.0, 24.0, 3.0]);
        assert_eq!(outcome_summary(&outs[..1]).unwrap().rows.len(), 1);
        assert!(outcome_summary::<f64>(&[]).unwrap().rows.is_empty());

        let other = run_cna(&m, &p.with_bid(&id("b1"), 1.0));
        let err = outcome_summary(&[outs[0].clone(), other]).unwrap_err();
        assert_eq!(err, Error::MismatchedOutcomes);
        let rendered = table.to_string();
        assert!(rendered.starts_with("mechanism"));
        assert_eq!(rendered.lines().count(), 4);
    }

    #[test]
    fn single_agent_paths_agree_with_full_runs() {
        let m = fig1();
        let p = m
            .truthful_profile()
            .with_bid(&id("a1"), 9.5)
            .with_declared(&id("E"), ids(["e1"]));
        for mech in [
            Mechanism::Vcg,
            Mechanism::Cna,
            Mechanism::VcgWi,
            Mechanism::FirstPrice,
            Mechanism::ConstantReward,
            Mechanism::LoserFee,
        ] {
            let full = mech.run(&m, &p);
            for r in m.agents() {
                assert_eq!(
                    mech.payment(&m, &p, &r.id),
                    full.payment(&r.id),
                    "{mech} {}",
                    r.id
                );
                assert_eq!(
                    mech.utility(&m, &p, &r.id),
                    full.utility(&r.id),
                    "{mech} {}",
                    r.id
                );
            }
        }
    }

    #[test]
    fn invalid_agents_pay_nothing() {
        let m = fig1();
        let p = m
            .truthful_profile()
            .with_declared(&id("B"), BTreeSet::new());
        for mech in [Mechanism::Vcg, Mechanism::Cna] {
            let o = mech.run(&m, &p);
            for k in ["b1", "b2", "C", "c1", "E", "e1", "e2"] {
                assert_eq!(o.payment(&id(k)), 0.0);
                assert_eq!(o.utility(&id(k)), 0.0);
            }
        }
    }

    #[test]
    fn exact_fig1_outcomes() {
        let m = fig1_as::<Rational>();
        let p = m.truthful_profile();
        let r = |x: i64| Rational::from_integer(x);
        assert_eq!(run_vcg(&m, &p).revenue, r(-22));
        assert_eq!(run_cna(&m, &p).revenue, r(24));
        assert_eq!(run_vcg_wi(&m, &p).revenue, r(3));
    }

    #[test]
    fn mechanism_names_round_trip() {
        for mech in [
            Mechanism::Vcg,
            Mechanism::Cna,
            Mechanism::VcgWi,
            Mechanism::FirstPrice,
            Mechanism::ConstantReward,
            Mechanism::LoserFee,
        ] {
            assert_eq!(Mechanism::parse(mech.name()), Some(mech));
        }
        assert_eq!(Mechanism::parse("dutch"), None);
    }
}
