//! Transactions, per-buyer welfare and the efficient top-K allocation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::market::{AgentId, Edge, Market, Report, ReportProfile};
use crate::scalar::{cmp, Scalar};

/// A seller-to-buyer path and its summed per-edge cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Transaction<S = f64> {
    pub path: Vec<AgentId>,
    pub cost: S,
}

impl<S: Scalar> Transaction<S> {
    /// Builds a transaction along `path` (which must start at the seller),
    /// summing market costs. Fails if a hop has no cost entry.
    pub fn along(m: &Market<S>, path: Vec<AgentId>) -> Result<Self> {
        let mut cost = S::zero();
        for hop in path.windows(2) {
            cost = cost
                + m.cost(&hop[0], &hop[1])
                    .ok_or_else(|| Error::MissingCost(hop[0].clone(), hop[1].clone()))?;
        }
        Ok(Transaction { path, cost })
    }

    pub fn buyer(&self) -> &AgentId {
        self.path.last().expect("transaction path is nonempty")
    }

    /// Agents on the path, seller excluded.
    pub fn agents(&self) -> &[AgentId] {
        &self.path[1..]
    }

    /// First agent after the seller.
    pub fn first_agent(&self) -> &AgentId {
        &self.path[1]
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.path.windows(2).map(|w| (w[0].clone(), w[1].clone()))
    }
}

/// A set of at most K transactions with its allocation graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation<S = f64> {
    pub transactions: Vec<Transaction<S>>,
    pub winners: BTreeSet<AgentId>,
    /// Union of transaction edges.
    pub graph_edges: BTreeSet<Edge>,
    /// Number of transactions through each agent (seller excluded).
    pub through_count: BTreeMap<AgentId, usize>,
    /// Number of transactions using each edge.
    pub edge_count: BTreeMap<Edge, usize>,
}

impl<S: Scalar> Allocation<S> {
    pub fn empty() -> Self {
        Self::from_transactions(Vec::new())
    }

    pub fn from_transactions(transactions: Vec<Transaction<S>>) -> Self {
        let mut winners = BTreeSet::new();
        let mut graph_edges = BTreeSet::new();
        let mut through_count = BTreeMap::new();
        let mut edge_count = BTreeMap::new();
        for t in &transactions {
            winners.insert(t.buyer().clone());
            for a in t.agents() {
                *through_count.entry(a.clone()).or_insert(0) += 1;
            }
            for e in t.edges() {
                graph_edges.insert(e.clone());
                *edge_count.entry(e).or_insert(0) += 1;
            }
        }
        Allocation {
            transactions,
            winners,
            graph_edges,
            through_count,
            edge_count,
        }
    }

    pub fn is_winner(&self, id: &AgentId) -> bool {
        self.winners.contains(id)
    }

    /// Non-seller nodes of the allocation graph.
    pub fn nodes(&self) -> BTreeSet<AgentId> {
        self.through_count.keys().cloned().collect()
    }

    pub fn transaction_of(&self, buyer: &AgentId) -> Option<&Transaction<S>> {
        self.transactions.iter().find(|t| t.buyer() == buyer)
    }

    /// Nodes of the allocation graph with no outgoing allocation edge.
    pub fn leaves(&self) -> BTreeSet<AgentId> {
        let sources: BTreeSet<&AgentId> = self.graph_edges.iter().map(|(a, _)| a).collect();
        self.through_count
            .keys()
            .filter(|k| !sources.contains(k))
            .cloned()
            .collect()
    }
}

/// Per-buyer welfare `bid - cheapest path cost` for every valid buyer.
#[derive(Clone, Debug, PartialEq)]
pub struct WelfareTable<S = f64> {
    pub per_buyer: BTreeMap<AgentId, S>,
    pub path: BTreeMap<AgentId, Transaction<S>>,
}

impl<S: Scalar> WelfareTable<S> {
    /// Welfare values in descending order.
    pub fn sorted_values(&self) -> Vec<S> {
        let mut v: Vec<S> = self.per_buyer.values().copied().collect();
        v.sort_by(|a, b| cmp(b, a));
        v
    }

    /// The `k`-th highest welfare clamped at zero; zero when fewer than `k`
    /// buyers exist.
    pub fn kth(&self, k: usize) -> S {
        if k == 0 {
            return S::zero();
        }
        self.sorted_values()
            .get(k - 1)
            .map(|w| w.max_of(S::zero()))
            .unwrap_or_else(S::zero)
    }
}

fn path_order<S: Scalar>(m: &Market<S>, a: &[AgentId], b: &[AgentId]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match m.rank(x).cmp(&m.rank(y)) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Minimum-cost simple paths from the seller to every valid agent over
/// declared edges; ties go to the smallest path in tie-breaking order.
///
/// Labels are `(cost, path)` pairs compared cost-first. Extending a label
/// never makes it smaller, and two distinct simple paths to the same node
/// differ before either ends, so settling the smallest label first is exact.
pub fn cheapest_paths<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
) -> BTreeMap<AgentId, Transaction<S>> {
    let valid = m.valid_agents(p);
    let mut tentative: BTreeMap<AgentId, Transaction<S>> = BTreeMap::new();
    let mut settled: BTreeMap<AgentId, Transaction<S>> = BTreeMap::new();

    let better = |cand: &Transaction<S>, cur: &Transaction<S>| match cmp(&cand.cost, &cur.cost) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => path_order(m, &cand.path, &cur.path) == Ordering::Less,
    };

    let seller = AgentId::seller();
    for n in m.seller_neighbors() {
        if valid.contains(n) {
            let w = m
                .cost(&seller, n)
                .expect("validated market has seller costs");
            tentative.insert(
                n.clone(),
                Transaction {
                    path: vec![seller.clone(), n.clone()],
                    cost: w,
                },
            );
        }
    }

    loop {
        let next = tentative
            .iter()
            .reduce(|best, cur| if better(cur.1, best.1) { cur } else { best })
            .map(|(id, _)| id.clone());
        let Some(u) = next else { break };
        let label = tentative.remove(&u).expect("selected from tentative");

        if let Some(Report::Neighbors(declared)) = p.get(&u) {
            for v in declared {
                if !valid.contains(v) || settled.contains_key(v) || v == &u {
                    continue;
                }
                let w = m.cost(&u, v).expect("validated market has edge costs");
                let mut path = label.path.clone();
                path.push(v.clone());
                let cand = Transaction {
                    path,
                    cost: label.cost + w,
                };
                match tentative.get(v) {
                    Some(cur) if !better(&cand, cur) => {}
                    _ => {
                        tentative.insert(v.clone(), cand);
                    }
                }
            }
        }
        settled.insert(u, label);
    }
    settled
}

/// The cheapest seller-to-buyer transaction for a valid buyer.
pub fn cheapest_transaction<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    j: &AgentId,
) -> Result<Transaction<S>> {
    if !m.is_buyer(j) {
        return Err(Error::NotBuyer(j.clone()));
    }
    cheapest_paths(m, p)
        .remove(j)
        .ok_or_else(|| Error::InvalidAgent(j.clone()))
}

pub fn welfare_table<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> WelfareTable<S> {
    let mut per_buyer = BTreeMap::new();
    let mut path = BTreeMap::new();
    for (id, t) in cheapest_paths(m, p) {
        if let Some(bid) = p.bid(&id) {
            per_buyer.insert(id.clone(), bid - t.cost);
            path.insert(id, t);
        }
    }
    WelfareTable { per_buyer, path }
}

/// Valid buyers ordered by welfare descending, ties by tie-breaking rank.
pub fn ranked_buyers<S: Scalar>(m: &Market<S>, table: &WelfareTable<S>) -> Vec<(AgentId, S)> {
    let mut ranked: Vec<(AgentId, S)> = table
        .per_buyer
        .iter()
        .map(|(id, w)| (id.clone(), *w))
        .collect();
    ranked.sort_by(|(ia, wa), (ib, wb)| cmp(wb, wa).then_with(|| m.rank(ia).cmp(&m.rank(ib))));
    ranked
}

/// Selects up to K buyers with the highest nonnegative welfare.
pub fn efficient_allocation<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> Allocation<S> {
    let mut table = welfare_table(m, p);
    let chosen: Vec<Transaction<S>> = ranked_buyers(m, &table)
        .into_iter()
        .take_while(|(_, w)| *w >= S::zero())
        .take(m.item_count())
        .map(|(id, _)| table.path.remove(&id).expect("table has a path per buyer"))
        .collect();
    Allocation::from_transactions(chosen)
}

pub fn kth_welfare<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>, k: usize) -> S {
    welfare_table(m, p).kth(k)
}

/// Winner bids minus total transaction cost.
pub fn social_welfare<S: Scalar>(a: &Allocation<S>, p: &ReportProfile<S>) -> S {
    let bids: S = a
        .winners
        .iter()
        .map(|j| p.bid(j).unwrap_or_else(S::zero))
        .sum();
    bids - total_cost(a)
}

pub fn total_cost<S: Scalar>(a: &Allocation<S>) -> S {
    a.transactions.iter().map(|t| t.cost).sum()
}

/// Total cost computed edge by edge as `sum of w * n` over the allocation graph.
pub fn separable_cost<S: Scalar>(m: &Market<S>, a: &Allocation<S>) -> S {
    a.edge_count
        .iter()
        .map(|((x, y), n)| {
            let w = m.cost(x, y).unwrap_or_else(S::zero);
            w * S::from_usize(*n).expect("small count")
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig1_as};
    use crate::market::{build_market, ids, AgentRecord};
    use crate::scalar::Rational;

    fn path(names: &[&str]) -> Vec<AgentId> {
        names.iter().map(|s| AgentId::from(*s)).collect()
    }

    #[test]
    fn fig1_cheapest_transactions() {
        let m = fig1();
        let p = m.truthful_profile();
        let t = cheapest_transaction(&m, &p, &"d1".into()).unwrap();
        assert_eq!(t.path, path(&["s", "A", "D", "d1"]));
        assert_eq!(t.cost, 2.0);
        let t = cheapest_transaction(&m, &p, &"s2".into()).unwrap();
        assert_eq!(t.path, path(&["s", "s2"]));
        assert_eq!(t.cost, 0.0);
        let t = cheapest_transaction(&m, &p, &"e2".into()).unwrap();
        assert_eq!(t.path, path(&["s", "B", "E", "e2"]));
        assert_eq!(t.cost, 1.0);
    }

    #[test]
    fn cheapest_transaction_errors() {
        let m = fig1();
        let p = m.truthful_profile().without(&"E".into()).unwrap();
        assert_eq!(
            cheapest_transaction(&m, &p, &"e1".into()).unwrap_err(),
            Error::InvalidAgent("e1".into())
        );
        assert_eq!(
            cheapest_transaction(&m, &p, &"A".into()).unwrap_err(),
            Error::NotBuyer("A".into())
        );
    }

    #[test]
    fn fig1_welfare_table() {
        let m = fig1();
        let t = welfare_table(&m, &m.truthful_profile());
        let expect = [
            ("d1", 28.0),
            ("b1", 12.0),
            ("e2", 11.0),
            ("d2", 10.0),
            ("b2", 7.0),
            ("a1", 4.0),
            ("s2", 3.0),
            ("s3", 2.0),
            ("s4", 2.0),
            ("s1", 1.0),
            // both sit behind the cost-1 edge to B
            ("c1", 0.0),
            ("e1", 2.0),
        ];
        assert_eq!(t.per_buyer.len(), 12);
        for (id, w) in expect {
            assert_eq!(t.per_buyer[&AgentId::from(id)], w, "{id}");
        }
    }

    #[test]
    fn negative_welfare_is_kept() {
        let m = build_market(
            [
                AgentRecord::intermediary("A", ids(["j"])),
                AgentRecord::buyer("j", 0.0),
            ],
            ids(["A"]),
            [
                (AgentId::seller(), AgentId::from("A"), 1.0),
                (AgentId::from("A"), AgentId::from("j"), 0.0),
            ],
            1,
        )
        .unwrap();
        let p = m.truthful_profile();
        assert_eq!(welfare_table(&m, &p).per_buyer[&AgentId::from("j")], -1.0);
        assert!(efficient_allocation(&m, &p).winners.is_empty());
        assert_eq!(kth_welfare(&m, &p, 1), 0.0);
    }

    #[test]
    fn fig1_efficient_allocation() {
        let m = fig1();
        let p = m.truthful_profile();
        let a = efficient_allocation(&m, &p);
        assert_eq!(a.winners, ids(["d1", "b1", "e2"]));
        assert_eq!(social_welfare(&a, &p), 51.0);
        assert_eq!(total_cost(&a), 4.0);
        assert_eq!(separable_cost(&m, &a), 4.0);
        assert_eq!(a.leaves(), a.winners);
        assert_eq!(a.through_count[&AgentId::from("B")], 2);
        assert_eq!(a.nodes(), ids(["A", "B", "D", "E", "b1", "d1", "e2"]));

        let pb = p.without(&"B".into()).unwrap();
        let a = efficient_allocation(&m, &pb);
        assert_eq!(a.winners, ids(["d1", "d2", "a1"]));
        assert_eq!(social_welfare(&a, &pb), 42.0);
    }

    #[test]
    fn short_candidate_list_all_win() {
        let m = fig1().with_item_count(20).unwrap();
        let p = m.truthful_profile();
        let a = efficient_allocation(&m, &p);
        assert_eq!(a.winners.len(), 12);
    }

    #[test]
    fn kth_welfare_examples() {
        let m = fig1();
        let p = m.truthful_profile();
        assert_eq!(kth_welfare(&m, &p.without(&"B".into()).unwrap(), 3), 4.0);
        let r = p.restrict_neighbors(&"B".into(), &ids(["b2"])).unwrap();
        assert_eq!(kth_welfare(&m, &r, 3), 7.0);
        let empty = p.with_declared(&"A".into(), Default::default());
        let empty = ["B", "s1", "s2", "s3", "s4"]
            .iter()
            .fold(empty, |q, id| q.without(&AgentId::from(*id)).unwrap());
        assert_eq!(kth_welfare(&m, &empty, 1), 0.0);
        assert_eq!(kth_welfare(&m, &empty, 5), 0.0);
    }

    #[test]
    fn social_welfare_and_cost_edge_cases() {
        let m = fig1();
        let p = m.truthful_profile();
        let empty: Allocation = Allocation::empty();
        assert_eq!(social_welfare(&empty, &p), 0.0);
        assert_eq!(total_cost(&empty), 0.0);

        let direct =
            Allocation::from_transactions(
                vec![Transaction::along(&m, path(&["s", "s2"])).unwrap()],
            );
        assert_eq!(total_cost(&direct), 0.0);

        let d = Allocation::from_transactions(vec![
            Transaction::along(&m, path(&["s", "A", "D", "d1"])).unwrap(),
            Transaction::along(&m, path(&["s", "A", "D", "d2"])).unwrap(),
        ]);
        assert_eq!(d.edge_count[&("s".into(), "A".into())], 2);
        assert_eq!(d.edge_count[&("A".into(), "D".into())], 2);
        assert_eq!(total_cost(&d), 4.0);
        assert_eq!(separable_cost(&m, &d), 4.0);
    }

    #[test]
    fn exact_scalar_reproduces_fig1() {
        let m = fig1_as::<Rational>();
        let p = m.truthful_profile();
        let a = efficient_allocation(&m, &p);
        assert_eq!(social_welfare(&a, &p), Rational::from_integer(51));
        let m32 = fig1_as::<f32>();
        let a = efficient_allocation(&m32, &m32.truthful_profile());
        assert_eq!(social_welfare(&a, &m32.truthful_profile()), 51.0f32);
    }

    #[test]
    fn lexicographic_tie_on_equal_cost_paths() {
        // two zero-cost routes to j: via X and via Y; X < Y
        let m = build_market(
            [
                AgentRecord::intermediary("X", ids(["j"])),
                AgentRecord::intermediary("Y", ids(["j"])),
                AgentRecord::buyer("j", 1.0),
            ],
            ids(["X", "Y"]),
            [
                (AgentId::seller(), AgentId::from("X"), 0.0),
                (AgentId::seller(), AgentId::from("Y"), 0.0),
                (AgentId::from("X"), AgentId::from("j"), 0.0),
                (AgentId::from("Y"), AgentId::from("j"), 0.0),
            ],
            1,
        )
        .unwrap();
        let p = m.truthful_profile();
        let t = cheapest_transaction(&m, &p, &"j".into()).unwrap();
        assert_eq!(t.path, path(&["s", "X", "j"]));
        // a seeded order can prefer Y
        let picks: BTreeSet<Vec<AgentId>> = (0..16)
            .map(|seed| {
                let m = m.clone().with_tie_seed(seed);
                cheapest_transaction(&m, &p, &"j".into()).unwrap().path
            })
            .collect();
        assert_eq!(picks.len(), 2);
    }

    #[test]
    fn zero_cost_cycle_terminates_with_simple_path() {
        let m = build_market(
            [
                AgentRecord::intermediary("X", ids(["Y", "j"])),
                AgentRecord::intermediary("Y", ids(["X", "j"])),
                AgentRecord::buyer("j", 2.0),
            ],
            ids(["X"]),
            [
                (AgentId::seller(), AgentId::from("X"), 0.0),
                (AgentId::from("X"), AgentId::from("Y"), 0.0),
                (AgentId::from("X"), AgentId::from("j"), 1.0),
                (AgentId::from("Y"), AgentId::from("j"), 0.0),
            ],
            1,
        )
        .unwrap();
        let t = cheapest_transaction(&m, &m.truthful_profile(), &"j".into()).unwrap();
        assert_eq!(t.path, path(&["s", "X", "Y", "j"]));
        assert_eq!(t.cost, 0.0);
    }
}
