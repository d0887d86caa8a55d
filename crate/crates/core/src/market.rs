//! Intermediary market model: agents, neighbor relations, edge costs, report
//! profiles and diffusion validity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reserved id of the seller.
pub const SELLER: &str = "s";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(id: impl Into<String>) -> Self {
        AgentId(id.into())
    }

    pub fn seller() -> Self {
        AgentId(SELLER.to_owned())
    }

    pub fn is_seller(&self) -> bool {
        self.0 == SELLER
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        AgentId(s.to_owned())
    }
}

impl From<String> for AgentId {
    fn from(s: String) -> Self {
        AgentId(s)
    }
}

/// Builds an id set from string literals.
pub fn ids<'a>(names: impl IntoIterator<Item = &'a str>) -> BTreeSet<AgentId> {
    names.into_iter().map(AgentId::from).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Intermediary,
    Buyer,
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentKind::Intermediary => f.write_str("intermediary"),
            AgentKind::Buyer => f.write_str("buyer"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AgentRecord<S = f64> {
    pub id: AgentId,
    pub kind: AgentKind,
    /// Intermediaries only.
    pub true_neighbors: BTreeSet<AgentId>,
    /// Buyers only.
    pub true_value: Option<S>,
}

impl<S: Scalar> AgentRecord<S> {
    pub fn intermediary(id: impl Into<AgentId>, neighbors: BTreeSet<AgentId>) -> Self {
        AgentRecord {
            id: id.into(),
            kind: AgentKind::Intermediary,
            true_neighbors: neighbors,
            true_value: None,
        }
    }

    pub fn buyer(id: impl Into<AgentId>, value: S) -> Self {
        AgentRecord {
            id: id.into(),
            kind: AgentKind::Buyer,
            true_neighbors: BTreeSet::new(),
            true_value: Some(value),
        }
    }
}

/// A directed neighbor relation `(from, to)`; `from` is the seller or an
/// intermediary.
pub type Edge = (AgentId, AgentId);

/// A validated intermediary market.
#[derive(Clone, Debug, PartialEq)]
pub struct Market<S = f64> {
    agents: BTreeMap<AgentId, AgentRecord<S>>,
    seller_neighbors: BTreeSet<AgentId>,
    /// Cost entries as supplied; looked up symmetrically.
    edge_cost: BTreeMap<Edge, S>,
    item_count: usize,
    /// Tie-breaking rank of every agent (seller is 0).
    rank: BTreeMap<AgentId, u32>,
}

/// Validates and assembles a market.
pub fn build_market<S: Scalar>(
    records: impl IntoIterator<Item = AgentRecord<S>>,
    seller_neighbors: BTreeSet<AgentId>,
    costs: impl IntoIterator<Item = (AgentId, AgentId, S)>,
    item_count: usize,
) -> Result<Market<S>> {
    let mut agents = BTreeMap::new();
    for record in records {
        if record.id.is_seller() {
            return Err(Error::ReservedId(record.id));
        }
        if agents.contains_key(&record.id) {
            return Err(Error::DuplicateAgent(record.id));
        }
        agents.insert(record.id.clone(), record);
    }
    if agents.is_empty() {
        return Err(Error::EmptyMarket);
    }
    if item_count < 1 {
        return Err(Error::ZeroItems);
    }

    for record in agents.values() {
        match record.kind {
            AgentKind::Buyer => {
                if !record.true_neighbors.is_empty() {
                    return Err(Error::BuyerWithNeighbors(record.id.clone()));
                }
                match record.true_value {
                    None => return Err(Error::MissingValue(record.id.clone())),
                    Some(v) if v < S::zero() || !v.is_finite_value() => {
                        return Err(Error::InvalidValue(record.id.clone()))
                    }
                    Some(_) => {}
                }
            }
            AgentKind::Intermediary => {
                if record.true_value.is_some() {
                    return Err(Error::IntermediaryWithValue(record.id.clone()));
                }
                for n in &record.true_neighbors {
                    if n == &record.id || n.is_seller() {
                        return Err(Error::SelfOrSellerNeighbor(record.id.clone()));
                    }
                    if !agents.contains_key(n) {
                        return Err(Error::UnknownAgent(n.clone()));
                    }
                }
            }
        }
    }
    for n in &seller_neighbors {
        if n.is_seller() {
            return Err(Error::SelfOrSellerNeighbor(n.clone()));
        }
        if !agents.contains_key(n) {
            return Err(Error::UnknownAgent(n.clone()));
        }
    }

    let is_edge = |from: &AgentId, to: &AgentId| -> bool {
        if from.is_seller() {
            seller_neighbors.contains(to)
        } else {
            agents
                .get(from)
                .is_some_and(|r| r.true_neighbors.contains(to))
        }
    };

    let mut edge_cost = BTreeMap::new();
    for (from, to, w) in costs {
        if w < S::zero() || !w.is_finite_value() {
            return Err(Error::NegativeCost(from, to));
        }
        for id in [&from, &to] {
            if !id.is_seller() && !agents.contains_key(id) {
                return Err(Error::UnknownAgent(id.clone()));
            }
        }
        if !is_edge(&from, &to) && !is_edge(&to, &from) {
            return Err(Error::CostOnNonEdge(from, to));
        }
        let reverse = (to.clone(), from.clone());
        let key = (from, to);
        if edge_cost.contains_key(&key) || edge_cost.contains_key(&reverse) {
            return Err(Error::DuplicateCost(key.0, key.1));
        }
        edge_cost.insert(key, w);
    }

    let lookup = |a: &AgentId, b: &AgentId| {
        edge_cost.contains_key(&(a.clone(), b.clone()))
            || edge_cost.contains_key(&(b.clone(), a.clone()))
    };
    for n in &seller_neighbors {
        if !lookup(&AgentId::seller(), n) {
            return Err(Error::MissingCost(AgentId::seller(), n.clone()));
        }
    }
    for record in agents.values() {
        for n in &record.true_neighbors {
            if !lookup(&record.id, n) {
                return Err(Error::MissingCost(record.id.clone(), n.clone()));
            }
        }
    }

    let rank = default_rank(agents.keys());
    Ok(Market {
        agents,
        seller_neighbors,
        edge_cost,
        item_count,
        rank,
    })
}

fn default_rank<'a>(ids: impl Iterator<Item = &'a AgentId>) -> BTreeMap<AgentId, u32> {
    let mut rank = BTreeMap::new();
    rank.insert(AgentId::seller(), 0);
    for (i, id) in ids.enumerate() {
        rank.insert(id.clone(), i as u32 + 1);
    }
    rank
}

impl<S: Scalar> Market<S> {
    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn seller_neighbors(&self) -> &BTreeSet<AgentId> {
        &self.seller_neighbors
    }

    pub fn agents(&self) -> impl Iterator<Item = &AgentRecord<S>> {
        self.agents.values()
    }

    pub fn agent(&self, id: &AgentId) -> Option<&AgentRecord<S>> {
        self.agents.get(id)
    }

    pub fn kind(&self, id: &AgentId) -> Option<AgentKind> {
        self.agents.get(id).map(|r| r.kind)
    }

    pub fn is_buyer(&self, id: &AgentId) -> bool {
        self.kind(id) == Some(AgentKind::Buyer)
    }

    pub fn is_intermediary(&self, id: &AgentId) -> bool {
        self.kind(id) == Some(AgentKind::Intermediary)
    }

    pub fn buyers(&self) -> impl Iterator<Item = &AgentId> {
        self.agents
            .values()
            .filter(|r| r.kind == AgentKind::Buyer)
            .map(|r| &r.id)
    }

    pub fn intermediaries(&self) -> impl Iterator<Item = &AgentId> {
        self.agents
            .values()
            .filter(|r| r.kind == AgentKind::Intermediary)
            .map(|r| &r.id)
    }

    pub fn true_value(&self, id: &AgentId) -> Option<S> {
        self.agents.get(id).and_then(|r| r.true_value)
    }

    pub fn true_neighbors(&self, id: &AgentId) -> Option<&BTreeSet<AgentId>> {
        if id.is_seller() {
            return Some(&self.seller_neighbors);
        }
        self.agents
            .get(id)
            .filter(|r| r.kind == AgentKind::Intermediary)
            .map(|r| &r.true_neighbors)
    }

    /// Per-transaction cost of the adjacent pair, read symmetrically.
    pub fn cost(&self, a: &AgentId, b: &AgentId) -> Option<S> {
        self.edge_cost
            .get(&(a.clone(), b.clone()))
            .or_else(|| self.edge_cost.get(&(b.clone(), a.clone())))
            .copied()
    }

    /// Cost entries in the orientation they were supplied.
    pub fn cost_entries(&self) -> impl Iterator<Item = (&AgentId, &AgentId, S)> {
        self.edge_cost.iter().map(|((a, b), w)| (a, b, *w))
    }

    /// All true neighbor relations, seller edges first.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .seller_neighbors
            .iter()
            .map(|n| (AgentId::seller(), n.clone()))
            .collect();
        for r in self.agents.values() {
            for n in &r.true_neighbors {
                out.push((r.id.clone(), n.clone()));
            }
        }
        out
    }

    /// Tie-breaking rank; lower ranks win ties.
    pub fn rank(&self, id: &AgentId) -> u32 {
        self.rank.get(id).copied().unwrap_or(u32::MAX)
    }

    /// Replaces the lexicographic tie-breaking order with a seeded permutation.
    pub fn with_tie_seed(mut self, seed: u64) -> Self {
        let mut order: Vec<AgentId> = self.agents.keys().cloned().collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        self.rank = default_rank(order.iter());
        self
    }

    pub fn with_item_count(&self, item_count: usize) -> Result<Self> {
        if item_count < 1 {
            return Err(Error::ZeroItems);
        }
        let mut m = self.clone();
        m.item_count = item_count;
        Ok(m)
    }

    pub fn records(&self) -> Vec<AgentRecord<S>> {
        self.agents.values().cloned().collect()
    }

    /// Converts every value and cost to another scalar type.
    pub fn convert<T: Scalar>(&self) -> Market<T> {
        let conv = |x: S| T::from_decimal(x.to_f64_lossy());
        Market {
            agents: self
                .agents
                .iter()
                .map(|(id, r)| {
                    (
                        id.clone(),
                        AgentRecord {
                            id: r.id.clone(),
                            kind: r.kind,
                            true_neighbors: r.true_neighbors.clone(),
                            true_value: r.true_value.map(conv),
                        },
                    )
                })
                .collect(),
            seller_neighbors: self.seller_neighbors.clone(),
            edge_cost: self
                .edge_cost
                .iter()
                .map(|(e, w)| (e.clone(), conv(*w)))
                .collect(),
            item_count: self.item_count,
            rank: self.rank.clone(),
        }
    }

    /// True when every agent has exactly one incoming neighbor relation and is
    /// reachable from the seller, i.e. exactly one diffusion path reaches it.
    pub fn is_tree(&self) -> bool {
        let mut indegree: BTreeMap<&AgentId, usize> = BTreeMap::new();
        for n in &self.seller_neighbors {
            *indegree.entry(n).or_default() += 1;
        }
        for r in self.agents.values() {
            for n in &r.true_neighbors {
                *indegree.entry(n).or_default() += 1;
            }
        }
        let single_parent = self
            .agents
            .keys()
            .all(|id| indegree.get(id).copied() == Some(1));
        single_parent && self.valid_agents(&self.truthful_profile()).len() == self.agents.len()
    }

    /// Largest true neighbor-set size over all intermediaries.
    pub fn max_degree(&self) -> usize {
        self.agents
            .values()
            .map(|r| r.true_neighbors.len())
            .max()
            .unwrap_or(0)
    }

    /// Every buyer bids its value and every intermediary declares all neighbors.
    pub fn truthful_profile(&self) -> ReportProfile<S> {
        let reports = self
            .agents
            .values()
            .map(|r| {
                let report = match r.kind {
                    AgentKind::Buyer => Report::Bid(r.true_value.unwrap_or_else(S::zero)),
                    AgentKind::Intermediary => Report::Neighbors(r.true_neighbors.clone()),
                };
                (r.id.clone(), report)
            })
            .collect();
        ReportProfile { reports }
    }

    /// Checks that a profile lies within the agents' misreport spaces.
    pub fn check_profile(&self, p: &ReportProfile<S>) -> Result<()> {
        for (id, report) in &p.reports {
            let record = self
                .agents
                .get(id)
                .ok_or_else(|| Error::UnknownAgent(id.clone()))?;
            match (record.kind, report) {
                (AgentKind::Buyer, Report::Bid(b)) => {
                    if *b < S::zero() || !b.is_finite_value() {
                        return Err(Error::InvalidValue(id.clone()));
                    }
                }
                (AgentKind::Intermediary, Report::Neighbors(set)) => {
                    if !set.is_subset(&record.true_neighbors) {
                        return Err(Error::DeclaredNotSubset(id.clone()));
                    }
                }
                _ => return Err(Error::ReportKindMismatch(id.clone())),
            }
        }
        Ok(())
    }

    /// Agents reachable from the seller through declared neighbor sets.
    ///
    /// Agents without a report are treated as absent: they are never valid and
    /// never relay. Buyers are sinks.
    pub fn valid_agents(&self, p: &ReportProfile<S>) -> BTreeSet<AgentId> {
        let mut valid = BTreeSet::new();
        let mut queue = VecDeque::new();
        for n in &self.seller_neighbors {
            if p.reports.contains_key(n) && valid.insert(n.clone()) {
                queue.push_back(n.clone());
            }
        }
        while let Some(u) = queue.pop_front() {
            if let Some(Report::Neighbors(declared)) = p.reports.get(&u) {
                for v in declared {
                    if self.agents.contains_key(v)
                        && p.reports.contains_key(v)
                        && valid.insert(v.clone())
                    {
                        queue.push_back(v.clone());
                    }
                }
            }
        }
        valid
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Report<S = f64> {
    Bid(S),
    Neighbors(BTreeSet<AgentId>),
}

/// Declared types of all participating agents. An agent with no entry is
/// treated as not participating.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ReportProfile<S = f64> {
    reports: BTreeMap<AgentId, Report<S>>,
}

impl<S: Scalar> ReportProfile<S> {
    pub fn from_reports(reports: BTreeMap<AgentId, Report<S>>) -> Self {
        ReportProfile { reports }
    }

    pub fn get(&self, id: &AgentId) -> Option<&Report<S>> {
        self.reports.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AgentId, &Report<S>)> {
        self.reports.iter()
    }

    pub fn contains(&self, id: &AgentId) -> bool {
        self.reports.contains_key(id)
    }

    pub fn bid(&self, id: &AgentId) -> Option<S> {
        match self.reports.get(id) {
            Some(Report::Bid(b)) => Some(*b),
            _ => None,
        }
    }

    pub fn declared(&self, id: &AgentId) -> Option<&BTreeSet<AgentId>> {
        match self.reports.get(id) {
            Some(Report::Neighbors(set)) => Some(set),
            _ => None,
        }
    }

    /// Replaces (or inserts) one agent's report without validation.
    pub fn with_report(&self, id: &AgentId, report: Report<S>) -> Self {
        let mut p = self.clone();
        p.reports.insert(id.clone(), report);
        p
    }

    pub fn with_bid(&self, id: &AgentId, bid: S) -> Self {
        self.with_report(id, Report::Bid(bid))
    }

    pub fn with_declared(&self, id: &AgentId, declared: BTreeSet<AgentId>) -> Self {
        self.with_report(id, Report::Neighbors(declared))
    }

    /// The profile with agent `k` absent.
    pub fn without(&self, k: &AgentId) -> Result<Self> {
        if k.is_seller() {
            return Err(Error::RemoveSeller);
        }
        let mut p = self.clone();
        p.reports.remove(k);
        Ok(p)
    }

    /// The profile with intermediary `i`'s declaration narrowed to `subset`.
    pub fn restrict_neighbors(&self, i: &AgentId, subset: &BTreeSet<AgentId>) -> Result<Self> {
        match self.reports.get(i) {
            Some(Report::Neighbors(current)) => {
                if !subset.is_subset(current) {
                    return Err(Error::RestrictionNotSubset(i.clone()));
                }
                Ok(self.with_declared(i, subset.clone()))
            }
            Some(Report::Bid(_)) => Err(Error::NotIntermediary(i.clone())),
            None => Err(Error::MissingReport(i.clone())),
        }
    }

    pub fn convert<T: Scalar>(&self) -> ReportProfile<T> {
        ReportProfile {
            reports: self
                .reports
                .iter()
                .map(|(id, r)| {
                    let r = match r {
                        Report::Bid(b) => Report::Bid(T::from_decimal(b.to_f64_lossy())),
                        Report::Neighbors(set) => Report::Neighbors(set.clone()),
                    };
                    (id.clone(), r)
                })
                .collect(),
        }
    }
}

pub fn truthful_profile<S: Scalar>(m: &Market<S>) -> ReportProfile<S> {
    m.truthful_profile()
}

pub fn valid_agents<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> BTreeSet<AgentId> {
    m.valid_agents(p)
}

/// Drops agent `k`'s report; agents reachable only through `k` lose validity.
pub fn remove_agent<S: Scalar>(
    m: &Market<S>,
    p: &ReportProfile<S>,
    k: &AgentId,
) -> Result<ReportProfile<S>> {
    if !k.is_seller() && m.agent(k).is_none() {
        return Err(Error::UnknownAgent(k.clone()));
    }
    p.without(k)
}

pub fn restrict_neighbors<S: Scalar>(
    p: &ReportProfile<S>,
    i: &AgentId,
    subset: &BTreeSet<AgentId>,
) -> Result<ReportProfile<S>> {
    p.restrict_neighbors(i, subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;

    fn single_buyer() -> Market {
        build_market(
            [AgentRecord::buyer("j", 5.0)],
            ids(["j"]),
            [(AgentId::seller(), AgentId::from("j"), 0.0)],
            1,
        )
        .unwrap()
    }

    #[test]
    fn fig1_shape() {
        let m = fig1();
        assert_eq!(m.intermediaries().count(), 5);
        assert_eq!(m.buyers().count(), 12);
        assert_eq!(m.item_count(), 3);
        assert!(m.is_tree());
    }

    #[test]
    fn minimal_market_builds() {
        let m = single_buyer();
        let p = m.truthful_profile();
        assert_eq!(p.bid(&"j".into()), Some(5.0));
        assert_eq!(m.valid_agents(&p), ids(["j"]));
    }

    #[test]
    fn unknown_neighbor_rejected() {
        let err = build_market(
            [AgentRecord::intermediary("A", ids(["ghost"]))],
            ids(["A"]),
            [(AgentId::seller(), AgentId::from("A"), 1.0)],
            1,
        )
        .unwrap_err();
        assert_eq!(err, Error::UnknownAgent("ghost".into()));
    }

    #[test]
    fn construction_errors() {
        let buyer = || AgentRecord::buyer("j", 1.0);
        let seller_j = || (AgentId::seller(), AgentId::from("j"), 0.0);
        assert_eq!(
            build_market([buyer(), buyer()], ids(["j"]), [seller_j()], 1).unwrap_err(),
            Error::DuplicateAgent("j".into())
        );
        assert_eq!(
            build_market(
                [buyer()],
                ids(["j"]),
                [(AgentId::seller(), AgentId::from("j"), -1.0)],
                1
            )
            .unwrap_err(),
            Error::NegativeCost("s".into(), "j".into())
        );
        assert_eq!(
            build_market([buyer()], ids(["j"]), [seller_j()], 0).unwrap_err(),
            Error::ZeroItems
        );
        assert_eq!(
            build_market(
                [buyer(), AgentRecord::buyer("k", 1.0)],
                ids(["j"]),
                [seller_j(), (AgentId::from("j"), AgentId::from("k"), 0.0)],
                1
            )
            .unwrap_err(),
            Error::CostOnNonEdge("j".into(), "k".into())
        );
        assert_eq!(
            build_market([buyer()], ids(["j"]), Vec::new(), 1).unwrap_err(),
            Error::MissingCost("s".into(), "j".into())
        );
        assert_eq!(
            build_market(
                [buyer()],
                ids(["j"]),
                [seller_j(), (AgentId::from("j"), AgentId::seller(), 0.0)],
                1
            )
            .unwrap_err(),
            Error::DuplicateCost("j".into(), "s".into())
        );
        assert_eq!(
            build_market(Vec::<AgentRecord>::new(), BTreeSet::new(), Vec::new(), 1).unwrap_err(),
            Error::EmptyMarket
        );
        assert_eq!(
            build_market(
                [AgentRecord::buyer("s", 1.0)],
                BTreeSet::new(),
                Vec::new(),
                1
            )
            .unwrap_err(),
            Error::ReservedId("s".into())
        );
    }

    #[test]
    fn truthful_profile_of_fig1() {
        let m = fig1();
        let p = truthful_profile(&m);
        assert_eq!(p.bid(&"b1".into()), Some(13.0));
        assert_eq!(p.declared(&"B".into()), Some(&ids(["b1", "b2", "C", "E"])));
        // pure: deriving variants leaves the original untouched
        let _ = p.with_bid(&"b1".into(), 0.0);
        assert_eq!(p, m.truthful_profile());
        m.check_profile(&p).unwrap();
    }

    #[test]
    fn fig1_truthful_all_valid() {
        let m = fig1();
        assert_eq!(m.valid_agents(&m.truthful_profile()).len(), 17);
    }

    #[test]
    fn fig1_b_withholds_e() {
        let m = fig1();
        let p = m
            .truthful_profile()
            .with_declared(&"B".into(), ids(["b1", "b2", "C"]));
        let valid = m.valid_agents(&p);
        for gone in ["E", "e1", "e2"] {
            assert!(!valid.contains(&gone.into()));
        }
        assert_eq!(valid.len(), 14);

        let p = m
            .truthful_profile()
            .with_declared(&"B".into(), BTreeSet::new());
        let valid = m.valid_agents(&p);
        for gone in ["b1", "b2", "C", "c1", "E", "e1", "e2"] {
            assert!(!valid.contains(&gone.into()));
        }
        assert!(valid.contains(&"B".into()));
        assert_eq!(valid.len(), 10);
    }

    #[test]
    fn removal_semantics() {
        let m = fig1();
        let p = m.truthful_profile();
        let without_b = m.valid_agents(&remove_agent(&m, &p, &"B".into()).unwrap());
        assert_eq!(without_b.len(), 9);
        for gone in ["B", "b1", "b2", "C", "c1", "E", "e1", "e2"] {
            assert!(!without_b.contains(&gone.into()));
        }

        let without_c1 = m.valid_agents(&remove_agent(&m, &p, &"c1".into()).unwrap());
        assert_eq!(without_c1.len(), 16);
        assert!(!without_c1.contains(&"c1".into()));

        let without_c = m.valid_agents(&remove_agent(&m, &p, &"C".into()).unwrap());
        assert_eq!(without_c.len(), 15);
        assert!(!without_c.contains(&"c1".into()));

        assert_eq!(
            remove_agent(&m, &p, &AgentId::seller()).unwrap_err(),
            Error::RemoveSeller
        );
        // the market is untouched
        assert_eq!(m.valid_agents(&m.truthful_profile()).len(), 17);
    }

    #[test]
    fn restriction_semantics() {
        let m = fig1();
        let p = m.truthful_profile();
        let r = restrict_neighbors(&p, &"B".into(), &ids(["b2"])).unwrap();
        let valid = m.valid_agents(&r);
        for gone in ["b1", "C", "c1", "E", "e1", "e2"] {
            assert!(!valid.contains(&gone.into()));
        }
        assert!(valid.contains(&"b2".into()));

        let full = p.declared(&"B".into()).unwrap().clone();
        assert_eq!(restrict_neighbors(&p, &"B".into(), &full).unwrap(), p);

        let r = restrict_neighbors(&p, &"A".into(), &BTreeSet::new()).unwrap();
        let valid = m.valid_agents(&r);
        for gone in ["D", "d1", "d2", "a1"] {
            assert!(!valid.contains(&gone.into()));
        }
        assert_eq!(valid.len(), 13);

        assert_eq!(
            restrict_neighbors(&r, &"A".into(), &ids(["a1"])).unwrap_err(),
            Error::RestrictionNotSubset("A".into())
        );
    }

    #[test]
    fn profile_checks() {
        let m = fig1();
        let p = m.truthful_profile();
        assert_eq!(
            m.check_profile(&p.with_declared(&"C".into(), ids(["c1", "b1"])))
                .unwrap_err(),
            Error::DeclaredNotSubset("C".into())
        );
        assert_eq!(
            m.check_profile(&p.with_bid(&"C".into(), 1.0)).unwrap_err(),
            Error::ReportKindMismatch("C".into())
        );
        assert_eq!(
            m.check_profile(&p.with_bid(&"b1".into(), -1.0))
                .unwrap_err(),
            Error::InvalidValue("b1".into())
        );
    }

    #[test]
    fn tie_seed_permutes_ranks() {
        let m = fig1();
        let shuffled = m.clone().with_tie_seed(3);
        assert_eq!(shuffled.rank(&AgentId::seller()), 0);
        let mut ranks: Vec<u32> = m.agents().map(|r| shuffled.rank(&r.id)).collect();
        ranks.sort();
        assert_eq!(ranks, (1..=17).collect::<Vec<_>>());
    }
}
