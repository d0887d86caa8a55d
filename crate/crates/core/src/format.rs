//! Text formats: the market file and the profile-override file.
//!
//! Both are JSON documents. Field order is fixed by the struct layout so that
//! serialization is byte-stable, which the content digest relies on.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::market::{build_market, AgentId, AgentKind, AgentRecord, Market, Report, ReportProfile};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketDoc {
    pub k: usize,
    pub seller_neighbors: Vec<AgentId>,
    pub agents: Vec<AgentDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentDoc {
    pub id: AgentId,
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbors: Option<Vec<AgentId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: AgentId,
    pub to: AgentId,
    pub w: f64,
}

impl MarketDoc {
    pub fn from_market<S: Scalar>(m: &Market<S>) -> Self {
        MarketDoc {
            k: m.item_count(),
            seller_neighbors: m.seller_neighbors().iter().cloned().collect(),
            agents: m
                .agents()
                .map(|r| AgentDoc {
                    id: r.id.clone(),
                    kind: r.kind,
                    neighbors: match r.kind {
                        AgentKind::Intermediary => Some(r.true_neighbors.iter().cloned().collect()),
                        AgentKind::Buyer => None,
                    },
                    value: r.true_value.map(Scalar::to_f64_lossy),
                })
                .collect(),
            edges: m
                .cost_entries()
                .map(|(from, to, w)| EdgeDoc {
                    from: from.clone(),
                    to: to.clone(),
                    w: w.to_f64_lossy(),
                })
                .collect(),
        }
    }

    pub fn into_market<S: Scalar>(self) -> Result<Market<S>> {
        let mut records = Vec::with_capacity(self.agents.len());
        for a in self.agents {
            let neighbors: BTreeSet<AgentId> =
                a.neighbors.unwrap_or_default().into_iter().collect();
            records.push(AgentRecord {
                id: a.id,
                kind: a.kind,
                true_neighbors: neighbors,
                true_value: a.value.map(S::from_decimal),
            });
        }
        build_market(
            records,
            self.seller_neighbors.into_iter().collect(),
            self.edges
                .into_iter()
                .map(|e| (e.from, e.to, S::from_decimal(e.w))),
            self.k,
        )
    }
}

pub fn parse_market<S: Scalar>(text: &str) -> Result<Market<S>> {
    let doc: MarketDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_market()
}

pub fn write_market<S: Scalar>(m: &Market<S>) -> String {
    let mut out = serde_json::to_string_pretty(&MarketDoc::from_market(m))
        .expect("market document serializes");
    out.push('\n');
    out
}

/// Hex SHA-256 of the canonical market serialization.
pub fn market_digest<S: Scalar>(m: &Market<S>) -> String {
    hex::encode(Sha256::digest(write_market(m).as_bytes()))
}

/// Per-agent report overrides applied on top of the truthful profile.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileOverrides {
    #[serde(default)]
    pub bids: BTreeMap<AgentId, f64>,
    #[serde(default)]
    pub neighbors: BTreeMap<AgentId, Vec<AgentId>>,
    /// Agents that do not participate at all.
    #[serde(default)]
    pub absent: Vec<AgentId>,
}

impl ProfileOverrides {
    /// The overrides that turn the truthful profile of `m` into `p`.
    pub fn from_profile<S: Scalar>(m: &Market<S>, p: &ReportProfile<S>) -> Self {
        let mut out = ProfileOverrides::default();
        for r in m.agents() {
            match p.get(&r.id) {
                None => out.absent.push(r.id.clone()),
                Some(Report::Bid(b)) => {
                    if r.true_value != Some(*b) {
                        out.bids.insert(r.id.clone(), b.to_f64_lossy());
                    }
                }
                Some(Report::Neighbors(set)) => {
                    if set != &r.true_neighbors {
                        out.neighbors
                            .insert(r.id.clone(), set.iter().cloned().collect());
                    }
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn apply<S: Scalar>(&self, m: &Market<S>) -> Result<ReportProfile<S>> {
        let mut p = m.truthful_profile();
        for (id, bid) in &self.bids {
            if !m.is_buyer(id) {
                return Err(Error::NotBuyer(id.clone()));
            }
            p = p.with_bid(id, S::from_decimal(*bid));
        }
        for (id, declared) in &self.neighbors {
            if !m.is_intermediary(id) {
                return Err(Error::NotIntermediary(id.clone()));
            }
            p = p.with_declared(id, declared.iter().cloned().collect());
        }
        for id in &self.absent {
            if m.agent(id).is_none() {
                return Err(Error::UnknownAgent(id.clone()));
            }
            p = p.without(id)?;
        }
        m.check_profile(&p)?;
        Ok(p)
    }
}


/// A single report in document form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportDoc {
    Bid(f64),
    Neighbors(Vec<AgentId>),
}

impl ReportDoc {
    pub fn from_report<S: Scalar>(r: &Report<S>) -> Self {
        match r {
            Report::Bid(b) => ReportDoc::Bid(b.to_f64_lossy()),
            Report::Neighbors(set) => ReportDoc::Neighbors(set.iter().cloned().collect()),
        }
    }

    pub fn to_report<S: Scalar>(&self) -> Report<S> {
        match self {
            ReportDoc::Bid(b) => Report::Bid(S::from_decimal(*b)),
            ReportDoc::Neighbors(v) => Report::Neighbors(v.iter().cloned().collect()),
        }
    }
}
